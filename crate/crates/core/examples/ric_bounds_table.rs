//! Upper bounds on the restricted isometry constants of Gaussian matrices, on
//! both the eigenvalue and singular-value routes, for a sweep of aspect ratios.

use riclab::bounds::{psi_bounds, Route};
use riclab::{GrowthPoint, RateModel};

fn main() -> riclab::Result<()> {
    let delta = 0.5;
    println!("delta = {delta}, model = ds");
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9}",
        "rhobar", "t0", "min(eig)", "max(eig)", "min(sv)", "max(sv)", "gamma"
    );
    for rhobar in [1e-4, 1e-3, 0.005, 0.01, 0.02, 0.04, 0.08, 0.12] {
        let pt = GrowthPoint::new(delta, rhobar)?;
        let e = psi_bounds(&RateModel::ds(), &pt, Route::Eigen)?;
        let s = psi_bounds(&RateModel::ds(), &pt, Route::Singular)?;
        let gamma = s
            .as_ric()
            .gamma()
            .map(|g| format!("{g:.3}"))
            .unwrap_or_else(|_| "-".into());
        println!(
            "{rhobar:>8} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {gamma:>9}",
            e.t0, e.psi_min, e.psi_max, s.psi_min, s.psi_max
        );
    }
    println!("\nrecovery needs gamma < {:.4}", riclab::gamma0());
    Ok(())
}
