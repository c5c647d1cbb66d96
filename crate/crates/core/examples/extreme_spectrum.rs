//! Extreme eigenvalues of a sample covariance matrix approach the
//! Marchenko-Pastur edges as n grows at fixed aspect ratio.

use riclab::lab::spectrum::gram_rows;
use riclab::{extreme_eigs, mp_edges, Ensemble};

fn main() -> riclab::Result<()> {
    let rhobar = 0.25;
    let (lo, hi) = mp_edges(rhobar)?;
    println!("edges ({lo:.4}, {hi:.4})");
    for n in [40, 160, 640, 2560] {
        let r = (rhobar * n as f64) as usize;
        for kind in [Ensemble::gaussian(2), Ensemble::rademacher(2)] {
            let x = kind.trial_matrix(0, r, n);
            let (min, max) = extreme_eigs(&gram_rows(&x, n as f64))?;
            println!("n={n:<5} {:<10} min {min:.4} max {max:.4}", kind.kind.name());
        }
    }
    Ok(())
}
