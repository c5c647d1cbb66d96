//! Seeded Monte Carlo estimate of how often the extreme singular values of a
//! Gaussian matrix leave their Marchenko-Pastur edges by more than t, next to
//! the Gaussian concentration bound 2exp(-n t^2/2).

use riclab::lab::deviation::{mc_deviation_with, McConfig, Scale};
use riclab::{mp_edges, Ensemble, Tail};

fn main() -> riclab::Result<()> {
    let (n, rhobar) = (200, 0.1);
    let (lo, hi) = mp_edges(rhobar)?;
    println!(
        "eigenvalue edges ({lo:.4}, {hi:.4}), singular edges ({:.4}, {:.4})",
        lo.sqrt(),
        hi.sqrt()
    );
    for t in [0.02, 0.05, 0.08, 0.1, 0.15] {
        let mut cfg = McConfig::new(Ensemble::gaussian(7), n, rhobar, t, 2000, Tail::Either);
        cfg.scale = Scale::Singular;
        let e = mc_deviation_with(&cfg)?;
        println!(
            "t {t:<5} p_hat {:.4}  95% [{:.4}, {:.4}]  bound {:.4}{}",
            e.p_hat,
            e.ci_low,
            e.ci_high,
            e.theory_bound.unwrap_or(f64::NAN),
            if e.vacuous { " (vacuous)" } else { "" }
        );
    }
    Ok(())
}
