//! The Gaussian recovery threshold delta(rho): pairs below the curve are
//! guaranteed recoverable. Prints a coarse table, the point where the curve
//! crosses delta = 1, and the small-rho approximations for each rate.

use riclab::bounds::{phase_curve, phase_rho_max, small_rho_conditions_ln, Route, PHASE_RHO_MIN};
use riclab::{gaussian_srsr_curve, RateModel};

fn main() -> riclab::Result<()> {
    let rows = phase_curve(&RateModel::ds(), Route::Singular, PHASE_RHO_MIN, phase_rho_max(), 16)?;
    for r in &rows {
        println!(
            "rho {:>10.3e}  delta {:>12.4e}  {}",
            r.rho,
            r.delta_threshold,
            if r.admissible { "ok" } else { "-" }
        );
    }

    let (mut lo, mut hi) = (1e-4, 0.05);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if gaussian_srsr_curve(mid)? < 1.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    println!("\ncurve crosses delta = 1 at rho = {lo:.10}");

    // the thresholds underflow quickly, so compare logs
    println!("\n{:>8} {:>12} {:>12} {:>12}", "rho", "ln ds", "ln lr", "ln fs");
    for rho in [1e-3, 1e-4, 1e-6, 1e-8] {
        println!(
            "{rho:>8} {:>12.3} {:>12.3} {:>12.3}",
            small_rho_conditions_ln(rho, &RateModel::ds())?,
            small_rho_conditions_ln(rho, &RateModel::lr(1.0))?,
            small_rho_conditions_ln(rho, &RateModel::fs(837.0))?,
        );
    }
    Ok(())
}
