//! End-to-end recovery: plant sparse vectors, solve the l1 program, and see how
//! exact recovery and the robustness ratios behave with and without noise.

use nalgebra::DVector;
use riclab::recovery::solver::{l1_solve, RecoveryInstance, SolverOptions};
use riclab::{sample_matrix, srsr_experiment, Ensemble, ExperimentConfig};

fn main() -> riclab::Result<()> {
    // one instance by hand
    let (n, p) = (12, 30);
    let m = sample_matrix(&Ensemble::gaussian(1), n, p) / (n as f64).sqrt();
    let mut x0 = DVector::zeros(p);
    x0[4] = 1.5;
    x0[17] = -0.7;
    let inst = RecoveryInstance::planted(m, x0.clone(), &DVector::zeros(n), 0.0, 2);
    let r = l1_solve(&inst, &SolverOptions::default())?;
    let err = (DVector::from_column_slice(&r.x_hat) - &x0).norm();
    println!(
        "single solve: error {err:.2e}, residual {:.1e}, gap {:.1e}, {} iterations",
        r.feasibility_residual, r.optimality_gap, r.iterations
    );

    for (s, eta) in [(1, 0.0), (3, 0.0), (6, 0.0), (3, 0.05)] {
        let mut cfg = ExperimentConfig::new(Ensemble::gaussian(5), 24, 48, s, 20);
        cfg.eta = eta;
        cfg.noise_level = eta;
        let sum = srsr_experiment(&cfg)?;
        println!(
            "s={s} eta={eta}: exact {}/{}  max r1 {:.3}  max r2 {:.3}",
            sum.exact_recoveries, sum.solves, sum.max_r1, sum.max_r2
        );
    }
    Ok(())
}
