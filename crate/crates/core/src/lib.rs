//! Restricted isometry constant bounds for random matrices, the sparse
//! recovery phase transitions they imply, and a seeded random-matrix lab to
//! check them at desk scale.
//!
//! * [`core_math`]: entropy, binomial and Stirling envelopes, universal constants.
//! * [`rate`]: deviation rate functions `W(ρ̄, t)` and their inverses.
//! * [`bounds`]: RIC upper bounds, recovery thresholds on `δ = n/p`, κ and γ.
//! * [`fs`]: explicit Rademacher constants and bound evaluators.
//! * [`lab`]: ensembles, extreme spectra, Monte Carlo deviations, empirical RICs.
//! * [`recovery`]: the ℓ1 estimator with certificates, `σ_s`, recovery experiments.
//! * [`oracle`]: slow, independent reference implementations used by the tests.
//! * [`cli`]: the `riclab` command line.

pub mod bounds;
pub mod cli;
pub mod core_math;
pub mod error;
pub mod fs;
pub mod lab;
pub mod oracle;
pub mod parallel;
pub mod rate;
pub mod recovery;

pub use bounds::{
    d2_exponent, gamma_of, gaussian_srsr_curve, gaussian_srsr_curve_ln, phase_curve, psi0, psi0_eigen, psi0_singular,
    psi_bounds, psi_bounds_eigen, psi_bounds_singular, regime_a_psi_max, small_rho_conditions, small_rho_conditions_ln,
    srsr_condition_holds, srsr_kappa, PhaseRow, RicBoundReport, RicPair, Route,
};
pub use core_math::{
    binomial_envelope_theta, binomial_log_bound_check, gamma0, log_binomial, rho0, shannon_entropy, stirling_theta,
    tau0, UniversalConstants,
};
pub use error::{Error, Result};
pub use fs::FsConstants;
pub use lab::{
    deviation::{mc_deviation, DeviationEstimate, Tail},
    ensemble::{sample_matrix, Ensemble, EnsembleKind},
    ric::{empirical_ric, EmpiricalRic, RicMode},
    spectrum::{extreme_eigs, extreme_singulars, mp_edges},
};
pub use rate::{t_zero, GrowthPoint, RateKind, RateModel};
pub use recovery::{
    experiment::{srsr_experiment, ExperimentConfig, ExperimentSummary},
    sigma_s,
    solver::{l1_solve, RecoveryInstance, RecoveryResult, SolverOptions},
    srsr_errors, Ratio,
};
