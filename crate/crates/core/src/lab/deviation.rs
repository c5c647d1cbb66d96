//! Monte Carlo estimates of
//! `P{(λ_max − (1+√ρ̄)²) ∨ ((1−√ρ̄)² − λ_min) ≥ t}` for `C = (1/n)·X·Xᵀ`,
//! `X` of size `r × n`, `r = ⌊ρ̄n⌋`, and of the same event on the singular
//! values of `X/√n`.

use crate::error::{domain, Error, Result};
use crate::fs::{FsConstants, MIN_ROWS};
use crate::lab::ensemble::{Ensemble, EnsembleKind};
use crate::lab::spectrum::{extreme_eigs, gram_rows};
use crate::rate::{RateKind, RateModel};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Largest,
    Smallest,
    Either,
}

/// Whether deviations are measured on eigenvalues of `C` (edges `(1±√ρ̄)²`)
/// or on singular values of `X/√n` (edges `1±√ρ̄`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Eigenvalue,
    Singular,
}

/// Largest number of matrix entries a single Monte Carlo run may draw.
pub const ENTRY_BUDGET: f64 = 5e10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub ensemble: Ensemble,
    pub n: u64,
    pub rhobar: f64,
    pub t: f64,
    pub trials: u64,
    pub tail: Tail,
    pub scale: Scale,
    /// Rate function the estimate is compared with.
    pub model: RateModel,
    /// Prefactor constant for the Rademacher tail bound.
    pub c0: f64,
}

impl McConfig {
    pub fn new(ensemble: Ensemble, n: u64, rhobar: f64, t: f64, trials: u64, tail: Tail) -> Self {
        Self {
            ensemble,
            n,
            rhobar,
            t,
            trials,
            tail,
            scale: Scale::Eigenvalue,
            model: RateModel::ds(),
            c0: 1.0,
        }
    }

    pub fn rows(&self) -> u64 {
        (self.rhobar * self.n as f64).floor() as u64
    }

    fn validate(&self) -> Result<()> {
        if !(self.rhobar > 0.0 && self.rhobar < 1.0) {
            return Err(domain(format!("rhobar must lie in (0,1), got {}", self.rhobar)));
        }
        if self.rows() == 0 {
            return Err(domain(format!(
                "r = floor(rhobar*n) = 0 for n={}, rhobar={}",
                self.n, self.rhobar
            )));
        }
        if self.trials == 0 {
            return Err(domain("trials must be >= 1"));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(domain(format!("t must be finite and > 0, got {}", self.t)));
        }
        let needed = self.trials as f64 * self.rows() as f64 * self.n as f64;
        if needed > ENTRY_BUDGET {
            return Err(Error::Budget {
                what: "matrix entries",
                needed,
                limit: ENTRY_BUDGET,
            });
        }
        Ok(())
    }
}

/// Signed deviations of one draw beyond the upper and lower edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationSample {
    pub above: f64,
    pub below: f64,
}

impl DeviationSample {
    pub fn hits(&self, tail: Tail, t: f64) -> bool {
        match tail {
            Tail::Largest => self.above >= t,
            Tail::Smallest => self.below >= t,
            Tail::Either => self.above.max(self.below) >= t,
        }
    }
}

/// One deviation sample per trial, in trial order. Trial `i` uses stream `i`
/// of the ensemble seed.
pub fn deviation_samples(cfg: &McConfig) -> Result<Vec<DeviationSample>> {
    cfg.validate()?;
    let r = cfg.rows() as usize;
    let n = cfg.n as usize;
    let sq = (r as f64 / n as f64).sqrt();
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let x = cfg.ensemble.trial_matrix(i, r, n);
            let (lmin, lmax) = extreme_eigs(&gram_rows(&x, n as f64))?;
            Ok(match cfg.scale {
                Scale::Eigenvalue => DeviationSample {
                    above: lmax - (1.0 + sq).powi(2),
                    below: (1.0 - sq).powi(2) - lmin,
                },
                Scale::Singular => DeviationSample {
                    above: lmax.sqrt() - (1.0 + sq),
                    below: (1.0 - sq) - lmin.max(0.0).sqrt(),
                },
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationEstimate {
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Explicit probability bound when one is known for this ensemble, scale
    /// and tail; `None` when the rate function's prefactor is unspecified.
    pub theory_bound: Option<f64>,
    /// The bound is at least 1 and carries no information.
    pub vacuous: bool,
    /// `n·W(ρ̄, t)` for the configured rate function.
    pub rate_exponent: Option<f64>,
    pub t: f64,
    pub rhobar: f64,
    pub n: u64,
    pub r: u64,
    pub tail: Tail,
    pub scale: Scale,
    pub ensemble: EnsembleKind,
    pub model: RateKind,
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95%.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

fn theory_bound(cfg: &McConfig) -> Option<f64> {
    let sides = |tail| if tail == Tail::Either { 2.0 } else { 1.0 };
    match (cfg.model.kind, cfg.ensemble.kind, cfg.scale) {
        (RateKind::Ds, EnsembleKind::Gaussian, Scale::Singular) => {
            Some(sides(cfg.tail) * (-(cfg.n as f64) * cfg.t * cfg.t / 2.0).exp())
        }
        (RateKind::Fs, EnsembleKind::Rademacher, Scale::Eigenvalue)
            if cfg.tail == Tail::Largest && cfg.rows() >= MIN_ROWS =>
        {
            let c = FsConstants {
                c_fs: cfg.model.c_fs,
                ..FsConstants::published()
            };
            c.fs_tail_bound(cfg.rows(), cfg.n, cfg.t, cfg.c0).ok().map(|b| b.bound)
        }
        _ => None,
    }
}

pub fn summarize(cfg: &McConfig, samples: &[DeviationSample]) -> DeviationEstimate {
    let hits = samples.iter().filter(|s| s.hits(cfg.tail, cfg.t)).count() as u64;
    let trials = samples.len() as u64;
    let (ci_low, ci_high) = wilson_interval(hits, trials);
    let bound = theory_bound(cfg);
    DeviationEstimate {
        trials,
        hits,
        p_hat: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        theory_bound: bound,
        vacuous: bound.is_some_and(|b| b >= 1.0),
        rate_exponent: cfg.model.eval(cfg.rhobar, cfg.t).ok().map(|w| cfg.n as f64 * w),
        t: cfg.t,
        rhobar: cfg.rhobar,
        n: cfg.n,
        r: cfg.rows(),
        tail: cfg.tail,
        scale: cfg.scale,
        ensemble: cfg.ensemble.kind,
        model: cfg.model.kind,
    }
}

pub fn mc_deviation_with(cfg: &McConfig) -> Result<DeviationEstimate> {
    let samples = deviation_samples(cfg)?;
    Ok(summarize(cfg, &samples))
}

/// Eigenvalue-scale estimate compared against the Gaussian singular-value
/// rate; use [`mc_deviation_with`] to pick scale and model.
pub fn mc_deviation(
    ensemble: &Ensemble,
    n: u64,
    rhobar: f64,
    t: f64,
    trials: u64,
    tail: Tail,
) -> Result<DeviationEstimate> {
    mc_deviation_with(&McConfig::new(*ensemble, n, rhobar, t, trials, tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_t_never_hits() {
        let e = mc_deviation(&Ensemble::gaussian(1), 50, 0.2, 100.0, 50, Tail::Either).unwrap();
        assert_eq!(e.hits, 0);
        assert_eq!(e.p_hat, 0.0);
        assert_eq!(e.ci_low, 0.0);
        assert!(e.ci_high > 0.0 && e.ci_high < 0.1);
    }

    #[test]
    fn rejects_bad_config() {
        let g = Ensemble::gaussian(1);
        assert!(mc_deviation(&g, 5, 0.1, 0.1, 10, Tail::Either).is_err());
        assert!(mc_deviation(&g, 50, 0.1, 0.1, 0, Tail::Either).is_err());
        assert!(matches!(
            mc_deviation(&g, 100_000, 0.5, 0.1, 100_000, Tail::Either),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn ds_bound_value() {
        let mut cfg = McConfig::new(Ensemble::gaussian(9), 200, 0.1, 0.15, 20, Tail::Either);
        cfg.scale = Scale::Singular;
        let e = mc_deviation_with(&cfg).unwrap();
        let b = e.theory_bound.unwrap();
        assert!((b - 2.0 * (-2.25f64).exp()).abs() < 1e-15);
        assert!((b - 0.2108).abs() < 1e-4);
        assert_eq!(e.r, 20);
    }

    #[test]
    fn nested_thresholds() {
        let cfg = McConfig::new(Ensemble::rademacher(2), 60, 0.25, 0.1, 200, Tail::Either);
        let s = deviation_samples(&cfg).unwrap();
        let mut prev = u64::MAX;
        for k in 0..20 {
            let t = 0.02 * k as f64;
            let h = s.iter().filter(|d| d.hits(Tail::Either, t)).count() as u64;
            assert!(h <= prev);
            prev = h;
        }
    }

    #[test]
    fn wilson_contains_estimate() {
        for (h, n) in [(0, 10), (3, 10), (10, 10), (500, 10_000)] {
            let (lo, hi) = wilson_interval(h, n);
            let p = h as f64 / n as f64;
            assert!(lo <= p && p <= hi && lo >= 0.0 && hi <= 1.0);
        }
    }
}
