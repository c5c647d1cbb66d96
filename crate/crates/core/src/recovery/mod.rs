//! The ℓ1 estimator `x̂ ∈ argmin ‖x‖₁ s.t. ‖y − Mx‖₂ ≤ η`, the best `s`-term
//! approximation error `σ_s(x)₁`, and the error ratios of stable and robust
//! sparse recovery.

pub mod experiment;
pub mod solver;

use crate::error::{domain, Result};
use serde::{Serialize, Serializer};

/// `σ_s(x)₁ = min_{‖z‖₀ ≤ s} ‖x − z‖₁`, the sum of the `p − s` smallest
/// magnitudes.
pub fn sigma_s(x: &[f64], s: usize) -> Result<f64> {
    if s > x.len() {
        return Err(domain(format!("s = {s} exceeds the length {}", x.len())));
    }
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    Ok(mags[..x.len() - s].iter().sum())
}

/// An error ratio whose denominator may vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    /// Zero denominator and (numerically) zero error.
    ExactRecovery,
    /// Zero denominator but a nonzero error.
    Infinite,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        match self {
            Ratio::Finite(v) => *v,
            Ratio::ExactRecovery => 0.0,
            Ratio::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(v) => s.serialize_f64(*v),
            Ratio::ExactRecovery => s.serialize_str("exact"),
            Ratio::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Recovery is called exact when `‖x̂ − x₀‖₂ ≤ 1e−6·max(1, ‖x₀‖₂)`.
pub const EXACT_TOL: f64 = 1e-6;

pub fn exact_threshold(x0: &[f64]) -> f64 {
    EXACT_TOL * norm2(x0).max(1.0)
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `(r₁, r₂)` with `r₁ = ‖x₀−x̂‖₁ / (σ_s(x₀)₁ + √s·η)` and
/// `r₂ = ‖x₀−x̂‖₂ / (σ_s(x₀)₁/√s + η)`.
pub fn srsr_errors(x0: &[f64], x_hat: &[f64], s: usize, eta: f64) -> Result<(Ratio, Ratio)> {
    if s == 0 {
        return Err(domain("s must be >= 1"));
    }
    if x0.len() != x_hat.len() {
        return Err(domain("x0 and x_hat have different lengths"));
    }
    if !(eta >= 0.0) {
        return Err(domain(format!("eta must be >= 0, got {eta}")));
    }
    let sig = sigma_s(x0, s)?;
    let sq = (s as f64).sqrt();
    let diff: Vec<f64> = x0.iter().zip(x_hat).map(|(a, b)| a - b).collect();
    let e1: f64 = diff.iter().map(|v| v.abs()).sum();
    let e2 = norm2(&diff);
    let tol = exact_threshold(x0);
    let ratio = |num: f64, den: f64| {
        if den > 0.0 {
            Ratio::Finite(num / den)
        } else if num <= tol {
            Ratio::ExactRecovery
        } else {
            Ratio::Infinite
        }
    };
    Ok((ratio(e1, sig + sq * eta), ratio(e2, sig / sq + eta)))
}
