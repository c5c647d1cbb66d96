//! Scalar building blocks: entropy, log-binomials, Stirling and binomial
//! envelopes, and the three universal constants of the SRSR analysis.
//!
//! Everything here is a pure `f64` function. Logarithms are natural.

use crate::error::{domain, Result};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// The constants ρ₀, τ₀ and γ₀ that appear throughout the phase-transition
/// analysis.
///
/// * `rho0 = (33 − 5√41)/16`, the largest admissible sparsity ratio ρ = s/n,
/// * `tau0 = 4/√41`, the symmetric RIP threshold,
/// * `gamma0 = (4+√41)²/25`, the bound on `(1+c_max)/(1−c_min)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct UniversalConstants {
    pub rho0: f64,
    pub tau0: f64,
    pub gamma0: f64,
}

impl UniversalConstants {
    pub fn exact() -> Self {
        let s41 = 41f64.sqrt();
        Self {
            rho0: (33.0 - 5.0 * s41) / 16.0,
            tau0: 4.0 / s41,
            gamma0: (4.0 + s41) * (4.0 + s41) / 25.0,
        }
    }
}

impl Default for UniversalConstants {
    fn default() -> Self {
        Self::exact()
    }
}

/// ρ₀ = (33 − 5√41)/16 ≈ 0.061524.
pub fn rho0() -> f64 {
    UniversalConstants::exact().rho0
}

/// τ₀ = 4/√41 ≈ 0.624695.
pub fn tau0() -> f64 {
    UniversalConstants::exact().tau0
}

/// γ₀ = (4+√41)²/25 ≈ 4.329.
pub fn gamma0() -> f64 {
    UniversalConstants::exact().gamma0
}

/// Shannon entropy `H(t) = −t ln t − (1−t) ln(1−t)` in nats, for `t ∈ (0,1)`.
pub fn shannon_entropy(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(domain(format!("shannon_entropy needs 0 < t < 1, got {t}")));
    }
    Ok(-t * t.ln() - (1.0 - t) * (-t).ln_1p())
}

/// `ln C(p, r)`.
///
/// Short products are summed term by term (`r' = min(r, p−r)` factors), which
/// stays accurate when the result is small; long ones go through `ln Γ`, where
/// the result is large enough that the absolute error of `ln Γ` is negligible.
pub fn log_binomial(p: u64, r: u64) -> Result<f64> {
    if r > p {
        return Err(domain(format!("log_binomial needs r <= p, got r={r}, p={p}")));
    }
    let k = r.min(p - r);
    if k == 0 {
        return Ok(0.0);
    }
    if k <= 4096 {
        let pf = p as f64;
        let mut acc = 0.0;
        for i in 0..k {
            let i = i as f64;
            acc += ((pf - i) / (i + 1.0)).ln();
        }
        Ok(acc)
    } else {
        let (pf, rf) = (p as f64, r as f64);
        Ok(ln_gamma(pf + 1.0) - ln_gamma(rf + 1.0) - ln_gamma(pf - rf + 1.0))
    }
}

/// The prefactor Θ of the binomial envelope `C(p,r) ≤ Θ·exp(p·H(r/p))`, with
/// `Θ² = e^{1/2} / (2π [r(1 − r/p)]^{1/p})`.
pub fn binomial_envelope_theta(p: u64, r: u64) -> Result<f64> {
    if r == 0 || r >= p {
        return Err(domain(format!(
            "binomial_envelope_theta needs 1 <= r < p, got r={r}, p={p}"
        )));
    }
    let (pf, rf) = (p as f64, r as f64);
    let base = rf * (1.0 - rf / pf);
    let theta2 = 0.5f64.exp() / (2.0 * PI * base.powf(1.0 / pf));
    Ok(theta2.sqrt())
}

/// Log of the envelope right-hand side, `ln Θ + p·H(r/p)`.
pub fn log_binomial_envelope(p: u64, r: u64) -> Result<f64> {
    let theta = binomial_envelope_theta(p, r)?;
    Ok(theta.ln() + p as f64 * shannon_entropy(r as f64 / p as f64)?)
}

/// Stirling remainder `μ(z) = ln Γ(z+1) − ½ln(2πz) − z ln z + z`.
///
/// For `z ≥ 10` the asymptotic series is used directly: subtracting two
/// numbers of size `z ln z` would leave no significant digits of a result of
/// size `1/(12z)`.
pub(crate) fn stirling_remainder(z: f64) -> f64 {
    if z >= 10.0 {
        let w = 1.0 / z;
        let w2 = w * w;
        // Σ B_{2k} / (2k(2k−1) z^{2k−1}), k = 1..8
        const C: [f64; 8] = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360_360.0,
            1.0 / 156.0,
            -3617.0 / 122_400.0,
        ];
        w * C.iter().rev().fold(0.0, |acc, c| acc * w2 + c)
    } else {
        ln_gamma(z + 1.0) - 0.5 * (2.0 * PI * z).ln() - z * z.ln() + z
    }
}

/// The θ for which `Γ(z+1) = √(2πz)·(z/e)^z·exp(θ/(12z))`.
///
/// Always in `(0, 1)` for `z > 0`.
pub fn stirling_theta(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(format!("stirling_theta needs finite z > 0, got {z}")));
    }
    Ok(12.0 * z * stirling_remainder(z))
}

/// One `(lhs, rhs)` pair of a logarithmic binomial tail inequality; the
/// inequality asserts `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BoundPair {
    pub lhs: f64,
    pub rhs: f64,
}

impl BoundPair {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Evaluates both central-binomial tail bounds at `(m, n)`, `1 ≤ n ≤ m`:
///
/// * `ln[(n/4^m)·C(2m, m−n)] ≤ 5 − 0.6321·n²/m`
/// * `ln[((n+½)/4^m)·C(2m+1, m−n)] ≤ 2 − 0.6555·n²/m`
pub fn binomial_log_bound_check(m: u64, n: u64) -> Result<(BoundPair, BoundPair)> {
    if n == 0 || n > m {
        return Err(domain(format!(
            "binomial_log_bound_check needs 1 <= n <= m, got m={m}, n={n}"
        )));
    }
    let (mf, nf) = (m as f64, n as f64);
    let four_m = 2.0 * mf * std::f64::consts::LN_2;
    let ratio = nf * nf / mf;
    let first = BoundPair {
        lhs: nf.ln() + log_binomial(2 * m, m - n)? - four_m,
        rhs: 5.0 - 0.6321 * ratio,
    };
    let second = BoundPair {
        lhs: (nf + 0.5).ln() + log_binomial(2 * m + 1, m - n)? - four_m,
        rhs: 2.0 - 0.6555 * ratio,
    };
    Ok((first, second))
}
