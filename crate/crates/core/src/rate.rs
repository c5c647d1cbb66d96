//! Deviation rate functions `W(ρ̄, t)` for the extreme spectrum of
//! `C = (1/n)·X·Xᵀ` and their closed-form inverses in `t`.
//!
//! Four models are provided:
//!
//! | kind | source of the bound | constant |
//! |------|---------------------|----------|
//! | `Tw` | Tracy–Widom heuristic ("ideal" deviations, a hypothesis) | `c_tw` |
//! | `Ds` | Gaussian singular values, `W = t²/2` | none |
//! | `Lr` | Gaussian largest eigenvalue, piecewise `t^{3/2}` / `t` | `c_lr` |
//! | `Fs` | Rademacher entries, `[ln(1+t/(2√ρ̄))]^{3/2}` | `c_fs` |
//!
//! `c_lr` has no published numeric value. The default of 1 is a placeholder
//! and every caller that relies on it should say so.

use crate::core_math::{rho0, shannon_entropy};
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Upper bound on the Rademacher constant for which the deviation inequality
/// is proven.
pub const C_FS_PROVEN: f64 = 837.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RateKind {
    Tw,
    Ds,
    Lr,
    Fs,
}

impl RateKind {
    pub fn name(self) -> &'static str {
        match self {
            RateKind::Tw => "tw",
            RateKind::Ds => "ds",
            RateKind::Lr => "lr",
            RateKind::Fs => "fs",
        }
    }
}

impl fmt::Display for RateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rate function together with its tunable constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateModel {
    pub kind: RateKind,
    pub c_tw: f64,
    pub c_lr: f64,
    pub c_fs: f64,
}

impl RateModel {
    pub fn new(kind: RateKind) -> Self {
        Self {
            kind,
            c_tw: 1.0,
            c_lr: 1.0,
            c_fs: C_FS_PROVEN,
        }
    }

    pub fn ds() -> Self {
        Self::new(RateKind::Ds)
    }

    pub fn tw(c_tw: f64) -> Self {
        Self {
            c_tw,
            ..Self::new(RateKind::Tw)
        }
    }

    pub fn lr(c_lr: f64) -> Self {
        Self {
            c_lr,
            ..Self::new(RateKind::Lr)
        }
    }

    pub fn fs(c_fs: f64) -> Self {
        Self {
            c_fs,
            ..Self::new(RateKind::Fs)
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c_tw", self.c_tw), ("c_lr", self.c_lr), ("c_fs", self.c_fs)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Whether the constants are inside the range where the deviation
    /// inequality behind the model is actually proven.
    pub fn guaranteed(&self) -> bool {
        match self.kind {
            RateKind::Ds => true,
            RateKind::Fs => self.c_fs <= C_FS_PROVEN,
            // TW is a hypothesis; LR's constant is not known numerically.
            RateKind::Tw | RateKind::Lr => false,
        }
    }

    /// `W(ρ̄, t)`.
    pub fn eval(&self, rhobar: f64, t: f64) -> Result<f64> {
        self.validate()?;
        match self.kind {
            RateKind::Tw => rate_tw(rhobar, t, self.c_tw),
            RateKind::Ds => rate_ds(rhobar, t),
            RateKind::Lr => rate_lr(rhobar, t, self.c_lr),
            RateKind::Fs => rate_fs(rhobar, t, self.c_fs),
        }
    }

    /// `W⁻¹(ρ̄, u)`, the inverse in the second argument.
    pub fn inverse(&self, rhobar: f64, u: f64) -> Result<f64> {
        self.validate()?;
        match self.kind {
            RateKind::Tw => rate_tw_inv(rhobar, u, self.c_tw),
            RateKind::Ds => rate_ds_inv(rhobar, u),
            RateKind::Lr => rate_lr_inv(rhobar, u, self.c_lr),
            RateKind::Fs => rate_fs_inv(rhobar, u, self.c_fs),
        }
    }
}

/// Proportional-growth coordinates `δ = n/p`, `ρ = s/n` and `ρ̄ = r/n = 2ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub delta: f64,
    pub rho: f64,
    pub rhobar: f64,
}

impl GrowthPoint {
    /// Point inside the theorem range `0 < ρ̄ < 2ρ₀`, `0 < δ < 1`.
    pub fn new(delta: f64, rhobar: f64) -> Result<Self> {
        let pt = Self::relaxed(delta, rhobar)?;
        if rhobar >= 2.0 * rho0() {
            return Err(domain(format!(
                "rhobar must be below 2*rho0 = {:.6}, got {rhobar}",
                2.0 * rho0()
            )));
        }
        Ok(pt)
    }

    pub fn from_rho(delta: f64, rho: f64) -> Result<Self> {
        Self::new(delta, 2.0 * rho)
    }

    /// Point with only `0 < ρ̄ < 1`, `0 < δ < 1` enforced.
    pub fn relaxed(delta: f64, rhobar: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(domain(format!("delta must lie in (0,1), got {delta}")));
        }
        check_rhobar(rhobar)?;
        Ok(Self {
            delta,
            rho: rhobar / 2.0,
            rhobar,
        })
    }

    pub fn in_theorem_range(&self) -> bool {
        self.rhobar < 2.0 * rho0()
    }

    /// Integer sizes `(n, p, s, r)` realising this point for a given `n`.
    pub fn realize(&self, n: u64) -> (u64, u64, u64, u64) {
        let p = (n as f64 / self.delta).round() as u64;
        let s = (self.rho * n as f64).floor() as u64;
        (n, p, s, 2 * s)
    }
}

fn check_rhobar(rhobar: f64) -> Result<()> {
    if !(rhobar > 0.0 && rhobar < 1.0) {
        return Err(domain(format!("rhobar must lie in (0,1), got {rhobar}")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(domain(format!("deviation level t must be >= 0, got {t}")));
    }
    Ok(())
}

fn check_u(u: f64) -> Result<()> {
    if !(u >= 0.0) {
        return Err(domain(format!("rate level u must be >= 0, got {u}")));
    }
    Ok(())
}

/// `W_DS(ρ̄, t) = t²/2`.
pub fn rate_ds(_rhobar: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(0.5 * t * t)
}

/// `W_DS⁻¹(ρ̄, u) = √(2u)`.
pub fn rate_ds_inv(_rhobar: f64, u: f64) -> Result<f64> {
    check_u(u)?;
    Ok((2.0 * u).sqrt())
}

/// Piecewise `t^{3/2}` then linear rate with edge factor `a` (`1+√ρ̄` for the
/// largest eigenvalue, `1−√ρ̄` for the smallest).
fn lr_piecewise(rhobar: f64, t: f64, c_lr: f64, a: f64) -> f64 {
    let sq = rhobar.sqrt();
    if t <= sq * a * a {
        rhobar.powf(0.25) / (c_lr * a.powi(3)) * t.powf(1.5)
    } else {
        sq / (c_lr * a * a) * t
    }
}

/// `W_LR(ρ̄, t)`, the largest-eigenvalue Gaussian rate (also used for the
/// two-sided event since it is the smaller of the two).
pub fn rate_lr(rhobar: f64, t: f64, c_lr: f64) -> Result<f64> {
    check_rhobar(rhobar)?;
    check_t(t)?;
    Ok(lr_piecewise(rhobar, t, c_lr, 1.0 + rhobar.sqrt()))
}

/// `W_LR^min(ρ̄, t)`, the smallest-eigenvalue variant.
pub fn rate_lr_min(rhobar: f64, t: f64, c_lr: f64) -> Result<f64> {
    check_rhobar(rhobar)?;
    check_t(t)?;
    Ok(lr_piecewise(rhobar, t, c_lr, 1.0 - rhobar.sqrt()))
}

pub fn rate_lr_inv(rhobar: f64, u: f64, c_lr: f64) -> Result<f64> {
    check_rhobar(rhobar)?;
    check_u(u)?;
    let a2 = (1.0 + rhobar.sqrt()).powi(2);
    Ok(if u <= rhobar / c_lr {
        c_lr.powf(2.0 / 3.0) * a2 / rhobar.powf(1.0 / 6.0) * u.powf(2.0 / 3.0)
    } else {
        c_lr * a2 / rhobar.sqrt() * u
    })
}

/// `W_FS(ρ̄, t) = ρ̄·[ln(1 + t/(2√ρ̄))]^{3/2} / (C_FS (1+√ρ̄)²)`.
///
/// The 3/2 power applies to the logarithm; that is the reading under which
/// the displayed inverse is the inverse.
pub fn rate_fs(rhobar: f64, t: f64, c_fs: f64) -> Result<f64> {
    check_rhobar(rhobar)?;
    check_t(t)?;
    let sq = rhobar.sqrt();
    let l = (t / (2.0 * sq)).ln_1p();
    Ok(rhobar * l.powf(1.5) / (c_fs * (1.0 + sq).powi(2)))
}

pub fn rate_fs_inv(rhobar: f64, u: f64, c_fs: f64) -> Result<f64> {
    check_rhobar(rhobar)?;
    check_u(u)?;
    let sq = rhobar.sqrt();
    let expo = c_fs.powf(2.0 / 3.0) * (1.0 + sq).powf(4.0 / 3.0) / rhobar.powf(2.0 / 3.0) * u.powf(2.0 / 3.0);
    Ok(2.0 * sq * expo.exp_m1())
}

/// Tracy–Widom-shaped rate: `t^{3/2}` up to `√ρ̄`, `t²` up to 1, then linear.
pub fn rate_tw(rhobar: f64, t: f64, c_tw: f64) -> Result<f64> {
    check_rhobar(rhobar)?;
    check_t(t)?;
    let sq = rhobar.sqrt();
    let a2 = (1.0 + sq).powi(2);
    let core = if t <= sq {
        rhobar.powf(0.25) * t.powf(1.5)
    } else if t <= 1.0 {
        t * t
    } else {
        t
    };
    Ok(core / (c_tw * a2))
}

pub fn rate_tw_inv(rhobar: f64, u: f64, c_tw: f64) -> Result<f64> {
    check_rhobar(rhobar)?;
    check_u(u)?;
    let sq = rhobar.sqrt();
    let a = 1.0 + sq;
    let scale = c_tw * a * a;
    Ok(if u <= rhobar / scale {
        c_tw.powf(2.0 / 3.0) * a.powf(4.0 / 3.0) / rhobar.powf(1.0 / 6.0) * u.powf(2.0 / 3.0)
    } else if u <= 1.0 / scale {
        c_tw.sqrt() * a * u.sqrt()
    } else {
        scale * u
    })
}

/// The union-bound level `u = H(ρ̄δ)/δ`.
pub fn union_level(point: &GrowthPoint) -> Result<f64> {
    let x = point.rhobar * point.delta;
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!("rhobar*delta must lie in (0,1), got {x}")));
    }
    Ok(shannon_entropy(x)? / point.delta)
}

/// `t₀ = W⁻¹(ρ̄, H(ρ̄δ)/δ)`, the deviation level that absorbs the union bound
/// over all supports.
///
/// Returns [`Error::OutOfRange`] when the level is not attained by `W(ρ̄,·)`
/// in floating point (the FS inverse overflows for large levels).
pub fn t_zero(model: &RateModel, point: &GrowthPoint) -> Result<f64> {
    let u = union_level(point)?;
    let t0 = model.inverse(point.rhobar, u)?;
    if !t0.is_finite() {
        return Err(Error::OutOfRange {
            model: model.kind.name(),
            level: u,
        });
    }
    Ok(t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn ds_examples() {
        assert_eq!(rate_ds(0.3, 0.0).unwrap(), 0.0);
        assert!(close(rate_ds(0.1, 0.2).unwrap(), 0.02, 1e-15));
        assert!(close(rate_ds_inv(0.1, 0.196_078).unwrap(), 0.626_224, 1e-5));
        assert_eq!(rate_ds_inv(0.1, 2.0).unwrap(), 2.0);
        assert_eq!(rate_ds_inv(0.1, 0.0).unwrap(), 0.0);
        for k in 1..=60 {
            let t = k as f64 * 0.01;
            assert!(close(rate_ds_inv(0.1, rate_ds(0.1, t).unwrap()).unwrap(), t, 1e-14));
        }
        assert!(rate_ds(0.1, -1.0).is_err());
        assert!(rate_ds_inv(0.1, -1.0).is_err());
    }

    #[test]
    fn lr_examples() {
        assert_eq!(rate_lr(0.04, 0.0, 1.0).unwrap(), 0.0);
        // breakpoint t = √ρ̄(1+√ρ̄)² = 0.3·1.69 at ρ̄ = 0.09
        let rb: f64 = 0.09;
        let a: f64 = 1.3;
        let tb: f64 = 0.3 * 1.69;
        let left = rb.powf(0.25) / a.powi(3) * tb.powf(1.5);
        let right = rb.sqrt() / (a * a) * tb;
        assert!((left - right).abs() < 1e-12);
        assert!((rate_lr(rb, tb, 1.0).unwrap() - left).abs() < 1e-15);
        assert!((rate_lr(rb, tb * (1.0 + 1e-12), 1.0).unwrap() - right).abs() < 1e-11);
        assert!(close(rate_lr(0.04, 1.0, 1.0).unwrap(), 0.2 / 1.44, 1e-14));
        assert!(rate_lr(1.2, 0.1, 1.0).is_err());
        assert!(rate_lr(0.04, -0.1, 1.0).is_err());
    }

    #[test]
    fn lr_min_examples() {
        assert_eq!(rate_lr_min(0.04, 0.0, 1.0).unwrap(), 0.0);
        // 0.04^{1/4}·0.1^{3/2}/0.8³ (mpmath: 0.0276213586400995...)
        assert!(close(
            rate_lr_min(0.04, 0.1, 1.0).unwrap(),
            0.027_621_358_640_099_51,
            1e-14
        ));
    }

    #[test]
    fn lr_inverse_boundary() {
        // u = ρ̄/C_LR: both branches give 0.288
        let rb: f64 = 0.04;
        let b1 = 1.44 / rb.powf(1.0 / 6.0) * rb.powf(2.0 / 3.0);
        let b2 = 1.44 / rb.sqrt() * rb;
        assert!((b1 - b2).abs() < 1e-14);
        assert!(close(rate_lr_inv(rb, rb, 1.0).unwrap(), 0.288, 1e-14));
        assert_eq!(rate_lr_inv(rb, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn fs_examples() {
        assert_eq!(rate_fs(0.04, 0.0, 837.0).unwrap(), 0.0);
        // 0.04·ln(2)^{3/2}/(837·1.44) (mpmath: 1.91518280029915e-5)
        let w = rate_fs(0.04, 0.4, 837.0).unwrap();
        assert!(close(w, 1.915_182_800_299_149_7e-5, 1e-13));
        assert!((rate_fs_inv(0.04, w, 837.0).unwrap() - 0.4).abs() < 1e-12);
        assert!((rate_fs_inv(0.04, 1.915e-5, 837.0).unwrap() - 0.4).abs() < 1e-3);
        assert_eq!(rate_fs_inv(0.04, 0.0, 837.0).unwrap(), 0.0);
    }

    #[test]
    fn tw_branch_continuity() {
        for &rb in &[0.01f64, 0.05, 0.1] {
            let sq = rb.sqrt();
            let a2 = (1.0 + sq).powi(2);
            // at t = √ρ̄: ρ̄^{1/4}·ρ̄^{3/4} = ρ̄ = t²
            let l = rb.powf(0.25) * sq.powf(1.5) / a2;
            let r = sq * sq / a2;
            assert!((l - r).abs() < 1e-15);
            assert!((rate_tw(rb, sq, 1.0).unwrap() - r).abs() < 1e-15);
            let just_above = rate_tw(rb, sq * (1.0 + 1e-13), 1.0).unwrap();
            assert!((just_above - r).abs() < 1e-12);
            // at t = 1
            assert!((rate_tw(rb, 1.0, 1.0).unwrap() - 1.0 / a2).abs() < 1e-15);
            assert!((rate_tw(rb, 1.0 + 1e-13, 1.0).unwrap() - 1.0 / a2).abs() < 1e-12);
        }
        assert_eq!(rate_tw(0.04, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn t_zero_examples() {
        let pt = GrowthPoint::new(0.5, 0.04).unwrap();
        let t0 = t_zero(&RateModel::ds(), &pt).unwrap();
        // mpmath: 0.626223964024795...
        assert!((t0 - 0.626_223_964_024_795_1).abs() < 1e-13);

        let fs = t_zero(&RateModel::fs(837.0), &pt).unwrap();
        assert!(fs.is_finite() && fs > 1e100);
        let fs_smaller_c = t_zero(&RateModel::fs(100.0), &pt).unwrap();
        assert!(fs_smaller_c < fs);

        let big = GrowthPoint::relaxed(0.99, 0.9).unwrap();
        assert!(t_zero(&RateModel::ds(), &big).is_ok());
        assert!(GrowthPoint::new(0.5, 0.2).is_err());
        assert!(GrowthPoint::relaxed(1.0, 0.05).is_err());
    }

    #[test]
    fn fs_overflow_is_out_of_range() {
        // exponent ≈ 837^{2/3}·(ln(1/ρ̄δ)+1)^{2/3} ≈ 870 > ln(f64::MAX)
        let pt = GrowthPoint::new(1e-6, 1e-7).unwrap();
        match t_zero(&RateModel::fs(837.0), &pt) {
            Err(Error::OutOfRange { model, .. }) => assert_eq!(model, "fs"),
            other => panic!("expected out-of-range, got {other:?}"),
        }
    }

    #[test]
    fn guarantee_flags() {
        assert!(RateModel::fs(837.0).guaranteed());
        assert!(!RateModel::fs(900.0).guaranteed());
        assert!(RateModel::ds().guaranteed());
        assert!(RateModel::lr(0.0).validate().is_err());
    }
}
