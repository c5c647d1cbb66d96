//! Upper bounds on the restricted isometry constants of random matrices in
//! the proportional-growth regime, the resulting thresholds on `δ = n/p`
//! above which stable and robust sparse recovery holds, and the algebra that
//! links asymmetric RICs to the recovery condition.

use crate::core_math::{gamma0, rho0, tau0};
use crate::error::{domain, Error, Result};
use crate::rate::{t_zero, union_level, GrowthPoint, RateKind, RateModel};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Asymmetric restricted isometry constants:
/// `(1−c_min)‖x‖² ≤ ‖Mx‖² ≤ (1+c_max)‖x‖²` on sparse `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicPair {
    pub c_min: f64,
    pub c_max: f64,
}

impl RicPair {
    pub fn new(c_min: f64, c_max: f64) -> Result<Self> {
        if !(c_min >= 0.0 && c_max >= 0.0) || !c_min.is_finite() || !c_max.is_finite() {
            return Err(domain(format!(
                "RIC constants must be finite and >= 0, got ({c_min}, {c_max})"
            )));
        }
        Ok(Self { c_min, c_max })
    }

    pub fn symmetric(c: f64) -> Result<Self> {
        Self::new(c, c)
    }

    fn check_lower(&self) -> Result<()> {
        if self.c_min >= 1.0 {
            return Err(Error::Degenerate(format!(
                "c_min = {} >= 1, the lower isometry bound is void",
                self.c_min
            )));
        }
        Ok(())
    }

    /// `γ = (1+c_max)/(1−c_min)`.
    pub fn gamma(&self) -> Result<f64> {
        self.check_lower()?;
        Ok((1.0 + self.c_max) / (1.0 - self.c_min))
    }

    /// `b = (c_min+c_max) / (2√((1−c_min)(1+c_max)))`, the bound on
    /// `|⟨Mu, Mv⟩|` for disjointly supported unit `u, v`.
    pub fn b(&self) -> Result<f64> {
        self.check_lower()?;
        Ok((self.c_min + self.c_max) / (2.0 * ((1.0 - self.c_min) * (1.0 + self.c_max)).sqrt()))
    }

    /// `κ = 4b/(4−b)`; recovery is stable and robust when `κ < 1`.
    pub fn kappa(&self) -> Result<f64> {
        let b = self.b()?;
        if b >= 4.0 {
            return Err(Error::Degenerate(format!("b = {b} >= 4, κ undefined")));
        }
        Ok(4.0 * b / (4.0 - b))
    }
}

pub fn gamma_of(ric: &RicPair) -> Result<f64> {
    ric.gamma()
}

/// `c_min < 1` and `γ < γ₀ = (4+√41)²/25`.
pub fn srsr_condition_holds(ric: &RicPair) -> bool {
    match ric.gamma() {
        Ok(g) => g < gamma0(),
        Err(_) => false,
    }
}

pub fn srsr_kappa(ric: &RicPair) -> Result<f64> {
    ric.kappa()
}

/// Which random model the bound is derived from: eigenvalues of the
/// per-support covariance, or singular values of the per-support block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Eigen,
    Singular,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Eigen => "eigen",
            Route::Singular => "singular",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RicBoundReport {
    pub t0: f64,
    pub psi_min: f64,
    pub psi_max: f64,
    pub route: Route,
    pub model: RateModel,
    pub point: GrowthPoint,
}

impl RicBoundReport {
    /// Upper bounds on `(c_min, c_max)` as a pair.
    pub fn as_ric(&self) -> RicPair {
        RicPair {
            c_min: self.psi_min,
            c_max: self.psi_max,
        }
    }
}

/// Eigenvalue route: `Ψ_min = √ρ̄(2−√ρ̄) + t₀`, `Ψ_max = √ρ̄(2+√ρ̄) + t₀`.
pub fn psi_bounds_eigen(model: &RateModel, point: &GrowthPoint) -> Result<RicBoundReport> {
    let t0 = t_zero(model, point)?;
    finite(eigen_from_t0(model, point, t0))
}

/// A finite `t₀` can still overflow `Ψ_max`; that is the same out-of-range case.
fn finite(r: RicBoundReport) -> Result<RicBoundReport> {
    if r.psi_max.is_finite() {
        Ok(r)
    } else {
        Err(Error::OutOfRange {
            model: r.model.kind.name(),
            level: union_level(&r.point)?,
        })
    }
}

fn eigen_from_t0(model: &RateModel, point: &GrowthPoint, t0: f64) -> RicBoundReport {
    let sq = point.rhobar.sqrt();
    RicBoundReport {
        t0,
        psi_min: sq * (2.0 - sq) + t0,
        psi_max: sq * (2.0 + sq) + t0,
        route: Route::Eigen,
        model: *model,
        point: *point,
    }
}

/// Singular-value route: `Ψ_min = min{1, (√ρ̄+t₀)(2−√ρ̄−t₀)}`,
/// `Ψ_max = (√ρ̄+t₀)(2+√ρ̄+t₀)`.
pub fn psi_bounds_singular(model: &RateModel, point: &GrowthPoint) -> Result<RicBoundReport> {
    let t0 = t_zero(model, point)?;
    finite(singular_from_t0(model, point, t0))
}

fn singular_from_t0(model: &RateModel, point: &GrowthPoint, t0: f64) -> RicBoundReport {
    let a = point.rhobar.sqrt() + t0;
    // Once √ρ̄ + t₀ ≥ 1 the lower singular-value bound 1 − a is vacuous and the
    // only information left is c_min ≤ 1.
    let psi_min = if a >= 1.0 { 1.0 } else { (a * (2.0 - a)).min(1.0) };
    RicBoundReport {
        t0,
        psi_min,
        psi_max: a * (2.0 + a),
        route: Route::Singular,
        model: *model,
        point: *point,
    }
}

pub fn psi_bounds(model: &RateModel, point: &GrowthPoint, route: Route) -> Result<RicBoundReport> {
    match route {
        Route::Eigen => psi_bounds_eigen(model, point),
        Route::Singular => psi_bounds_singular(model, point),
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < rho0()) {
        return Err(domain(format!("rho must lie in (0, rho0 = {:.6}), got {rho}", rho0())));
    }
    Ok(())
}

/// Deviation level at which the eigenvalue-route RIC bounds reach the
/// recovery condition, in factored form `2τ₀(√ρ−√ρ₀)(√ρ−1/(2√ρ₀))`.
pub fn eigen_critical_level(rho: f64) -> f64 {
    let sr = rho.sqrt();
    let s0 = rho0().sqrt();
    2.0 * tau0() * (sr - s0) * (sr - 0.5 / s0)
}

/// The same level, expanded: `(8/√41)ρ − 2√2·√ρ + 4/√41`.
pub fn eigen_critical_level_expanded(rho: f64) -> f64 {
    let s41 = 41f64.sqrt();
    8.0 / s41 * rho - 2.0 * std::f64::consts::SQRT_2 * rho.sqrt() + 4.0 / s41
}

/// Singular-route critical level `√(2ρ₀) − √(2ρ)`.
pub fn singular_critical_level(rho: f64) -> f64 {
    (2.0 * rho0()).sqrt() - (2.0 * rho).sqrt()
}

fn threshold_from_rate(rho: f64, w: f64) -> f64 {
    let two_rho = 2.0 * rho;
    (1.0 - w / two_rho).exp() / two_rho
}

/// Threshold on `δ` from the eigenvalue route:
/// `(1/2ρ)·exp{1 − W[2ρ, t_*]/(2ρ)}` with `t_*` the eigen critical level.
pub fn psi0_eigen(rho: f64, model: &RateModel) -> Result<f64> {
    check_rho(rho)?;
    let w = model.eval(2.0 * rho, eigen_critical_level(rho))?;
    Ok(threshold_from_rate(rho, w))
}

/// Threshold on `δ` from the singular route:
/// `(1/2ρ)·exp{1 − W[2ρ, √(2ρ₀)−√(2ρ)]/(2ρ)}`.
pub fn psi0_singular(rho: f64, model: &RateModel) -> Result<f64> {
    check_rho(rho)?;
    let w = model.eval(2.0 * rho, singular_critical_level(rho))?;
    Ok(threshold_from_rate(rho, w))
}

pub fn psi0(rho: f64, model: &RateModel, route: Route) -> Result<f64> {
    match route {
        Route::Eigen => psi0_eigen(rho, model),
        Route::Singular => psi0_singular(rho, model),
    }
}

/// The explicit Gaussian recovery curve
/// `δ = (1/2ρ)·exp[1 − (1/4ρ)(√((33−5√41)/8) − √(2ρ))²]`.
///
/// Written out from the literal constant rather than through [`rho0`] and the
/// rate-function machinery, so that agreement with [`psi0_singular`] under the
/// Gaussian singular-value rate is a genuine cross-check.
pub fn gaussian_srsr_curve(rho: f64) -> Result<f64> {
    gaussian_srsr_curve_ln(rho).map(f64::exp)
}

/// Natural log of [`gaussian_srsr_curve`]; finite where the curve underflows.
pub fn gaussian_srsr_curve_ln(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let edge = ((33.0 - 5.0 * 41f64.sqrt()) / 8.0).sqrt();
    let gap = edge - (2.0 * rho).sqrt();
    Ok(1.0 - gap * gap / (4.0 * rho) - (2.0 * rho).ln())
}

/// Leading-order small-`ρ` recovery thresholds:
///
/// * DS: `(1/2ρ)·exp[−ρ₀/(2ρ)]`
/// * LR: `(1/2ρ)·exp[−τ₀/(C_LR√(2ρ))]`
/// * FS: `(1/2ρ)·exp[−|ln ρ|^{3/2}/(2^{3/2}C_FS)]`
pub fn small_rho_conditions(rho: f64, model: &RateModel) -> Result<f64> {
    small_rho_conditions_ln(rho, model).map(f64::exp)
}

/// Natural log of [`small_rho_conditions`].
pub fn small_rho_conditions_ln(rho: f64, model: &RateModel) -> Result<f64> {
    check_rho(rho)?;
    model.validate()?;
    let pre = -(2.0 * rho).ln();
    let expo = match model.kind {
        RateKind::Ds => -rho0() / (2.0 * rho),
        RateKind::Lr => -tau0() / (model.c_lr * (2.0 * rho).sqrt()),
        RateKind::Fs => -rho.ln().abs().powf(1.5) / (2f64.powf(1.5) * model.c_fs),
        RateKind::Tw => {
            return Err(Error::Unsupported(
                "no small-rho threshold is available for the tw model".into(),
            ))
        }
    };
    Ok(pre + expo)
}

/// Leading-order `Ψ_max` as `ρ̄ → 0` at fixed `δ` (lower-order terms dropped):
///
/// * DS: `2√2·√(ρ̄|ln ρ̄|) + 2√ρ̄ + √2(1−ln δ)√(ρ̄/|ln ρ̄|)`
/// * LR: `C_LR·√ρ̄·|ln ρ̄| + [2 + C_LR(1−ln δ)]·√ρ̄`
/// * FS: `2√ρ̄·exp[C_FS^{2/3}|ln ρ̄|^{2/3}]`
pub fn regime_a_psi_max(rhobar: f64, delta: f64, model: &RateModel) -> Result<f64> {
    if !(rhobar > 0.0 && rhobar < 1.0) {
        return Err(domain(format!("rhobar must lie in (0,1), got {rhobar}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("delta must lie in (0,1), got {delta}")));
    }
    model.validate()?;
    let sq = rhobar.sqrt();
    let l = rhobar.ln().abs();
    let one_minus_ld = 1.0 - delta.ln();
    match model.kind {
        RateKind::Ds => {
            let r2 = std::f64::consts::SQRT_2;
            Ok(2.0 * r2 * (rhobar * l).sqrt() + 2.0 * sq + r2 * one_minus_ld * (rhobar / l).sqrt())
        }
        RateKind::Lr => Ok(model.c_lr * sq * l + (2.0 + model.c_lr * one_minus_ld) * sq),
        RateKind::Fs => Ok(2.0 * sq * (model.c_fs.powf(2.0 / 3.0) * l.powf(2.0 / 3.0)).exp()),
        RateKind::Tw => Err(Error::Unsupported(
            "no small-rhobar expansion is available for the tw model".into(),
        )),
    }
}

/// `D₂ = [W(ρ̄, t₀+ε) − W(ρ̄, t₀)]/2`, the exponential decay rate left over
/// after the union bound when the deviation level exceeds `t₀` by `ε`.
pub fn d2_exponent(model: &RateModel, rhobar: f64, delta: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(domain(format!("eps must be finite and > 0, got {eps}")));
    }
    let point = GrowthPoint::relaxed(delta, rhobar)?;
    let t0 = t_zero(model, &point)?;
    let hi = model.eval(rhobar, t0 + eps)?;
    let lo = model.eval(rhobar, t0)?;
    Ok((hi - lo) / 2.0)
}

/// One point of a recovery phase curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseRow {
    pub rho: f64,
    pub delta_threshold: f64,
    /// Whether some `δ < 1` satisfies the condition, i.e. the threshold is below 1.
    pub admissible: bool,
}

pub const PHASE_RHO_MIN: f64 = 1e-6;
pub const PHASE_POINTS: usize = 512;

/// Upper end of the default grid, `ρ₀(1 − 10⁻⁹)`.
pub fn phase_rho_max() -> f64 {
    rho0() * (1.0 - 1e-9)
}

/// Logarithmically spaced `ρ` grid with both ends included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(domain(format!("grid needs 0 < lo < hi, got [{lo}, {hi}]")));
    }
    match points {
        0 => Err(domain("grid needs at least one point")),
        1 => Ok(vec![lo]),
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / (points - 1) as f64;
            Ok((0..points)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == points - 1 {
                        hi
                    } else {
                        (a + step * i as f64).exp()
                    }
                })
                .collect())
        }
    }
}

/// Recovery threshold `δ(ρ)` on a log grid over `[lo, hi] ⊂ (0, ρ₀)`.
pub fn phase_curve(model: &RateModel, route: Route, lo: f64, hi: f64, points: usize) -> Result<Vec<PhaseRow>> {
    check_rho(lo)?;
    check_rho(hi)?;
    log_grid(lo, hi, points)?
        .into_iter()
        .map(|rho| {
            let d = psi0(rho, model, route)?;
            Ok(PhaseRow {
                rho,
                delta_threshold: d,
                admissible: d < 1.0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_of(&RicPair::new(0.0, 0.0).unwrap()).unwrap(), 1.0);
        let c = tau0();
        let g = gamma_of(&RicPair::symmetric(c).unwrap()).unwrap();
        assert!((g - gamma0()).abs() < 1e-13);
        assert!(matches!(
            gamma_of(&RicPair::new(1.0, 0.5).unwrap()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn condition_examples() {
        assert!(srsr_condition_holds(&RicPair::new(0.0, 0.0).unwrap()));
        assert!(srsr_condition_holds(&RicPair::new(0.3, 0.9).unwrap()));
        assert!(!srsr_condition_holds(&RicPair::new(0.8, 0.2).unwrap()));
        assert!(!srsr_condition_holds(&RicPair::new(1.2, 0.0).unwrap()));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(srsr_kappa(&RicPair::new(0.0, 0.0).unwrap()).unwrap(), 0.0);
        let r = RicPair::symmetric(4.0 / 41f64.sqrt()).unwrap();
        assert!((r.b().unwrap() - 0.8).abs() < 1e-14);
        assert!((srsr_kappa(&r).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_example() {
        let pt = GrowthPoint::new(0.5, 0.04).unwrap();
        let r = psi_bounds_eigen(&RateModel::ds(), &pt).unwrap();
        assert!((r.psi_min - 0.986_223_964_024_795_1).abs() < 1e-12);
        assert!((r.psi_max - 1.066_223_964_024_795_1).abs() < 1e-12);
        assert!((r.psi_max - r.psi_min - 0.08).abs() < 1e-14);
        let zero = eigen_from_t0(&RateModel::ds(), &pt, 0.0);
        assert!((zero.psi_max - (1.2f64.powi(2) - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn singular_example() {
        let pt = GrowthPoint::new(0.5, 0.04).unwrap();
        let r = psi_bounds_singular(&RateModel::ds(), &pt).unwrap();
        // mpmath: 2.33509396677843627, 0.96980188932074431
        assert!((r.psi_max - 2.335_093_966_778_436).abs() < 1e-12);
        assert!((r.psi_min - 0.969_801_889_320_744_3).abs() < 1e-12);
        let small = singular_from_t0(&RateModel::ds(), &pt, 0.1);
        assert!((small.psi_min - 0.51).abs() < 1e-14);
        assert_eq!(singular_from_t0(&RateModel::ds(), &pt, 1.8).psi_min, 1.0);
        assert_eq!(singular_from_t0(&RateModel::ds(), &pt, 0.8).psi_min, 1.0);
        assert!(singular_from_t0(&RateModel::ds(), &pt, 0.79).psi_min < 1.0);
    }

    #[test]
    fn critical_level_forms_agree() {
        for k in 1..1000 {
            let rho = rho0() * k as f64 / 1000.0;
            let a = eigen_critical_level(rho);
            let b = eigen_critical_level_expanded(rho);
            assert!((a - b).abs() < 1e-12, "{rho}: {a} vs {b}");
        }
        assert!(eigen_critical_level(rho0()).abs() < 1e-15);
    }

    #[test]
    fn thresholds_near_rho0() {
        let lim = std::f64::consts::E / (2.0 * rho0());
        let rho = rho0() * (1.0 - 1e-12);
        assert!((psi0_eigen(rho, &RateModel::ds()).unwrap() - lim).abs() < 1e-6);
        assert!((psi0_singular(rho, &RateModel::ds()).unwrap() - lim).abs() < 1e-6);
        assert!(psi0_eigen(rho0() + 0.01, &RateModel::ds()).is_err());
        assert!(gaussian_srsr_curve(0.0).is_err());
    }

    #[test]
    fn gaussian_curve_values() {
        // mpmath, 50 digits
        let v = gaussian_srsr_curve(0.001).unwrap();
        assert!((v / 9.181_162_959_964_826e-8 - 1.0).abs() < 1e-10);
        let d = psi0_singular(0.001, &RateModel::ds()).unwrap();
        assert!((d - v).abs() <= 1e-12 * v.max(1.0));
        // crossing of δ = 1
        let (mut lo, mut hi) = (0.0028, 0.0033);
        assert!(gaussian_srsr_curve(lo).unwrap() < 1.0);
        assert!(gaussian_srsr_curve(hi).unwrap() > 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if gaussian_srsr_curve(mid).unwrap() < 1.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((lo - 0.003_047_812_810_374_14).abs() < 1e-12);
    }

    #[test]
    fn small_rho_values() {
        let v = small_rho_conditions(0.001, &RateModel::ds()).unwrap();
        assert!((v / 2.184_105_189_119_965_8e-11 - 1.0).abs() < 1e-9);
        assert!(matches!(
            small_rho_conditions(0.001, &RateModel::tw(1.0)),
            Err(Error::Unsupported(_))
        ));
        // only the exponents agree as ρ → 0, with relative error of order √ρ
        let log_ratio =
            |rho: f64| small_rho_conditions_ln(rho, &RateModel::ds()).unwrap() / gaussian_srsr_curve_ln(rho).unwrap();
        let errs: Vec<f64> = [1e-4, 1e-6, 1e-8].iter().map(|&r| (log_ratio(r) - 1.0).abs()).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        assert!(errs[2] < 2e-3, "{errs:?}");
        let direct = psi0_singular(1e-3, &RateModel::ds()).unwrap().ln();
        assert!((gaussian_srsr_curve_ln(1e-3).unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn regime_a_ds_matches_exact() {
        let pt = GrowthPoint::new(0.5, 1e-6).unwrap();
        let exact = psi_bounds_singular(&RateModel::ds(), &pt).unwrap().psi_max;
        let approx = regime_a_psi_max(1e-6, 0.5, &RateModel::ds()).unwrap();
        assert!(((approx - exact) / exact).abs() < 0.1);
        let mut prev = f64::INFINITY;
        for k in 1..12 {
            let rb = 10f64.powi(-k);
            let v = regime_a_psi_max(rb, 0.5, &RateModel::lr(1.0)).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(regime_a_psi_max(1e-6, 0.5, &RateModel::fs(837.0)).unwrap().is_finite());
    }

    #[test]
    fn d2_values() {
        let m = RateModel::ds();
        let pt = GrowthPoint::new(0.5, 0.04).unwrap();
        let t0 = t_zero(&m, &pt).unwrap();
        let eps = 0.05;
        let d2 = d2_exponent(&m, 0.04, 0.5, eps).unwrap();
        assert!((d2 - ((t0 + eps).powi(2) - t0 * t0) / 4.0).abs() < 1e-15);
        assert!(d2_exponent(&m, 0.04, 0.5, 1e-12).unwrap() < 1e-11);
        assert!(d2_exponent(&m, 0.04, 0.5, 0.0).is_err());
    }

    #[test]
    fn grid_shape() {
        let rows = phase_curve(&RateModel::ds(), Route::Singular, PHASE_RHO_MIN, phase_rho_max(), 512).unwrap();
        assert_eq!(rows.len(), 512);
        assert_eq!(rows[0].rho, 1e-6);
        assert_eq!(rows[511].rho, phase_rho_max());
        assert!(rows.windows(2).all(|w| w[0].rho < w[1].rho));
        assert!(rows[0].admissible && !rows[511].admissible);
    }
}
