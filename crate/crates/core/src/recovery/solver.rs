//! Certified solver for `min ‖x‖₁ s.t. ‖y − Mx‖₂ ≤ η`.
//!
//! The dual is `max ⟨ν, y⟩ − η‖ν‖₂ s.t. ‖Mᵀν‖∞ ≤ 1`; any dual feasible `ν`
//! gives the lower bound `⟨ν, y⟩ − η‖ν‖₂ ≤ OPT`, so the reported gap
//! `‖x̂‖₁ − (⟨ν, y⟩ − η‖ν‖₂)` bounds the suboptimality of `x̂`.
//!
//! A primal–dual (Chambolle–Pock) iteration locates the support. Every few
//! iterations the support is polished: the KKT system restricted to the
//! support is solved in closed form, and the current dual iterate is moved
//! onto the affine set `M_Sᵀν = sign(x_S)` and scaled back into the dual
//! feasible set. Once support and signs are right this gives certificates at
//! machine precision.

use crate::error::{domain, Error, Result};
use crate::recovery::norm2;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryInstance {
    pub matrix: DMatrix<f64>,
    pub y: DVector<f64>,
    pub eta: f64,
    pub x0: Option<DVector<f64>>,
    pub s: Option<usize>,
}

impl RecoveryInstance {
    pub fn new(matrix: DMatrix<f64>, y: DVector<f64>, eta: f64) -> Self {
        Self {
            matrix,
            y,
            eta,
            x0: None,
            s: None,
        }
    }

    /// Instance `y = M·x0 + noise` with the truth attached.
    pub fn planted(matrix: DMatrix<f64>, x0: DVector<f64>, noise: &DVector<f64>, eta: f64, s: usize) -> Self {
        let y = &matrix * &x0 + noise;
        Self {
            matrix,
            y,
            eta,
            x0: Some(x0),
            s: Some(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol_feas: f64,
    pub tol_opt: f64,
    pub max_iter: usize,
    /// Iterations between support polishing attempts.
    pub polish_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_feas: 1e-8,
            tol_opt: 1e-6,
            max_iter: 50_000,
            polish_every: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryResult {
    pub x_hat: Vec<f64>,
    /// `max(0, ‖y − Mx̂‖₂ − η)`.
    pub feasibility_residual: f64,
    /// `‖x̂‖₁`.
    pub objective: f64,
    /// `‖x̂‖₁` minus the dual objective at [`dual`](Self::dual), clamped at 0.
    pub optimality_gap: f64,
    pub dual_objective: f64,
    /// A dual feasible point, `‖Mᵀν‖∞ ≤ 1`.
    pub dual: Vec<f64>,
    pub iterations: usize,
    /// Both tolerances were met.
    pub converged: bool,
}

fn soft_threshold(v: f64, k: f64) -> f64 {
    if v > k {
        v - k
    } else if v < -k {
        v + k
    } else {
        0.0
    }
}

/// Problem in normalised units: `b = y/‖y‖`, `e = η/‖y‖`.
struct Scaled<'a> {
    m: &'a DMatrix<f64>,
    b: DVector<f64>,
    e: f64,
}

struct Candidate {
    x: DVector<f64>,
    nu: DVector<f64>,
    feas: f64,
    gap: f64,
    dual_obj: f64,
}

impl Scaled<'_> {
    /// Primal residual excess, dual objective and gap for a pair `(x, ν)`,
    /// after scaling `ν` into the dual feasible set.
    fn certify(&self, x: DVector<f64>, nu: DVector<f64>) -> Candidate {
        let r = &self.b - self.m * &x;
        let feas = (r.norm() - self.e).max(0.0);
        let inf = (self.m.transpose() * &nu).amax();
        let nu = if inf > 1.0 { nu / inf } else { nu };
        let dual_obj = nu.dot(&self.b) - self.e * nu.norm();
        let obj = x.lp_norm(1);
        Candidate {
            x,
            nu,
            feas,
            gap: (obj - dual_obj).max(0.0),
            dual_obj,
        }
    }

    /// Closed-form KKT solve on `support` with signs taken from `x`.
    fn polish(&self, support: &[usize], x: &DVector<f64>, nu: &DVector<f64>) -> Option<Candidate> {
        let (n, p) = self.m.shape();
        let k = support.len();
        if k == 0 || k > n {
            return None;
        }
        let ms = DMatrix::from_fn(n, k, |i, j| self.m[(i, support[j])]);
        let g = ms.transpose() * &ms;
        let chol = g.clone().cholesky()?;
        let sigma = DVector::from_fn(k, |j, _| x[support[j]].signum());
        let z_ls = chol.solve(&(ms.transpose() * &self.b));
        let r_ls = &self.b - &ms * &z_ls;
        let (x_s, nu_new) = if self.e == 0.0 {
            // equality constraint: least squares on the support, dual moved
            // onto M_Sᵀν = σ
            let corr = &sigma - ms.transpose() * nu;
            let nu_new = nu + &ms * chol.solve(&corr);
            (z_ls, nu_new)
        } else {
            let ginv_sigma = chol.solve(&sigma);
            let q = sigma.dot(&ginv_sigma);
            let slack = self.e * self.e - r_ls.norm_squared();
            if !(slack > 0.0 && q > 0.0) {
                return None;
            }
            let inv_mu = (slack / q).sqrt();
            let x_s = &z_ls - &ginv_sigma * inv_mu;
            let r = &self.b - &ms * &x_s;
            (x_s, r / inv_mu)
        };
        if x_s.iter().zip(sigma.iter()).any(|(v, s)| v * s <= 0.0) {
            return None;
        }
        let mut full = DVector::zeros(p);
        for (j, &i) in support.iter().enumerate() {
            full[i] = x_s[j];
        }
        Some(self.certify(full, nu_new))
    }

    fn supports(&self, x: &DVector<f64>, nu: &DVector<f64>) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let xmax = x.amax();
        if xmax > 0.0 {
            for rel in [1e-6, 1e-3, 1e-2] {
                let s: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() > rel * xmax).collect();
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        // dual support: coordinates where the dual constraint is (nearly) tight
        let c = self.m.transpose() * nu;
        let cmax = c.amax();
        if cmax > 0.0 {
            let s: Vec<usize> = (0..c.len())
                .filter(|&i| c[i].abs() >= cmax * (1.0 - 1e-4) && x[i] != 0.0)
                .collect();
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

fn check_instance(inst: &RecoveryInstance, opts: &SolverOptions) -> Result<()> {
    let (n, p) = inst.matrix.shape();
    if n == 0 || p == 0 {
        return Err(domain("matrix must be non-empty"));
    }
    if inst.y.len() != n {
        return Err(domain(format!("y has length {}, expected {n}", inst.y.len())));
    }
    if !(inst.eta >= 0.0 && inst.eta.is_finite()) {
        return Err(domain(format!("eta must be finite and >= 0, got {}", inst.eta)));
    }
    if inst.matrix.iter().chain(inst.y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if !(opts.tol_feas > 0.0 && opts.tol_opt > 0.0) || opts.polish_every == 0 {
        return Err(domain("tolerances must be > 0 and polish_every >= 1"));
    }
    Ok(())
}

/// Distance from `y` to the column space of `m`.
fn range_distance(m: &DMatrix<f64>, y: &DVector<f64>) -> f64 {
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("u requested");
    let smax = svd.singular_values.amax();
    let tol = smax * f64::EPSILON * m.nrows().max(m.ncols()) as f64;
    let mut proj = DVector::zeros(y.len());
    for (k, &sv) in svd.singular_values.iter().enumerate() {
        if sv > tol {
            let col = u.column(k);
            proj += col * col.dot(y);
        }
    }
    (y - proj).norm()
}

pub fn l1_solve(inst: &RecoveryInstance, opts: &SolverOptions) -> Result<RecoveryResult> {
    check_instance(inst, opts)?;
    let (n, p) = inst.matrix.shape();
    let scale = inst.y.norm();
    if scale <= inst.eta {
        // x = 0 is feasible and optimal; ν = 0 certifies it.
        return Ok(RecoveryResult {
            x_hat: vec![0.0; p],
            feasibility_residual: 0.0,
            objective: 0.0,
            optimality_gap: 0.0,
            dual_objective: 0.0,
            dual: vec![0.0; n],
            iterations: 0,
            converged: true,
        });
    }
    let dist = range_distance(&inst.matrix, &inst.y);
    if dist > inst.eta * (1.0 + 1e-12) + 1e-12 * scale {
        return Err(Error::Infeasible {
            distance: dist,
            eta: inst.eta,
        });
    }

    let m = &inst.matrix;
    let prob = Scaled {
        m,
        b: &inst.y / scale,
        e: inst.eta / scale,
    };
    let tol_feas = opts.tol_feas / scale;
    let tol_opt = opts.tol_opt / scale;
    let mt = m.transpose();
    let lip = m.clone().svd(false, false).singular_values.amax();
    let step = 0.99 / lip;

    let mut x = DVector::<f64>::zeros(p);
    let mut x_bar = x.clone();
    // ξ is the saddle-point variable; the dual certificate is ν = −ξ.
    let mut xi = DVector::<f64>::zeros(n);
    let mut best: Option<Candidate> = None;
    let better = |c: &Candidate, b: &Option<Candidate>| match b {
        None => true,
        Some(b) => {
            let ok_c = c.feas <= tol_feas;
            let ok_b = b.feas <= tol_feas;
            (ok_c && !ok_b) || (ok_c == ok_b && c.gap + c.feas < b.gap + b.feas)
        }
    };
    let mut iterations = 0;
    for it in 1..=opts.max_iter {
        iterations = it;
        // dual step: prox of σF*, F the indicator of the ball B(b, e)
        let v = &xi + (m * &x_bar) * step;
        let w = &v / step - &prob.b;
        let wn = w.norm();
        let proj = if wn > prob.e {
            &prob.b + w * (prob.e / wn)
        } else {
            &v / step
        };
        xi = v - proj * step;
        // primal step: soft thresholding
        let g = &x - (&mt * &xi) * step;
        let x_new = g.map(|v| soft_threshold(v, step));
        x_bar = &x_new * 2.0 - &x;
        x = x_new;

        if it % opts.polish_every == 0 || it == opts.max_iter {
            let nu = -&xi;
            let mut cands = vec![prob.certify(x.clone(), nu.clone())];
            for s in prob.supports(&x, &nu) {
                if let Some(c) = prob.polish(&s, &x, &nu) {
                    cands.push(c);
                }
            }
            for c in cands {
                if better(&c, &best) {
                    best = Some(c);
                }
            }
            if let Some(b) = &best {
                if b.feas <= tol_feas && b.gap <= tol_opt {
                    break;
                }
            }
        }
    }

    let mut best = best.expect("at least one certification ran");
    if best.feas > tol_feas {
        // move the best iterate back into the constraint set along the
        // least-norm correction
        let r = &prob.b - m * &best.x;
        let rn = r.norm();
        if rn > prob.e {
            if let Some(corr) = (m * &mt)
                .cholesky()
                .map(|c| mt.clone() * c.solve(&(&r * (1.0 - prob.e / rn))))
            {
                let fixed = prob.certify(&best.x + corr, best.nu.clone());
                if fixed.feas <= best.feas {
                    best = fixed;
                }
            }
        }
    }
    let x_hat: Vec<f64> = best.x.iter().map(|v| v * scale).collect();
    let objective = x_hat.iter().map(|v| v.abs()).sum();
    let feasibility_residual = best.feas * scale;
    let optimality_gap = best.gap * scale;
    Ok(RecoveryResult {
        feasibility_residual,
        objective,
        optimality_gap,
        dual_objective: best.dual_obj * scale,
        dual: best.nu.iter().copied().collect(),
        iterations,
        converged: feasibility_residual <= opts.tol_feas && optimality_gap <= opts.tol_opt,
        x_hat,
    })
}

/// `‖y − Mx‖₂` for a dense instance, in the original units.
pub fn residual_norm(inst: &RecoveryInstance, x: &[f64]) -> f64 {
    let xv = DVector::from_column_slice(x);
    norm2((&inst.y - &inst.matrix * xv).as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::ensemble::Ensemble;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn identity_recovers_exactly() {
        let x0 = DVector::from_vec(vec![0.0, 1.5, 0.0, -2.0, 0.0]);
        let inst = RecoveryInstance::new(DMatrix::identity(5, 5), x0.clone(), 0.0);
        let r = l1_solve(&inst, &opts()).unwrap();
        assert!(r.converged);
        for (a, b) in r.x_hat.iter().zip(x0.iter()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let m = Ensemble::gaussian(1).trial_matrix(0, 4, 8);
        for eta in [0.0, 0.3] {
            let r = l1_solve(&RecoveryInstance::new(m.clone(), DVector::zeros(4), eta), &opts()).unwrap();
            assert!(r.x_hat.iter().all(|&v| v == 0.0));
            assert!(r.converged);
        }
    }

    #[test]
    fn sparse_gaussian_exact() {
        let e = Ensemble::gaussian(17);
        let m = e.trial_matrix(0, 10, 20) / 10f64.sqrt();
        let mut x0 = DVector::zeros(20);
        x0[7] = 1.3;
        let inst = RecoveryInstance::new(m.clone(), &m * &x0, 0.0);
        let r = l1_solve(&inst, &opts()).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((DVector::from_vec(r.x_hat.clone()) - &x0).norm() < 1e-8);
        assert!(r.feasibility_residual <= 1e-8);
        let dual_inf = (m.transpose() * DVector::from_vec(r.dual.clone())).amax();
        assert!(dual_inf <= 1.0 + 1e-12);
    }

    #[test]
    fn noisy_certificate() {
        let e = Ensemble::gaussian(5);
        let m = e.trial_matrix(0, 12, 24) / 12f64.sqrt();
        let y = e.trial_matrix(1, 12, 1).column(0).into_owned();
        let eta = 0.4 * y.norm();
        let r = l1_solve(&RecoveryInstance::new(m.clone(), y.clone(), eta), &opts()).unwrap();
        assert!(r.converged, "{r:?}");
        let res = (&y - &m * DVector::from_vec(r.x_hat.clone())).norm();
        assert!(res <= eta + 1e-8);
    }

    #[test]
    fn homogeneous_in_scale() {
        let e = Ensemble::gaussian(8);
        let m = e.trial_matrix(0, 8, 16) / 8f64.sqrt();
        let y = e.trial_matrix(1, 8, 1).column(0).into_owned();
        let a = l1_solve(&RecoveryInstance::new(m.clone(), y.clone(), 0.1), &opts()).unwrap();
        let b = l1_solve(&RecoveryInstance::new(m.clone(), &y * 3.0, 0.3), &opts()).unwrap();
        for (u, v) in a.x_hat.iter().zip(&b.x_hat) {
            assert!((3.0 * u - v).abs() < 1e-6);
        }
    }

    #[test]
    fn infeasible_detected() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let y = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        assert!(matches!(
            l1_solve(&RecoveryInstance::new(m, y, 0.5), &opts()),
            Err(Error::Infeasible { .. })
        ));
    }
}
