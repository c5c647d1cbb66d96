//! Empirical restricted isometry constants of `M = X/√n` over all (or a
//! random sample of) supports of size `r`.

use crate::core_math::log_binomial;
use crate::error::{domain, Error, Result};
use crate::lab::ensemble::Ensemble;
use crate::lab::spectrum::{gram_cols, symmetric_eigenvalues};
use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest number of supports an exhaustive run may visit.
pub const SUPPORT_BUDGET: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RicMode {
    Exhaustive,
    /// `k` supports drawn uniformly with replacement; gives lower bounds.
    Sampled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalRic {
    pub n: u64,
    pub p: u64,
    pub r: u64,
    pub c_min_hat: f64,
    pub c_max_hat: f64,
    pub subsets_evaluated: u64,
    pub exhaustive: bool,
}

/// Visits every `r`-subset of `0..p` in lexicographic order.
pub(crate) fn for_each_combination(p: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > p {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + p - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Extreme eigenvalues of the principal submatrix of `gram` on `support`.
fn support_extremes(gram: &DMatrix<f64>, support: &[usize]) -> Result<(f64, f64)> {
    match support.len() {
        1 => {
            let d = gram[(support[0], support[0])];
            Ok((d, d))
        }
        2 => {
            let (a, b, c) = (
                gram[(support[0], support[0])],
                gram[(support[1], support[1])],
                gram[(support[0], support[1])],
            );
            let mid = 0.5 * (a + b);
            let rad = (0.25 * (a - b) * (a - b) + c * c).sqrt();
            Ok((mid - rad, mid + rad))
        }
        k => {
            let sub = DMatrix::from_fn(k, k, |i, j| gram[(support[i], support[j])]);
            let ev = symmetric_eigenvalues(&sub)?;
            Ok((ev[0], ev[k - 1]))
        }
    }
}

/// RICs of order `r` for the given (already scaled) matrix.
///
/// In sampled mode the supports are drawn from `rng`.
pub fn empirical_ric_of<R: Rng + ?Sized>(m: &DMatrix<f64>, r: u64, mode: RicMode, rng: &mut R) -> Result<EmpiricalRic> {
    let (n, p) = (m.nrows() as u64, m.ncols() as u64);
    if r == 0 || r > p {
        return Err(domain(format!(
            "support size must satisfy 1 <= r <= p, got r={r}, p={p}"
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let gram = gram_cols(m, 1.0);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut count = 0u64;
    let mut err = None;
    let mut visit = |s: &[usize]| match support_extremes(&gram, s) {
        Ok((a, b)) => {
            lo = lo.min(a);
            hi = hi.max(b);
            count += 1;
        }
        Err(e) => err = Some(e),
    };
    let exhaustive = match mode {
        RicMode::Exhaustive => {
            let needed = log_binomial(p, r)?.exp();
            if needed > SUPPORT_BUDGET * (1.0 + 1e-12) {
                return Err(Error::Budget {
                    what: "supports",
                    needed: needed.round(),
                    limit: SUPPORT_BUDGET,
                });
            }
            for_each_combination(p as usize, r as usize, &mut visit);
            true
        }
        RicMode::Sampled(k) => {
            if k == 0 {
                return Err(domain("sampled mode needs k >= 1"));
            }
            let mut s: Vec<usize> = Vec::with_capacity(r as usize);
            for _ in 0..k {
                s.clear();
                s.extend(rand::seq::index::sample(rng, p as usize, r as usize).iter());
                s.sort_unstable();
                visit(&s);
            }
            false
        }
    };
    if let Some(e) = err {
        return Err(e);
    }
    Ok(EmpiricalRic {
        n,
        p,
        r,
        c_min_hat: (1.0 - lo).max(0.0),
        c_max_hat: (hi - 1.0).max(0.0),
        subsets_evaluated: count,
        exhaustive,
    })
}

/// Draws `X` (`n × p`) from stream 0 of the ensemble, scales it to
/// `M = X/√n` and computes its order-`r` RICs. Sampled supports come from
/// stream 1.
pub fn empirical_ric(ensemble: &Ensemble, n: u64, p: u64, r: u64, mode: RicMode) -> Result<EmpiricalRic> {
    if n == 0 {
        return Err(domain("n must be >= 1"));
    }
    if r == 0 || r > p {
        return Err(domain(format!(
            "support size must satisfy 1 <= r <= p, got r={r}, p={p}"
        )));
    }
    let m = ensemble.trial_matrix(0, n as usize, p as usize) / (n as f64).sqrt();
    empirical_ric_of(&m, r, mode, &mut ensemble.rng(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::spectrum::extreme_eigs;

    #[test]
    fn combinations_count() {
        let mut n = 0;
        let mut last = vec![];
        for_each_combination(20, 2, |s| {
            n += 1;
            last = s.to_vec();
        });
        assert_eq!(n, 190);
        assert_eq!(last, vec![18, 19]);
        let mut k = 0;
        for_each_combination(5, 5, |_| k += 1);
        assert_eq!(k, 1);
        for_each_combination(5, 0, |s| assert!(s.is_empty()));
    }

    #[test]
    fn full_support_uses_gram_spectrum() {
        let e = Ensemble::gaussian(3);
        let ric = empirical_ric(&e, 8, 5, 5, RicMode::Exhaustive).unwrap();
        let m = e.trial_matrix(0, 8, 5) / 8f64.sqrt();
        let (lo, hi) = extreme_eigs(&gram_cols(&m, 1.0)).unwrap();
        assert!((ric.c_max_hat - (hi - 1.0).max(0.0)).abs() < 1e-12);
        assert!((ric.c_min_hat - (1.0 - lo).max(0.0)).abs() < 1e-12);
        assert_eq!(ric.subsets_evaluated, 1);
    }

    #[test]
    fn isometry_has_zero_constants() {
        let m = DMatrix::<f64>::identity(6, 6);
        for r in 1..=6 {
            let ric = empirical_ric_of(&m, r, RicMode::Exhaustive, &mut Ensemble::gaussian(0).rng(0)).unwrap();
            assert!(ric.c_min_hat < 1e-15 && ric.c_max_hat < 1e-15);
        }
    }

    #[test]
    fn sampled_below_exhaustive() {
        let e = Ensemble::gaussian(21);
        let ex = empirical_ric(&e, 16, 20, 2, RicMode::Exhaustive).unwrap();
        assert_eq!(ex.subsets_evaluated, 190);
        assert!(ex.exhaustive);
        let sa = empirical_ric(&e, 16, 20, 2, RicMode::Sampled(190)).unwrap();
        assert!(!sa.exhaustive);
        assert!(sa.c_max_hat <= ex.c_max_hat && sa.c_min_hat <= ex.c_min_hat);
    }

    #[test]
    fn budget_and_domain() {
        let e = Ensemble::gaussian(1);
        assert!(matches!(
            empirical_ric(&e, 10, 60, 10, RicMode::Exhaustive),
            Err(Error::Budget { .. })
        ));
        assert!(empirical_ric(&e, 10, 5, 6, RicMode::Exhaustive).is_err());
    }
}
