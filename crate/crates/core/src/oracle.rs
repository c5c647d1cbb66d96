//! Slow reference implementations, written independently of the code they
//! check: exact big-integer binomials, brute-force `σ_s`, a vertex
//! enumeration for the equality-constrained ℓ1 program, and eigenvalues from
//! the characteristic polynomial.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)` exactly.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Natural log of a positive big integer, accurate to a few ulps.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 1000 {
        if let Some(v) = x.to_f64() {
            if v.is_finite() {
                return v.ln();
            }
        }
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Both central-binomial tail inequalities at `(m, n)`, from exact binomials:
/// `ln[(n/4^m)C(2m, m−n)] ≤ 5 − 0.6321n²/m` and
/// `ln[((n+½)/4^m)C(2m+1, m−n)] ≤ 2 − 0.6555n²/m`.
/// Returns the two margins `lhs − rhs`.
pub fn borned1_margins(m: u64, n: u64) -> (f64, f64) {
    let four_m = (BigUint::one() << (2 * m)) as BigUint;
    let ln4m = ln_big(&four_m);
    let a = ln_big(&(binomial(2 * m, m - n) * n)) - ln4m;
    // (n + 1/2)·C = (2n+1)·C / 2
    let b = ln_big(&(binomial(2 * m + 1, m - n) * (2 * n + 1))) - std::f64::consts::LN_2 - ln4m;
    let r = (n * n) as f64 / m as f64;
    (a - (5.0 - 0.6321 * r), b - (2.0 - 0.6555 * r))
}

/// Largest margin of both inequalities over all `1 ≤ n ≤ m ≤ m_max`.
///
/// Each row walks `C(2m, m−n)` and `C(2m+1, m−n)` down from the centre with
/// exact integer recurrences.
pub fn borned1_worst(m_max: u64) -> (f64, f64) {
    let mut worst = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for m in 1..=m_max {
        let ln4m = 2.0 * m as f64 * std::f64::consts::LN_2;
        let mut even = binomial(2 * m, m);
        let mut odd = binomial(2 * m + 1, m);
        for n in 1..=m {
            // C(N, k−1) = C(N, k)·k / (N − k + 1) with k = m − n + 1
            let k = m - n + 1;
            even = even * k / (2 * m - k + 1);
            odd = odd * k / (2 * m + 2 - k);
            let r = (n * n) as f64 / m as f64;
            let a = ln_big(&(&even * n)) - ln4m - (5.0 - 0.6321 * r);
            let b = ln_big(&(&odd * (2 * n + 1))) - std::f64::consts::LN_2 - ln4m - (2.0 - 0.6555 * r);
            worst = (worst.0.max(a), worst.1.max(b));
        }
    }
    worst
}

/// `ln C(p, r) − [ln Θ + p·H(r/p)]` with the entropy and Θ written out
/// directly; negative when the envelope holds.
pub fn envelope_margin(p: u64, r: u64) -> f64 {
    let (pf, rf) = (p as f64, r as f64);
    let q = rf / pf;
    let h = -q * q.ln() - (1.0 - q) * (1.0 - q).ln();
    let ln_theta = 0.5 * (0.5 - (2.0 * std::f64::consts::PI).ln() - (rf * (1.0 - q)).ln() / pf);
    ln_big(&binomial(p, r)) - (ln_theta + pf * h)
}

/// `σ_s(x)₁` by trying every support of size `s`.
pub fn sigma_s_brute(x: &[f64], s: usize) -> f64 {
    let p = x.len();
    let mut best = f64::INFINITY;
    let total: f64 = x.iter().map(|v| v.abs()).sum();
    for mask in 0u64..(1u64 << p) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let kept: f64 = (0..p).filter(|i| mask >> i & 1 == 1).map(|i| x[i].abs()).sum();
        best = best.min(total - kept);
    }
    best
}

/// Solves the square system `a·x = b` (row-major `k×k`) by Gaussian
/// elimination with partial pivoting; `None` if numerically singular.
fn solve_square(mut a: Vec<f64>, mut b: Vec<f64>, k: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i * k + col].abs().total_cmp(&a[j * k + col].abs()))?;
        if a[piv * k + col].abs() <= 1e-10 * scale {
            return None;
        }
        if piv != col {
            for j in 0..k {
                a.swap(piv * k + j, col * k + j);
            }
            b.swap(piv, col);
        }
        for i in col + 1..k {
            let f = a[i * k + col] / a[col * k + col];
            for j in col..k {
                a[i * k + j] -= f * a[col * k + j];
            }
            b[i] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| a[i * k + j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i * k + i];
    }
    Some(x)
}

/// `min ‖x‖₁ s.t. Mx = y` for a row-major `n×p` matrix with `n ≤ p`, by
/// enumerating every basic solution (every `n`-subset of columns).
///
/// Returns the optimal value and a minimiser.
pub fn l1_vertex_enumeration(m: &[f64], n: usize, p: usize, y: &[f64]) -> Option<(f64, Vec<f64>)> {
    assert_eq!(m.len(), n * p);
    assert!(n <= p);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    loop {
        let a: Vec<f64> = (0..n).flat_map(|i| idx.iter().map(move |&j| m[i * p + j])).collect();
        if let Some(xs) = solve_square(a, y.to_vec(), n) {
            // reject bases whose solution does not reproduce y
            let res: f64 = (0..n)
                .map(|i| {
                    let r = y[i] - idx.iter().zip(&xs).map(|(&j, v)| m[i * p + j] * v).sum::<f64>();
                    r * r
                })
                .sum::<f64>()
                .sqrt();
            if res <= 1e-9 * ynorm {
                let obj: f64 = xs.iter().map(|v| v.abs()).sum();
                if best.as_ref().is_none_or(|b| obj < b.0) {
                    let mut full = vec![0.0; p];
                    for (&j, v) in idx.iter().zip(&xs) {
                        full[j] = *v;
                    }
                    best = Some((obj, full));
                }
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < p - n + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Characteristic polynomial coefficients `c₀..c_k` (with `c_k = 1`) of a
/// row-major `k×k` matrix, by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &[f64], k: usize) -> Vec<f64> {
    let mul = |x: &[f64], y: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; k * k];
        for i in 0..k {
            for l in 0..k {
                for j in 0..k {
                    out[i * k + j] += x[i * k + l] * y[l * k + j];
                }
            }
        }
        out
    };
    let mut c = vec![0.0; k + 1];
    c[k] = 1.0;
    let mut mk = vec![0.0; k * k];
    for step in 1..=k {
        // M_step = A·M_{step−1} + c_{k−step+1}·I
        let mut next = mul(a, &mk);
        for i in 0..k {
            next[i * k + i] += c[k - step + 1];
        }
        let am = mul(a, &next);
        let tr: f64 = (0..k).map(|i| am[i * k + i]).sum();
        c[k - step] = -tr / step as f64;
        mk = next;
    }
    c
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// Real eigenvalues of a small symmetric matrix (row-major, `k ≤ 4`), as the
/// sign changes of its characteristic polynomial on a fine grid inside the
/// Gershgorin interval, refined by bisection. Assumes distinct eigenvalues.
pub fn eigenvalues_charpoly(a: &[f64], k: usize) -> Vec<f64> {
    assert!(k <= 4 && a.len() == k * k);
    let c = char_poly(a, k);
    let radius = (0..k)
        .map(|i| (0..k).map(|j| a[i * k + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
        * 1.01
        + 1e-12;
    let grid = 200_000;
    let mut roots = Vec::new();
    let mut x0 = -radius;
    let mut f0 = horner(&c, x0);
    for g in 1..=grid {
        let x1 = -radius + 2.0 * radius * g as f64 / grid as f64;
        let f1 = horner(&c, x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = horner(&c, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}
