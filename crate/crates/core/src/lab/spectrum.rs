use crate::error::{domain, Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

const SYMMETRY_TOL: f64 = 1e-12;

fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(domain(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_finite(m)?;
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if worst > SYMMETRY_TOL * scale {
        return Err(Error::Asymmetric(worst / scale));
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `(λ_min, λ_max)` of a symmetric matrix.
pub fn extreme_eigs(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    let ev = symmetric_eigenvalues(m)?;
    Ok((ev[0], ev[ev.len() - 1]))
}

/// `(σ_min, σ_max)` over the `min(rows, cols)` singular values.
pub fn extreme_singulars(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(domain("expected a non-empty matrix"));
    }
    check_finite(m)?;
    let sv = m.singular_values();
    let lo = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sv.iter().copied().fold(0.0, f64::max);
    Ok((lo, hi))
}

/// `A·Aᵀ / scale`, symmetrised so that it is exactly symmetric.
pub fn gram_rows(a: &DMatrix<f64>, scale: f64) -> DMatrix<f64> {
    let g = a * a.transpose() / scale;
    (&g + g.transpose()) * 0.5
}

/// `Aᵀ·A / scale`, symmetrised.
pub fn gram_cols(a: &DMatrix<f64>, scale: f64) -> DMatrix<f64> {
    let g = a.transpose() * a / scale;
    (&g + g.transpose()) * 0.5
}

/// Marchenko–Pastur edges `((1−√ρ̄)², (1+√ρ̄)²)`.
pub fn mp_edges(rhobar: f64) -> Result<(f64, f64)> {
    if !(rhobar > 0.0 && rhobar < 1.0) {
        return Err(domain(format!("rhobar must lie in (0,1), got {rhobar}")));
    }
    let s = rhobar.sqrt();
    Ok(((1.0 - s).powi(2), (1.0 + s).powi(2)))
}
