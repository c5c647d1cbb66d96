use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    Gaussian,
    Rademacher,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::Rademacher => "rademacher",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An iid entry law together with a master seed.
///
/// Trial `i` of any experiment draws from the ChaCha8 stream `i` of the
/// master seed, so results do not depend on how trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ensemble {
    pub kind: EnsembleKind,
    pub seed: u64,
}

impl Ensemble {
    pub fn gaussian(seed: u64) -> Self {
        Self {
            kind: EnsembleKind::Gaussian,
            seed,
        }
    }

    pub fn rademacher(seed: u64) -> Self {
        Self {
            kind: EnsembleKind::Rademacher,
            seed,
        }
    }

    /// Generator for trial `trial`.
    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }

    pub fn entry<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            EnsembleKind::Gaussian => rng.sample(StandardNormal),
            EnsembleKind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// `rows × cols` matrix drawn from `rng`, filled row by row.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
        let data: Vec<f64> = (0..rows * cols).map(|_| self.entry(rng)).collect();
        DMatrix::from_row_slice(rows, cols, &data)
    }

    /// The matrix of trial `trial`.
    pub fn trial_matrix(&self, trial: u64, rows: usize, cols: usize) -> DMatrix<f64> {
        self.fill(&mut self.rng(trial), rows, cols)
    }
}

/// Unscaled `rows × cols` matrix from stream 0 of the ensemble seed.
pub fn sample_matrix(ensemble: &Ensemble, rows: usize, cols: usize) -> DMatrix<f64> {
    ensemble.trial_matrix(0, rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_law() {
        let m = sample_matrix(&Ensemble::rademacher(7), 1000, 1000);
        assert!(m.iter().all(|&v| v == 1.0 || v == -1.0));
        let mean = m.sum() / 1e6;
        assert!(mean.abs() < 4e-3);
    }

    #[test]
    fn gaussian_moments() {
        let m = sample_matrix(&Ensemble::gaussian(11), 1000, 1000);
        let mean = m.sum() / 1e6;
        let var = m.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 1e6;
        assert!((0.99..=1.01).contains(&var), "{var}");
        assert!(mean.abs() < 5e-3);
    }

    #[test]
    fn seeded() {
        let e = Ensemble::gaussian(3);
        assert_eq!(sample_matrix(&e, 5, 7), sample_matrix(&e, 5, 7));
        assert_ne!(e.trial_matrix(0, 5, 7), e.trial_matrix(1, 5, 7));
        assert_ne!(sample_matrix(&e, 5, 7), sample_matrix(&Ensemble::gaussian(4), 5, 7));
    }
}
