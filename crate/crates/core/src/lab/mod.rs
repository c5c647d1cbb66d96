//! Seeded random matrices, their extreme spectra, Monte Carlo estimates of
//! spectral deviation probabilities, and empirical restricted isometry
//! constants.

pub mod deviation;
pub mod ensemble;
pub mod ric;
pub mod spectrum;
