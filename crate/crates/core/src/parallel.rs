//! Thread-pool sizing. Results never depend on the number of threads; every
//! parallel loop collects per-trial outputs in trial order before reducing.

use crate::error::{domain, Result};

pub const THREADS_ENV: &str = "RICLAB_THREADS";

/// Parses a `RICLAB_THREADS` value.
pub fn parse_threads(v: &str) -> Result<usize> {
    match v.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(domain(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
    }
}

/// Sizes the global rayon pool from `RICLAB_THREADS` if it is set. Only the
/// first successful call has an effect.
pub fn configure_from_env() -> Result<Option<usize>> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n = parse_threads(&v)?;
    // an already initialised pool is not an error
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse() {
        assert_eq!(parse_threads("4").unwrap(), 4);
        assert!(parse_threads("0").is_err());
        assert!(parse_threads("x").is_err());
    }
}
