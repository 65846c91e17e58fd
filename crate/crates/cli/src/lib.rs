//! Library side of the `redei8` command-line tool.

pub mod forms;
pub mod report;
pub mod scan;

use redei8_core::redei::DEFAULT_MAX_ABS_DELTA;

/// Environment variable overriding the `|Δ|` safety bound.
pub const MAX_DELTA_ENV: &str = "REDEI8_MAX_DELTA";

/// The `|Δ|` bound: `REDEI8_MAX_DELTA` if set and valid, else the default.
pub fn max_abs_delta() -> Result<u64, String> {
    match std::env::var(MAX_DELTA_ENV) {
        Ok(v) => v.trim().parse::<u64>().map_err(|e| format!("{MAX_DELTA_ENV}={v:?}: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_ABS_DELTA),
        Err(e) => Err(format!("{MAX_DELTA_ENV}: {e}")),
    }
}

/// Parses a comma-separated list of positive integers.
pub fn parse_primes(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            match p.parse::<u64>() {
                Ok(0) | Err(_) => Err(format!("{p:?} is not a positive integer")),
                Ok(v) => Ok(v),
            }
        })
        .collect()
}
