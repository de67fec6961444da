//! File formats, configuration and subcommands of the `cilia` tool.
//!
//! The numerics live in `cilia-core`; this crate reads and writes CSV and
//! JSON, parses the flat run configuration, and parallelizes grid
//! evaluations. Thread count comes from `CILIA_THREADS` when set.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod french;
pub mod source;

pub use config::RunConfig;
pub use error::{CliError, ConfigError};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "CILIA_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`]. Unset leaves the
/// default; a value that is not a positive integer is a usage error.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // A pool that is already built keeps its size; only the first call counts.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
