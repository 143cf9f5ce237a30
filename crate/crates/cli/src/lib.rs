//! Command-line harness for the tubal Hot-SVD family: tensor file I/O, the
//! Hilbert demo, the random-recovery benchmark, compression and a
//! self-test suite.

pub mod bench;
pub mod compress;
pub mod hilbert;
pub mod selftest;
pub mod tensor_file;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "TUBAL_THREADS";

/// Sizes the global rayon pool from `TUBAL_THREADS` when set.
pub fn init_thread_pool() -> anyhow::Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw.trim().parse().map_err(|_| anyhow::anyhow!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    anyhow::ensure!(n > 0, "{THREADS_ENV} must be positive");
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(Some(n))
}
