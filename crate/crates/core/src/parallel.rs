//! Fan-out over Monte Carlo realizations.
//!
//! With the `parallel` feature the work runs on a rayon pool; without it,
//! or with a single worker, it runs in a plain loop. Results always come
//! back in realization order, so downstream reductions do not depend on
//! scheduling.

use crate::error::{Error, Result};

/// Applies `f` to `0..count` and collects the results in index order.
///
/// `workers = None` uses rayon's default pool size.
pub fn map_realizations<T, F>(count: usize, workers: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if workers == Some(0) {
        return Err(Error::Config("worker count must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    {
        if workers != Some(1) {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.unwrap_or(0))
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            return pool.install(|| (0..count as u64).into_par_iter().map(&f).collect());
        }
    }
    sequential(count, f)
}

pub fn sequential<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> Result<T>,
{
    (0..count as u64).map(f).collect()
}

/// True when the crate was built with rayon support.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
