//! Deterministic parallel evaluation of independent grid points.
//!
//! Work items are mapped on a dedicated rayon pool whose size is capped by
//! the `SSHQED_THREADS` environment variable. Results always come back in
//! input order, so output is identical to a serial run.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::Result;

pub const THREADS_ENV: &str = "SSHQED_THREADS";

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get())
                    .unwrap_or(1)
            });
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to build worker pool")
    })
}

/// Number of workers used by [`par_map`].
pub fn worker_count() -> usize {
    pool().current_num_threads()
}

pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    pool().install(|| items.par_iter().map(&f).collect())
}

/// Like [`par_map`] but stops at an error; the error reported is the one of
/// the earliest failing item.
pub fn try_par_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    par_map(items, f).into_iter().collect()
}
