//! Worker pools for the scans. Results are always gathered through indexed
//! parallel iterators, so output order never depends on the job count.

use rayon::{ThreadPool, ThreadPoolBuilder};

/// A pool of `jobs` threads (`0` means one per logical core).
pub fn build(jobs: usize) -> Option<ThreadPool> {
    ThreadPoolBuilder::new().num_threads(jobs).build().ok()
}

/// Run `f` inside a pool of `jobs` threads (`0` means one per logical core).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match build(jobs) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
