//! Data-parallel map helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`map_indices`] fans out over rayon;
//! without it both helpers are plain loops. Results are collected in input
//! order either way, so callers are deterministic regardless of the feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indices<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_indices<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    map_indices_seq(n, f)
}

/// Always-sequential variant, kept callable so benches can compare both paths.
pub fn map_indices_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Run `f` inside a rayon pool of `threads` workers (used by sweep commands
/// honoring `QADD_THREADS`). Sequential builds ignore the thread count.
#[cfg(feature = "parallel")]
pub fn with_thread_cap<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .expect("rayon pool construction"),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_thread_cap<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}
