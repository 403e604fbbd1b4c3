//! Execution backend: data-parallel map with a sequential fallback.
//!
//! Compiled with the `parallel` feature (default) the helpers fan work out
//! over rayon's global pool; without it they run plain iterators. Callers are
//! restricted to order-preserving maps over independent items, so both
//! backends produce identical results and the feature flag never changes
//! observable output, only wall-clock time.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Name of the active backend, used by benches and reports.
pub fn backend_name() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

/// Order-preserving map over owned items.
#[cfg(feature = "parallel")]
pub fn map_vec<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

/// Order-preserving map over owned items.
#[cfg(not(feature = "parallel"))]
pub fn map_vec<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Order-preserving map over a slice.
#[cfg(feature = "parallel")]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Order-preserving map over a slice.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
