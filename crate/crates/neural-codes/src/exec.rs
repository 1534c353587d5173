//! Order-preserving execution helpers.
//!
//! With the `parallel` feature the loops run on rayon; without it they run
//! sequentially. Results are identical either way, so callers can treat the
//! feature as a pure throughput knob.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Like [`map_collect`], but only goes parallel when `parallel_worthwhile`
/// is set; tiny work items are cheaper on one thread.
#[cfg(feature = "parallel")]
pub(crate) fn map_collect_when<T, U, F>(parallel_worthwhile: bool, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    if parallel_worthwhile {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect_when<T, U, F>(_parallel_worthwhile: bool, items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// First `Some` in input order, searched concurrently when possible.
#[cfg(feature = "parallel")]
pub(crate) fn find_map_first<T, U, F>(items: Vec<T>, f: F) -> Option<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Option<U> + Sync + Send,
{
    items.into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_map_first<T, U, F>(items: Vec<T>, f: F) -> Option<U>
where
    F: Fn(T) -> Option<U>,
{
    items.into_iter().find_map(f)
}

#[cfg(feature = "parallel")]
pub(crate) fn all_indices<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    (0..len).into_par_iter().all(pred)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn all_indices<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool,
{
    (0..len).all(pred)
}
