//! Data-parallel map helpers. With the `parallel` feature these dispatch to
//! rayon; without it they run sequentially. Output order matches input order
//! either way, so results are deterministic.

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<I, U, F>(items: Vec<I>, f: F) -> Vec<U>
where
    I: Send,
    U: Send,
    F: Fn(I) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<I, U, F>(items: Vec<I>, f: F) -> Vec<U>
where
    F: Fn(I) -> U,
{
    items.into_iter().map(f).collect()
}

/// Maps `0..n`, going parallel only past a size threshold (line solves inside
/// the dual solver are too small to farm out on desk-scale instances).
#[cfg(feature = "parallel")]
pub(crate) fn map_indices<U, F>(n: usize, threshold: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if n >= threshold {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<U, F>(n: usize, _threshold: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}
