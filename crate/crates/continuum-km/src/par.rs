//! Execution-strategy toggles. With the default `parallel` feature the
//! scan entry points fan out through rayon; without it they run plain
//! sequential loops. Results are identical either way: scans report the
//! least failing index, maps preserve order. The `*_seq` forms are
//! always sequential, kept callable so the two strategies can be
//! benchmarked against each other in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First item (least index) for which `f` produces a witness.
pub fn first_failure<T, F>(items: &[T], f: F) -> Option<(usize, String)>
where
    T: Sync,
    F: Fn(&T) -> Option<String> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items
            .par_iter()
            .enumerate()
            .filter_map(|(i, t)| f(t).map(|w| (i, w)))
            .min_by_key(|&(i, _)| i)
    }
    #[cfg(not(feature = "parallel"))]
    {
        first_failure_seq(items, f)
    }
}

/// Sequential scan with the same contract as [`first_failure`].
pub fn first_failure_seq<T, F>(items: &[T], f: F) -> Option<(usize, String)>
where
    F: Fn(&T) -> Option<String>,
{
    items
        .iter()
        .enumerate()
        .find_map(|(i, t)| f(t).map(|w| (i, w)))
}

/// Order-preserving map over a slice.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_slice_seq(items, f)
    }
}

/// Sequential map with the same contract as [`map_slice`].
pub fn map_slice_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
