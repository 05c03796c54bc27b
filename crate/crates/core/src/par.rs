//! Data-parallel helpers. With the `parallel` feature these fan out over
//! rayon's pool; without it they run sequentially. Results are collected in
//! index order either way, so callers observe the same output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub(crate) fn map_slice<'a, S, T, F>(items: &'a [S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&'a S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Element-wise sum of fixed-size integer arrays produced per index.
pub(crate) fn sum_arrays<const N: usize, F>(n: usize, f: F) -> [u64; N]
where
    F: Fn(usize) -> [u64; N] + Sync + Send,
{
    let add = |mut a: [u64; N], b: [u64; N]| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).reduce(|| [0; N], add)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold([0; N], add)
    }
}
