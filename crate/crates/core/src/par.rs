//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the helpers dispatch to rayon;
//! without it they run sequentially. Both paths produce bit-identical
//! results: reductions are performed over fixed-size chunks whose partial
//! sums are combined in index order, so the thread schedule never changes
//! floating-point rounding.
//!
//! The [`sequential`] module is always compiled so callers (benchmarks in
//! particular) can compare the two paths in one binary.

/// Chunk length for deterministic reductions.
pub const CHUNK: usize = 4096;

/// Maps `f` over `0..n` and collects the results in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sequential::map_range(n, f)
    }
}

/// Maps `f` over the items of `items`, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sequential::map_slice(items, f)
    }
}

/// Deterministic sum of `f(i)` for `i in 0..n`.
pub fn sum_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let partials = map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).map(&f).sum::<f64>()
    });
    partials.into_iter().sum()
}

/// Deterministic maximum of `f(i)` for `i in 0..n` (`0.0` when empty).
pub fn max_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).map(&f).fold(0.0_f64, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Applies `f` to each consecutive chunk of `data` of length `len`.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], len: usize, f: F)
where
    T: Send,
    F: Fn(&mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(len).for_each(f);
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(len).for_each(f);
    }
}

/// Like [`for_each_chunk_mut`], passing the chunk index as well.
pub fn for_each_chunk_mut_indexed<T, F>(data: &mut [T], len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(len).enumerate().for_each(|(i, c)| f(i, c));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(len).enumerate().for_each(|(i, c)| f(i, c));
    }
}

/// Caps the global worker pool at `threads`. Returns `false` when the pool
/// was already built or the crate was compiled without `parallel`.
pub fn limit_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

/// Reads `SLAB_THREADS` and applies it with [`limit_threads`]. Unset means
/// no cap; an unparsable value is an error.
pub fn limit_threads_from_env() -> crate::Result<Option<usize>> {
    match std::env::var("SLAB_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| crate::error::invalid(format!("SLAB_THREADS must be a positive integer, got '{v}'")))?;
            limit_threads(n);
            Ok(Some(n))
        }
    }
}

/// Always-sequential versions of the helpers above.
pub mod sequential {
    use super::CHUNK;

    pub fn map_range<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
        (0..n).map(f).collect()
    }

    pub fn map_slice<S, T, F: Fn(&S) -> T>(items: &[S], f: F) -> Vec<T> {
        items.iter().map(f).collect()
    }

    pub fn sum_range<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
        let chunks = n.div_ceil(CHUNK);
        (0..chunks)
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(n);
                (lo..hi).map(&f).sum::<f64>()
            })
            .sum()
    }
}
