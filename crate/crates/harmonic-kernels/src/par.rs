//! Data-parallel helpers. With the `parallel` feature these run on the rayon
//! pool; without it they are plain sequential loops. Output order always
//! matches input order, so results do not depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    (0..n).map(f).collect()
}

/// `out[i] = f(i)` over a mutable slice.
#[cfg(feature = "parallel")]
pub fn fill<R: Send>(out: &mut [R], f: impl Fn(usize) -> R + Sync + Send) {
    out.par_iter_mut().enumerate().for_each(|(i, v)| *v = f(i));
}

#[cfg(not(feature = "parallel"))]
pub fn fill<R: Send>(out: &mut [R], f: impl Fn(usize) -> R + Sync + Send) {
    out.iter_mut().enumerate().for_each(|(i, v)| *v = f(i));
}

/// Deterministic sum: chunk partial sums are combined in index order.
pub fn sum_f64(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    const CHUNK: usize = 4096;
    let chunks = n.div_ceil(CHUNK);
    map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).map(&f).sum::<f64>()
    })
    .into_iter()
    .sum()
}

/// Dot product with the same deterministic chunking as [`sum_f64`].
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    sum_f64(a.len(), |i| a[i] * b[i])
}

/// Worker threads available to the data-parallel helpers.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// `out[i] = f(i, out[i])`.
#[cfg(feature = "parallel")]
pub fn update(out: &mut [f64], f: impl Fn(usize, f64) -> f64 + Sync + Send) {
    out.par_iter_mut().enumerate().for_each(|(i, v)| *v = f(i, *v));
}

#[cfg(not(feature = "parallel"))]
pub fn update(out: &mut [f64], f: impl Fn(usize, f64) -> f64 + Sync + Send) {
    out.iter_mut().enumerate().for_each(|(i, v)| *v = f(i, *v));
}

/// Runs `f` on a dedicated pool of `threads` workers (`1` gives the
/// sequential schedule). Without the `parallel` feature `f` runs inline.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> crate::Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| crate::Error::Parameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> crate::Result<R> {
    Ok(f())
}
