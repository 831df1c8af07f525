//! Data-parallel map over independent work items.
//!
//! The sweep simulator and the standing-wave grid search both reduce to
//! embarrassingly parallel maps. With the default `parallel` feature the map
//! runs on the rayon pool; without it the same call degrades to a sequential
//! loop, which keeps the crate usable on targets where a thread pool is
//! unwelcome and gives the benchmark suite a baseline to compare against.
//!
//! Callers are responsible for making per-item work order-independent (the
//! simulator derives one RNG stream per item for exactly this reason), so
//! both execution modes return identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_map_preserves_index_order() {
        let out = map_indexed(100, |i| i * i);
        assert_eq!(out.len(), 100);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }
}
