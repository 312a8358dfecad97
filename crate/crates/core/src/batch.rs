//! Data-parallel batch evaluation with a sequential fallback.
//!
//! Work items are indexed trials. Results are merged with associative,
//! commutative reductions only, so the outcome does not depend on how items
//! are scheduled.

/// How a batch of independent trials is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the rayon global pool when the `parallel` feature is enabled,
    /// otherwise runs sequentially.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Maps every index in `0..count` and folds the results with `reduce`.
///
/// The grouping of the fold depends on scheduling, so `reduce` should be
/// exactly associative (e.g. `max`) when run-to-run determinism matters.
pub fn map_reduce<T, M, R>(exec: Execution, count: u64, identity: T, map: M, reduce: R) -> T
where
    T: Send + Sync + Clone,
    M: Fn(u64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count)
                .into_par_iter()
                .map(&map)
                .reduce(|| identity.clone(), &reduce)
        }
        _ => (0..count).map(map).fold(identity, reduce),
    }
}

/// Maps every index in `0..count`, keeping results in index order.
pub fn map_collect<T, M>(exec: Execution, count: u64, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(map).collect()
        }
        _ => (0..count).map(map).collect(),
    }
}

/// Caps the global rayon pool. Returns `false` if the pool was already built
/// or parallelism is compiled out.
pub fn init_thread_pool(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let f = |i: u64| ((i * 2654435761) % 1000) as f64;
        let seq = map_reduce(Execution::Sequential, 10_000, f64::MIN, f, f64::max);
        let par = map_reduce(Execution::Parallel, 10_000, f64::MIN, f, f64::max);
        assert_eq!(seq, par);
        let v = map_collect(Execution::Parallel, 100, |i| i * i);
        assert_eq!(v[9], 81);
        assert_eq!(v.len(), 100);
    }
}
