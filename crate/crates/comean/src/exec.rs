//! Execution strategy for the embarrassingly parallel inner loops
//! (leave-one-out sweeps, bootstrap replicates, Monte Carlo replications).
//!
//! Results are always collected in index order, so output is identical
//! regardless of strategy or worker count.

/// How to run an indexed map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Run on the current thread in index order.
    Sequential,
    /// Fan out over the rayon thread pool. Without the `parallel` feature
    /// this falls back to sequential execution.
    #[default]
    Rayon,
}

/// Maps `f` over `0..len`, honoring the strategy; output order is by index.
pub fn map_indexed<R, F>(len: usize, parallelism: Parallelism, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match parallelism {
        Parallelism::Sequential => (0..len).map(f).collect(),
        Parallelism::Rayon => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..len).map(f).collect()
            }
        }
    }
}
