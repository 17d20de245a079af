//! Data-parallel execution with a sequential fallback.
//!
//! Every hot loop in the crate (Dirichlet partial sums, randomized property
//! suites, per-coefficient series construction, catalog fan-out) goes through
//! [`Exec`]. With the `parallel` feature disabled, [`Exec::Parallel`] silently
//! runs sequentially, so results never depend on the feature set.
//!
//! Output order is always the input order. Reductions that combine floating
//! point values are done in fixed-size blocks and summed sequentially, so
//! the result is bit-identical across thread counts.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Block length for deterministic floating point reductions.
pub const REDUCE_BLOCK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `range`, preserving order.
    pub fn map_range<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Runs `f` on every element and reports whether all returned true.
    pub fn all_range<F>(self, range: Range<u64>, f: F) -> bool
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return range.into_par_iter().all(f);
        }
        range.into_iter().all(f)
    }

    /// Block-wise reduction over `range`: `block` folds one contiguous block
    /// and the block results are combined left to right with `combine`.
    pub fn reduce_blocks<T, B, C>(self, range: Range<u64>, block: B, combine: C, init: T) -> T
    where
        T: Send,
        B: Fn(Range<u64>) -> T + Sync + Send,
        C: Fn(T, T) -> T,
    {
        if range.is_empty() {
            return init;
        }
        let start = range.start;
        let len = range.end - range.start;
        let blocks = len.div_ceil(REDUCE_BLOCK);
        let partials = self.map_range(0..blocks, |k| {
            let lo = start + k * REDUCE_BLOCK;
            let hi = (lo + REDUCE_BLOCK).min(range.end);
            block(lo..hi)
        });
        partials.into_iter().fold(init, combine)
    }
}
