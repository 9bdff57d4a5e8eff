//! Execution mode for the data-parallel inner loops.
//!
//! Every parallel path produces bit-identical results to the sequential one:
//! all arithmetic is exact, so the grouping of partial sums does not matter.
//! Without the `parallel` feature, [`Exec::Parallel`] silently runs
//! sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps over chunks of `items` and folds the per-chunk results with `merge`.
    pub fn map_reduce<T, R, F, M>(self, items: &[T], chunk: usize, f: F, identity: R, merge: M) -> R
    where
        T: Sync,
        R: Send + Clone + Sync,
        F: Fn(&[T]) -> R + Sync + Send,
        M: Fn(R, R) -> R + Sync + Send,
    {
        let chunk = chunk.max(1);
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items
                .par_chunks(chunk)
                .map(&f)
                .reduce(|| identity.clone(), &merge);
        }
        items.chunks(chunk).map(&f).fold(identity, merge)
    }

    /// Index of the first item for which `f` returns `Some`, together with the value.
    pub fn find_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(&f).find_first(|r| r.is_some()).flatten();
        }
        items.iter().find_map(f)
    }
}
