//! Execution strategy for the data-parallel loops (grid sweeps, lattice
//! enumeration, branch-and-bound work units).
//!
//! With the `parallel` feature the `Parallel` strategy runs on the rayon
//! global pool; without it every strategy degrades to a sequential loop.
//! Results are always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// First `Some` in input order, not in completion order.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().find_map_first(f);
        }
        items.iter().find_map(f)
    }

    pub fn sum<T, F>(self, items: &[T], f: F) -> u64
    where
        T: Sync,
        F: Fn(&T) -> u64 + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).sum();
        }
        items.iter().map(f).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = Exec::Sequential.map(&xs, |x| x * x);
        let par = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(seq, par);
        let pick = |x: &u64| (x % 7 == 3 && *x > 100).then_some(*x);
        assert_eq!(Exec::Sequential.find_map_first(&xs, pick), Some(101));
        assert_eq!(Exec::Parallel.find_map_first(&xs, pick), Some(101));
        assert_eq!(Exec::Parallel.sum(&xs, |x| *x), 499_500);
    }
}
