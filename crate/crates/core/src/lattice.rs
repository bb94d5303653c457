//! Enumeration of the nonnegative vectors whose per-vertex sums all equal `a`.
//!
//! Every such vector is the proper-intersection vector of exactly one class
//! of `a`-list assignments, so this is also the enumeration of `a`-uniform
//! assignments up to color renaming. Non-singleton coordinates are chosen by
//! depth-first search; the singletons are then forced by the residuals.

use crate::exec::Exec;
use crate::setsys::{canonical_order, PIVector, SubsetKey};

#[derive(Clone, Debug)]
pub struct UniformLattice {
    n: usize,
    a: u32,
    max_pair: Option<u32>,
    vars: Vec<SubsetKey>,
}

impl UniformLattice {
    pub fn new(n: usize, a: u32) -> Self {
        let vars = canonical_order(n).into_iter().filter(|k| k.len() >= 2).collect();
        UniformLattice { n, a, max_pair: None, vars }
    }

    /// Restricts to vectors whose pair intersections are all at most `c`.
    pub fn with_max_pair(mut self, c: u32) -> Self {
        self.max_pair = Some(c);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// Work units: the admissible values of the first non-singleton
    /// coordinate. A lattice with no such coordinate has one unit.
    pub fn partitions(&self) -> Vec<u32> {
        if self.vars.is_empty() {
            return vec![0];
        }
        let hi = self.max_pair.map_or(self.a, |c| c.min(self.a));
        (0..=hi).collect()
    }

    /// Visits the vectors whose first non-singleton coordinate is `first`.
    pub fn for_each_in<F: FnMut(&PIVector)>(&self, first: u32, mut f: F) {
        let mut walk = Walk::new(self);
        if self.vars.is_empty() {
            walk.leaf(&mut f);
            return;
        }
        if walk.try_assign(0, first) {
            walk.dfs(1, &mut f);
        }
    }

    pub fn for_each<F: FnMut(&PIVector)>(&self, mut f: F) {
        for p in self.partitions() {
            self.for_each_in(p, &mut f);
        }
    }

    /// Folds every vector, one accumulator per work unit, merged in unit order.
    pub fn fold<R, I, G, M>(&self, exec: Exec, init: I, step: G, merge: M) -> R
    where
        R: Send,
        I: Fn() -> R + Sync + Send,
        G: Fn(R, &PIVector) -> R + Sync + Send,
        M: Fn(R, R) -> R,
    {
        let parts = self.partitions();
        let partials = exec.map(&parts, |&p| {
            let mut acc = Some(init());
            self.for_each_in(p, |v| acc = Some(step(acc.take().unwrap(), v)));
            acc.unwrap()
        });
        partials.into_iter().reduce(merge).unwrap_or_else(init)
    }

    pub fn count(&self, exec: Exec) -> u64 {
        self.fold(exec, || 0u64, |acc, _| acc + 1, |x, y| x + y)
    }
}

struct Walk<'a> {
    lat: &'a UniformLattice,
    residual: Vec<u32>,
    pair_room: Vec<u32>,
    v: PIVector,
}

impl<'a> Walk<'a> {
    fn new(lat: &'a UniformLattice) -> Self {
        let n = lat.n;
        let room = lat.max_pair.unwrap_or(u32::MAX);
        Walk {
            lat,
            residual: vec![lat.a; n],
            pair_room: vec![room; n * n],
            v: PIVector::zeros(n).expect("lattice has a valid vertex count"),
        }
    }

    fn upper(&self, key: SubsetKey) -> u32 {
        let vs = members(key);
        let mut hi = vs.iter().map(|&i| self.residual[i]).min().unwrap_or(0);
        for (x, &i) in vs.iter().enumerate() {
            for &j in &vs[x + 1..] {
                hi = hi.min(self.pair_room[i * self.lat.n + j]);
            }
        }
        hi
    }

    fn apply(&mut self, key: SubsetKey, value: u32, sign: bool) {
        let n = self.lat.n;
        let vs = members(key);
        for (x, &i) in vs.iter().enumerate() {
            if sign {
                self.residual[i] -= value;
            } else {
                self.residual[i] += value;
            }
            for &j in &vs[x + 1..] {
                let room = &mut self.pair_room[i * n + j];
                if sign {
                    *room -= value;
                } else {
                    *room += value;
                }
            }
        }
        self.v.set(key, if sign { value } else { 0 });
    }

    fn try_assign(&mut self, idx: usize, value: u32) -> bool {
        let key = self.lat.vars[idx];
        if value > self.upper(key) {
            return false;
        }
        self.apply(key, value, true);
        true
    }

    fn dfs<F: FnMut(&PIVector)>(&mut self, idx: usize, f: &mut F) {
        if idx == self.lat.vars.len() {
            self.leaf(f);
            return;
        }
        let key = self.lat.vars[idx];
        let hi = self.upper(key);
        for value in 0..=hi {
            self.apply(key, value, true);
            self.dfs(idx + 1, f);
            self.apply(key, value, false);
        }
    }

    fn leaf<F: FnMut(&PIVector)>(&mut self, f: &mut F) {
        for i in 0..self.lat.n {
            self.v.set(SubsetKey::singleton(i + 1), self.residual[i]);
        }
        f(&self.v);
    }
}

fn members(key: SubsetKey) -> Vec<usize> {
    key.vertices().into_iter().map(|v| v - 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent count: every coordinate in 0..=a, keep the uniform ones.
    fn brute_count(n: usize, a: u32, max_pair: Option<u32>) -> u64 {
        let order = canonical_order(n);
        let mut count = 0;
        let mut xs = vec![0u32; order.len()];
        loop {
            let v = PIVector::from_canonical(n, &xs).unwrap();
            if v.uniform_size() == Some(a as u64)
                && max_pair.is_none_or(|c| v.max_pair_intersection() <= c as u64)
            {
                count += 1;
            }
            let mut i = 0;
            while i < xs.len() && xs[i] == a {
                xs[i] = 0;
                i += 1;
            }
            if i == xs.len() {
                return count;
            }
            xs[i] += 1;
        }
    }

    #[test]
    fn matches_brute_force_on_tiny_grids() {
        for (n, a) in [(1, 0), (1, 3), (2, 0), (2, 4), (3, 0), (3, 1), (3, 2)] {
            let lat = UniformLattice::new(n, a);
            assert_eq!(lat.count(Exec::Sequential), brute_count(n, a, None), "n={n} a={a}");
        }
        let lat = UniformLattice::new(3, 2).with_max_pair(1);
        assert_eq!(lat.count(Exec::Sequential), brute_count(3, 2, Some(1)));
    }

    #[test]
    fn vectors_are_uniform_and_distinct() {
        let lat = UniformLattice::new(4, 2);
        let mut seen = HashSet::new();
        lat.for_each(|v| {
            assert_eq!(v.uniform_size(), Some(2));
            assert!(seen.insert(v.clone()));
        });
        assert_eq!(seen.len() as u64, lat.count(Exec::Parallel));
    }

    #[test]
    fn two_vertices_give_a_plus_one() {
        for a in 0..=10 {
            assert_eq!(UniformLattice::new(2, a).count(Exec::default()), a as u64 + 1);
        }
    }
}
