//! Deciding whether `K_n` admits an `(L, b)`-coloring.
//!
//! On a complete graph the union-size (amplitude) condition is necessary and
//! sufficient: every vertex subset `S` must see at least `b·|S|` colors in
//! the union of its lists. [`amplitude_ok`] checks it from a [`PIVector`];
//! [`brute_force_color`] is an independent backtracking oracle over actual
//! color subsets, used to validate the fast path on small instances.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::{self, SearchOptions};
use crate::setsys::{canonical_order, ColorSet, ListAssignment, PIVector, SubsetKey};

/// The colors given to each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiColoring {
    pub assigned: Vec<ColorSet>,
}

impl MultiColoring {
    /// Checks the coloring against `l`: subsets of the lists, `b` colors
    /// each, pairwise disjoint.
    pub fn validate(&self, l: &ListAssignment, b: usize) -> Result<()> {
        if self.assigned.len() != l.n() {
            return Err(Error::Malformed(format!(
                "coloring has {} vertices, assignment has {}",
                self.assigned.len(),
                l.n()
            )));
        }
        for (i, set) in self.assigned.iter().enumerate() {
            if !set.is_subset(l.list(i + 1)) {
                return Err(Error::Malformed(format!("vertex {} uses a color outside its list", i + 1)));
            }
            if set.len() != b {
                return Err(Error::Malformed(format!(
                    "vertex {} has {} colors, expected {b}",
                    i + 1,
                    set.len()
                )));
            }
        }
        for (i, j) in (0..self.assigned.len()).tuple_combinations() {
            if !self.assigned[i].is_disjoint(&self.assigned[j]) {
                return Err(Error::Malformed(format!("vertices {} and {} share a color", i + 1, j + 1)));
            }
        }
        Ok(())
    }
}

/// Outcome of a colorability test with its certificate.
///
/// A negative verdict from [`amplitude_ok`] names the violating subset; a
/// positive one from [`brute_force_color`] carries the witness coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoosabilityVerdict {
    pub colorable: bool,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<MultiColoring>,
    #[serde(serialize_with = "ser_subset")]
    pub violating_subset: Option<SubsetKey>,
    pub amplitude: Option<u64>,
}

fn ser_witness<S: serde::Serializer>(w: &Option<MultiColoring>, s: S) -> std::result::Result<S::Ok, S::Error> {
    w.as_ref().map(|m| &m.assigned).serialize(s)
}

fn ser_subset<S: serde::Serializer>(k: &Option<SubsetKey>, s: S) -> std::result::Result<S::Ok, S::Error> {
    k.map(|k| k.vertices()).serialize(s)
}

impl ChoosabilityVerdict {
    fn colorable(witness: Option<MultiColoring>) -> Self {
        ChoosabilityVerdict { colorable: true, witness, violating_subset: None, amplitude: None }
    }

    fn blocked(subset: Option<SubsetKey>, amplitude: Option<u64>) -> Self {
        ChoosabilityVerdict { colorable: false, witness: None, violating_subset: subset, amplitude }
    }
}

/// Amplitude condition: every nonempty `S` needs `|∪_{i∈S} L(i)| ≥ b·|S|`.
///
/// On failure reports the smallest violating subset, ties broken by
/// canonical order.
pub fn amplitude_ok(v: &PIVector, b: u32) -> Result<ChoosabilityVerdict> {
    if b == 0 {
        return Err(Error::Domain("b must be at least 1".into()));
    }
    let amps = v.amplitudes();
    for key in canonical_order(v.n()) {
        let amp = amps[key.mask() as usize];
        if amp < b as u64 * key.len() as u64 {
            return Ok(ChoosabilityVerdict::blocked(Some(key), Some(amp)));
        }
    }
    Ok(ChoosabilityVerdict::colorable(None))
}

/// Size caps for the exhaustive oracle.
#[derive(Clone, Copy, Debug)]
pub struct BruteForceLimits {
    pub max_n: usize,
    pub max_colors: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits { max_n: 6, max_colors: 24 }
    }
}

/// Exhaustive backtracking over per-vertex `b`-subsets.
pub fn brute_force_color(l: &ListAssignment, b: usize) -> Result<ChoosabilityVerdict> {
    brute_force_color_with(l, b, BruteForceLimits::default())
}

pub fn brute_force_color_with(
    l: &ListAssignment,
    b: usize,
    limits: BruteForceLimits,
) -> Result<ChoosabilityVerdict> {
    if b == 0 {
        return Err(Error::Domain("b must be at least 1".into()));
    }
    if l.n() > limits.max_n {
        return Err(Error::GuardRail(format!("{} vertices, limit {}", l.n(), limits.max_n)));
    }
    let universe = l.union().len();
    if universe > limits.max_colors {
        return Err(Error::GuardRail(format!("{universe} colors, limit {}", limits.max_colors)));
    }
    // smallest lists first; stable so equal sizes keep vertex order
    let order: Vec<usize> = (0..l.n()).sorted_by_key(|&i| l.lists()[i].len()).collect();
    let mut chosen = vec![Vec::new(); l.n()];
    let mut used = ColorSet::new();
    if backtrack(l, b, &order, 0, &mut used, &mut chosen) {
        let assigned = chosen.into_iter().map(|c| c.into_iter().collect()).collect();
        Ok(ChoosabilityVerdict::colorable(Some(MultiColoring { assigned })))
    } else {
        Ok(ChoosabilityVerdict::blocked(None, None))
    }
}

fn backtrack(
    l: &ListAssignment,
    b: usize,
    order: &[usize],
    depth: usize,
    used: &mut ColorSet,
    chosen: &mut [Vec<u32>],
) -> bool {
    let Some(&vertex) = order.get(depth) else {
        return true;
    };
    let free: Vec<u32> = l.lists()[vertex].iter().filter(|&c| !used.contains(c)).collect();
    for pick in free.into_iter().combinations(b) {
        let mut next = used.clone();
        for &c in &pick {
            next.insert(c);
        }
        chosen[vertex] = pick;
        if backtrack(l, b, order, depth + 1, &mut next, chosen) {
            return true;
        }
    }
    chosen[vertex].clear();
    false
}

/// Whether every `c`-separating `a`-uniform assignment on `K_n` is
/// `b`-colorable. When not, returns a violating vector on `n` vertices.
pub fn is_abc_choosable(
    n: usize,
    a: u32,
    b: u32,
    c: u32,
    opts: &SearchOptions,
) -> Result<(bool, Option<PIVector>)> {
    if n == 0 || b == 0 || b > a || c > a {
        return Err(Error::Domain(format!(
            "need n ≥ 1, 1 ≤ b ≤ a and c ≤ a (n={n}, a={a}, b={b}, c={c})"
        )));
    }
    for m in 2..=n {
        if let Some(v) = search::find_counterexample(m, a, b, c, opts)? {
            return Ok((false, Some(v.pad(n, a)?)));
        }
    }
    Ok((true, None))
}
