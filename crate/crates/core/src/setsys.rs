//! Proper-intersection algebra for set systems.
//!
//! A list assignment on `n` vertices partitions its color universe into the
//! proper intersections `I(S)`: the colors that belong to the lists indexed
//! by `S` and to no other list. The vector of their cardinalities (a
//! [`PIVector`]) determines every size that matters for coloring a complete
//! graph: list sizes, pairwise intersections and unions of any sub-family.
//!
//! Vertices are numbered from 1. A subset `S` of `[n]` is stored as a
//! bitmask with bit `i - 1` set when vertex `i` belongs to `S`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count accepted by the dense representations.
pub const MAX_N: usize = 16;

/// A finite set of colors kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ColorSet(Vec<u32>);

impl ColorSet {
    pub fn new() -> Self {
        ColorSet(Vec::new())
    }

    /// Rejects duplicated colors instead of silently merging them.
    pub fn try_from_vec(mut colors: Vec<u32>) -> Result<Self> {
        colors.sort_unstable();
        if let Some((x, _)) = colors.iter().tuple_windows().find(|(x, y)| x == y) {
            return Err(Error::Malformed(format!("color {x} listed twice")));
        }
        Ok(ColorSet(colors))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, color: u32) -> bool {
        self.0.binary_search(&color).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn insert(&mut self, color: u32) -> bool {
        match self.0.binary_search(&color) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, color);
                true
            }
        }
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.iter().all(|c| other.contains(c))
    }

    pub fn is_disjoint(&self, other: &ColorSet) -> bool {
        self.iter().all(|c| !other.contains(c))
    }

    pub fn intersection(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.iter().filter(|&c| other.contains(c)).collect())
    }
}

impl FromIterator<u32> for ColorSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let set: BTreeSet<u32> = iter.into_iter().collect();
        ColorSet(set.into_iter().collect())
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let colors = Vec::<u32>::deserialize(d)?;
        ColorSet::try_from_vec(colors).map_err(serde::de::Error::custom)
    }
}

/// A nonempty subset of `[n]`, encoded as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetKey(u32);

impl SubsetKey {
    pub fn new(mask: u32, n: usize) -> Result<Self> {
        check_n(n)?;
        if mask == 0 {
            return Err(Error::InvalidSubset("empty subset".into()));
        }
        if mask >> n != 0 {
            return Err(Error::InvalidSubset(format!(
                "mask {mask:#b} has vertices outside 1..={n}"
            )));
        }
        Ok(SubsetKey(mask))
    }

    /// Builds a key from 1-based vertex labels.
    pub fn from_vertices(vertices: &[usize], n: usize) -> Result<Self> {
        check_n(n)?;
        let mut mask = 0u32;
        for &v in vertices {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let bit = 1u32 << (v - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidSubset(format!("vertex {v} repeated")));
            }
            mask |= bit;
        }
        SubsetKey::new(mask, n)
    }

    pub(crate) const fn from_mask_unchecked(mask: u32) -> Self {
        SubsetKey(mask)
    }

    pub fn full(n: usize) -> Self {
        SubsetKey(full_mask(n))
    }

    pub fn singleton(vertex: usize) -> Self {
        SubsetKey(1 << (vertex - 1))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, vertex: usize) -> bool {
        (1..=32).contains(&vertex) && self.0 & (1 << (vertex - 1)) != 0
    }

    pub fn is_superset_of(self, other: SubsetKey) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn intersects(self, other: SubsetKey) -> bool {
        self.0 & other.0 != 0
    }

    /// Ascending 1-based vertex labels.
    pub fn vertices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }
}

impl fmt::Display for SubsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.vertices().iter().join(","))
    }
}

/// Canonical order: ascending size, then lexicographic on the sorted labels.
pub fn canonical_cmp(a: SubsetKey, b: SubsetKey) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        let diff = a.0 ^ b.0;
        if diff == 0 {
            Ordering::Equal
        } else if a.0 & diff & diff.wrapping_neg() != 0 {
            // `a` owns the smallest element the two sets disagree on.
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

/// Every nonempty subset of `[n]` in canonical order.
pub fn canonical_order(n: usize) -> Vec<SubsetKey> {
    (1..=n)
        .flat_map(|k| {
            (0..n).combinations(k).map(|c| {
                SubsetKey(c.iter().fold(0u32, |m, &b| m | 1 << b))
            })
        })
        .collect()
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Domain(format!("vertex count {n} outside 1..={MAX_N}")));
    }
    Ok(())
}

/// One color list per vertex of `K_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ListAssignmentRecord", into = "ListAssignmentRecord")]
pub struct ListAssignment {
    lists: Vec<ColorSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ListAssignmentRecord {
    n: usize,
    lists: Vec<ColorSet>,
}

impl TryFrom<ListAssignmentRecord> for ListAssignment {
    type Error = Error;

    fn try_from(r: ListAssignmentRecord) -> Result<Self> {
        if r.lists.len() != r.n {
            return Err(Error::Malformed(format!(
                "field `n` is {} but `lists` has {} entries",
                r.n,
                r.lists.len()
            )));
        }
        ListAssignment::new(r.lists)
    }
}

impl From<ListAssignment> for ListAssignmentRecord {
    fn from(l: ListAssignment) -> Self {
        ListAssignmentRecord { n: l.n(), lists: l.lists }
    }
}

impl ListAssignment {
    pub fn new(lists: Vec<ColorSet>) -> Result<Self> {
        check_n(lists.len())?;
        Ok(ListAssignment { lists })
    }

    pub fn from_lists<I, J>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = u32>,
    {
        let lists = lists
            .into_iter()
            .map(|l| ColorSet::try_from_vec(l.into_iter().collect()))
            .collect::<Result<Vec<_>>>()?;
        ListAssignment::new(lists)
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    /// List of 1-based vertex `i`.
    pub fn list(&self, vertex: usize) -> &ColorSet {
        &self.lists[vertex - 1]
    }

    pub fn lists(&self) -> &[ColorSet] {
        &self.lists
    }

    /// `Some(a)` when every list has exactly `a` colors.
    pub fn uniform_size(&self) -> Option<usize> {
        let a = self.lists[0].len();
        self.lists.iter().all(|l| l.len() == a).then_some(a)
    }

    pub fn union(&self) -> ColorSet {
        self.lists.iter().flat_map(|l| l.iter()).collect()
    }

    fn membership(&self, color: u32) -> u32 {
        self.lists
            .iter()
            .enumerate()
            .filter(|(_, l)| l.contains(color))
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

/// Proper intersections of every nonempty subset, in canonical order.
///
/// Subsets whose proper intersection is empty are included with an empty set.
pub fn proper_intersections(l: &ListAssignment) -> Vec<(SubsetKey, ColorSet)> {
    let n = l.n();
    let mut blocks = vec![ColorSet::new(); 1 << n];
    for color in l.union().iter() {
        // union() is sorted, so pushing keeps every block sorted
        blocks[l.membership(color) as usize].0.push(color);
    }
    canonical_order(n)
        .into_iter()
        .map(|k| (k, std::mem::take(&mut blocks[k.mask() as usize])))
        .collect()
}

/// Vector of proper-intersection cardinalities, indexed by subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PIVectorRecord", into = "PIVectorRecord")]
pub struct PIVector {
    n: usize,
    counts: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PIVectorRecord {
    n: usize,
    counts: Vec<PIEntryRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PIEntryRecord {
    subset: Vec<usize>,
    size: u32,
}

impl TryFrom<PIVectorRecord> for PIVector {
    type Error = Error;

    fn try_from(r: PIVectorRecord) -> Result<Self> {
        let mut v = PIVector::zeros(r.n)?;
        for e in r.counts {
            let key = SubsetKey::from_vertices(&e.subset, r.n)?;
            if v.get(key) != 0 {
                return Err(Error::Malformed(format!("subset {key} listed twice")));
            }
            v.set(key, e.size);
        }
        Ok(v)
    }
}

impl From<PIVector> for PIVectorRecord {
    fn from(v: PIVector) -> Self {
        PIVectorRecord {
            n: v.n,
            counts: v
                .nonzero()
                .map(|(k, size)| PIEntryRecord { subset: k.vertices(), size })
                .collect(),
        }
    }
}

impl PIVector {
    pub fn zeros(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(PIVector { n, counts: vec![0; 1 << n] })
    }

    /// Builds a vector from its coordinates listed in canonical order.
    pub fn from_canonical(n: usize, values: &[u32]) -> Result<Self> {
        let mut v = PIVector::zeros(n)?;
        let order = canonical_order(n);
        if values.len() != order.len() {
            return Err(Error::Malformed(format!(
                "expected {} coordinates for n = {n}, got {}",
                order.len(),
                values.len()
            )));
        }
        for (k, &x) in order.iter().zip(values) {
            v.counts[k.mask() as usize] = x;
        }
        Ok(v)
    }

    pub(crate) fn from_dense(n: usize, counts: Vec<u32>) -> Self {
        debug_assert_eq!(counts.len(), 1 << n);
        debug_assert_eq!(counts[0], 0);
        PIVector { n, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, key: SubsetKey) -> u32 {
        self.counts[key.mask() as usize]
    }

    pub fn set(&mut self, key: SubsetKey, value: u32) {
        assert!(key.mask() >> self.n == 0, "subset {key} outside [{}]", self.n);
        self.counts[key.mask() as usize] = value;
    }

    /// Dense storage indexed by mask; entry 0 is always zero.
    pub fn dense(&self) -> &[u32] {
        &self.counts
    }

    /// Coordinates in canonical subset order.
    pub fn canonical(&self) -> Vec<u32> {
        canonical_order(self.n).iter().map(|&k| self.get(k)).collect()
    }

    /// Nonzero coordinates in canonical order.
    pub fn nonzero(&self) -> impl Iterator<Item = (SubsetKey, u32)> + '_ {
        canonical_order(self.n)
            .into_iter()
            .map(|k| (k, self.get(k)))
            .filter(|&(_, x)| x > 0)
    }

    /// Sum of all coordinates, i.e. the size of the color universe.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&x| x as u64).sum()
    }

    fn check_vertex(&self, vertex: usize) -> Result<()> {
        if vertex == 0 || vertex > self.n {
            return Err(Error::VertexOutOfRange { vertex, n: self.n });
        }
        Ok(())
    }

    fn check_key(&self, key: SubsetKey) -> Result<()> {
        if key.mask() >> self.n != 0 {
            return Err(Error::InvalidSubset(format!("{key} is not a subset of [{}]", self.n)));
        }
        Ok(())
    }

    /// `|L(i)|`: sum over the subsets containing `i`.
    pub fn list_size(&self, vertex: usize) -> Result<u64> {
        self.check_vertex(vertex)?;
        Ok(self.sum_supersets(1 << (vertex - 1)))
    }

    /// `|L(i) ∩ L(j)|`: sum over the subsets containing both.
    pub fn pair_intersection(&self, i: usize, j: usize) -> Result<u64> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SameVertex(i));
        }
        Ok(self.sum_supersets(1 << (i - 1) | 1 << (j - 1)))
    }

    /// `|∩_{i∈S} L(i)|`: sum over the supersets of `S`.
    pub fn intersection_size(&self, key: SubsetKey) -> Result<u64> {
        self.check_key(key)?;
        Ok(self.sum_supersets(key.mask()))
    }

    /// `|∪_{i∈S} L(i)|`: sum over the subsets meeting `S`.
    pub fn amplitude(&self, key: SubsetKey) -> Result<u64> {
        self.check_key(key)?;
        Ok(self
            .counts
            .iter()
            .enumerate()
            .filter(|(m, _)| *m as u32 & key.mask() != 0)
            .map(|(_, &x)| x as u64)
            .sum())
    }

    /// Amplitudes of every subset at once, indexed by mask.
    ///
    /// Uses a subset-sum (zeta) transform: the amplitude of `S` is the total
    /// minus the mass carried by subsets of the complement of `S`.
    pub fn amplitudes(&self) -> Vec<u64> {
        let size = 1usize << self.n;
        let mut below: Vec<u64> = self.counts.iter().map(|&x| x as u64).collect();
        for bit in 0..self.n {
            for m in 0..size {
                if m >> bit & 1 == 1 {
                    below[m] += below[m ^ 1 << bit];
                }
            }
        }
        let total = below[size - 1];
        let full = size - 1;
        (0..size).map(|m| total - below[full ^ m]).collect()
    }

    fn sum_supersets(&self, mask: u32) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(m, _)| *m as u32 & mask == mask)
            .map(|(_, &x)| x as u64)
            .sum()
    }

    /// Largest `|L(i) ∩ L(j)|` over all pairs (0 when `n = 1`).
    pub fn max_pair_intersection(&self) -> u64 {
        (1..=self.n)
            .tuple_combinations()
            .map(|(i, j)| self.sum_supersets(1 << (i - 1) | 1 << (j - 1)))
            .max()
            .unwrap_or(0)
    }

    /// `Some(a)` when every vertex has a list of size `a`.
    pub fn uniform_size(&self) -> Option<u64> {
        let a = self.sum_supersets(1);
        (2..=self.n).all(|i| self.sum_supersets(1 << (i - 1)) == a).then_some(a)
    }

    /// Extends the vector to `n` vertices by giving every new vertex a fresh
    /// list of `list_size` colors shared with nobody.
    pub fn pad(&self, n: usize, list_size: u32) -> Result<PIVector> {
        if n < self.n {
            return Err(Error::Domain(format!("cannot pad {} vertices down to {n}", self.n)));
        }
        let mut out = PIVector::zeros(n)?;
        out.counts[..self.counts.len()].copy_from_slice(&self.counts);
        for v in self.n + 1..=n {
            out.set(SubsetKey::singleton(v), list_size);
        }
        Ok(out)
    }
}

/// The proper-intersection vector of an assignment.
pub fn pi_vector(l: &ListAssignment) -> PIVector {
    let mut v = PIVector::zeros(l.n()).expect("assignment has a valid vertex count");
    for color in l.union().iter() {
        v.counts[l.membership(color) as usize] += 1;
    }
    v
}

/// Builds an assignment with the given vector, allocating each block as a
/// run of fresh consecutive colors starting at `color_base`, in canonical
/// subset order.
pub fn realize(v: &PIVector, color_base: u32) -> Result<ListAssignment> {
    let mut lists = vec![Vec::new(); v.n];
    let mut next = color_base as u64;
    for (key, size) in v.nonzero() {
        if next + size as u64 > u32::MAX as u64 + 1 {
            return Err(Error::Domain("color range overflows u32".into()));
        }
        for color in next..next + size as u64 {
            for vertex in key.vertices() {
                lists[vertex - 1].push(color as u32);
            }
        }
        next += size as u64;
    }
    Ok(ListAssignment { lists: lists.into_iter().map(ColorSet).collect() })
}

pub fn list_size(v: &PIVector, vertex: usize) -> Result<u64> {
    v.list_size(vertex)
}

pub fn pair_intersection(v: &PIVector, i: usize, j: usize) -> Result<u64> {
    v.pair_intersection(i, j)
}

pub fn amplitude(v: &PIVector, key: SubsetKey) -> Result<u64> {
    v.amplitude(key)
}

/// Number of distinct assignments over a palette of `palette` colors that
/// share the vector `v`: `palette! / ((palette - Σ)! · Π counts!)`.
///
/// `None` for the palette uses the sum of the list sizes (`n·a` for an
/// `a`-uniform vector).
pub fn assignment_count(v: &PIVector, palette: Option<u64>) -> Result<BigUint> {
    let needed = v.total();
    let palette = match palette {
        Some(p) => p,
        None => (1..=v.n).map(|i| v.sum_supersets(1 << (i - 1))).sum(),
    };
    if palette < needed {
        return Err(Error::PaletteTooSmall { palette, needed });
    }
    // product of binomials C(remaining, x_S), taken in canonical order
    let mut count = BigUint::one();
    let mut remaining = palette;
    for (_, x) in v.nonzero() {
        count *= binomial(remaining, x as u64);
        remaining -= x as u64;
    }
    Ok(count)
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact binomial coefficient in machine words; panics on overflow.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| {
        let num = acc as u128 * (n - i) as u128 / (i + 1) as u128;
        u64::try_from(num).expect("binomial overflows u64")
    })
}
