//! The layer-by-layer greedy ColorSym and balanced partitions of subset
//! multisets under the cyclic shift.

use serde::Serialize;

use crate::choosability::MultiColoring;
use crate::error::{Error, Result};
use crate::setsys::{canonical_order, proper_intersections, ColorSet, ListAssignment, SubsetKey, MAX_N};

/// Orbits of the `i`-subsets of `[n]` under `x ↦ x+1 (mod n)`. Each orbit
/// starts at its canonically least member and follows the shift; orbits are
/// ordered by that member.
pub fn orbit_decompose(i: usize, n: usize) -> Result<Vec<Vec<SubsetKey>>> {
    if n == 0 || n > MAX_N || i == 0 || i > n {
        return Err(Error::Domain(format!("need 1 ≤ i ≤ n ≤ {MAX_N} (i={i}, n={n})")));
    }
    let mut seen = vec![false; 1 << n];
    let mut orbits = Vec::new();
    for key in canonical_order(n).into_iter().filter(|k| k.len() == i) {
        if seen[key.mask() as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = key;
        while !seen[cur.mask() as usize] {
            seen[cur.mask() as usize] = true;
            orbit.push(cur);
            cur = shift(cur, n);
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

fn shift(key: SubsetKey, n: usize) -> SubsetKey {
    let m = key.mask();
    let rotated = ((m << 1) | (m >> (n - 1))) & ((1u32 << n) - 1);
    SubsetKey::from_mask_unchecked(rotated)
}

/// `classes[j-1]` holds the subsets labelled `j`; every one contains `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedPartition {
    #[serde(serialize_with = "ser_classes")]
    pub classes: Vec<Vec<SubsetKey>>,
}

fn ser_classes<S: serde::Serializer>(c: &[Vec<SubsetKey>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<Vec<usize>>> = c.iter().map(|cl| cl.iter().map(|k| k.vertices()).collect()).collect();
    v.serialize(s)
}

impl BalancedPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn is_balanced(&self) -> bool {
        let sizes = self.sizes();
        let spread = sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0);
        spread <= 1 && self.classes.iter().enumerate().all(|(j, cl)| cl.iter().all(|k| k.contains(j + 1)))
    }
}

/// Balanced partition of the multiset holding every `i`-subset `w[i-1]`
/// times. Orbits are colored one at a time by consecutive labels, starting
/// right after the last class that is ahead of its successor.
pub fn balanced_partition(w: &[u32]) -> Result<BalancedPartition> {
    let n = w.len();
    if n == 0 || n > MAX_N {
        return Err(Error::Domain(format!("weight vector of length {n}")));
    }
    let mut classes: Vec<Vec<SubsetKey>> = vec![Vec::new(); n];
    if n <= 2 {
        for key in canonical_order(n) {
            for _ in 0..w[key.len() - 1] {
                let j = key.vertices().into_iter().min_by_key(|&v| (classes[v - 1].len(), v)).expect("nonempty");
                classes[j - 1].push(key);
            }
        }
        return Ok(BalancedPartition { classes });
    }
    for i in 1..=n {
        let orbits = orbit_decompose(i, n)?;
        for _ in 0..w[i - 1] {
            for orbit in &orbits {
                // labels are 0-based here; j-1 of 0 is n-1
                let start = (0..n).find(|&j| classes[j].len() < classes[(j + n - 1) % n].len()).unwrap_or(0);
                let pos = orbit.iter().position(|k| k.contains(start + 1)).expect("orbit covers [n]");
                for k in 0..orbit.len() {
                    let label = (start + k) % n;
                    let elem = orbit[(pos + k) % orbit.len()];
                    debug_assert!(elem.contains(label + 1));
                    classes[label].push(elem);
                }
            }
        }
    }
    Ok(BalancedPartition { classes })
}

/// How a layer's proper intersections are handed out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DrainOrder {
    /// One color per set per pass, sets in canonical order, until the
    /// layer is exhausted.
    RoundRobin,
    /// Each set is emptied before moving to the next.
    Exhaust,
    /// One color per set per pass, sets visited orbit by orbit under the
    /// cyclic shift as in [`orbit_decompose`].
    #[default]
    Orbit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ColorSymOutcome {
    Colored(MultiColoring),
    Failed { failed: bool, w: Vec<u32> },
}

impl ColorSymOutcome {
    pub fn coloring(&self) -> Option<&MultiColoring> {
        match self {
            ColorSymOutcome::Colored(m) => Some(m),
            ColorSymOutcome::Failed { .. } => None,
        }
    }
}

pub fn colorsym(l: &ListAssignment, b: usize) -> Result<ColorSymOutcome> {
    colorsym_with(l, b, DrainOrder::default())
}

/// Greedy by layers: singletons go to their owner, then each color of a
/// proper intersection `I_p(S)` goes to the member of `S` with the fewest
/// colors so far (smallest index on ties).
pub fn colorsym_with(l: &ListAssignment, b: usize, order: DrainOrder) -> Result<ColorSymOutcome> {
    if b == 0 {
        return Err(Error::Domain("b must be at least 1".into()));
    }
    let n = l.n();
    let blocks = proper_intersections(l);
    let mut got: Vec<Vec<u32>> = vec![Vec::new(); n];
    let done = |got: &[Vec<u32>]| got.iter().all(|c| c.len() >= b);
    'layers: for i in 1..=n {
        if done(&got) {
            break;
        }
        let mut keys: Vec<SubsetKey> = blocks.iter().map(|(k, _)| *k).filter(|k| k.len() == i).collect();
        if order == DrainOrder::Orbit {
            keys = orbit_decompose(i, n)?.concat();
        }
        let mut layer: Vec<(Vec<usize>, std::vec::IntoIter<u32>)> = keys
            .iter()
            .map(|k| {
                let set = &blocks.iter().find(|(b, _)| b == k).expect("every subset has a block").1;
                (k.vertices(), set.as_slice().to_vec().into_iter())
            })
            .collect();
        let give = |members: &[usize], color: u32, got: &mut Vec<Vec<u32>>| {
            let j = *members.iter().min_by_key(|&&v| (got[v - 1].len(), v)).expect("nonempty subset");
            got[j - 1].push(color);
        };
        match order {
            DrainOrder::Exhaust => {
                for (members, colors) in &mut layer {
                    for color in colors {
                        give(members, color, &mut got);
                        if done(&got) {
                            break 'layers;
                        }
                    }
                }
            }
            DrainOrder::RoundRobin | DrainOrder::Orbit => loop {
                let mut moved = false;
                for (members, colors) in &mut layer {
                    if let Some(color) = colors.next() {
                        moved = true;
                        give(members, color, &mut got);
                        if done(&got) {
                            break 'layers;
                        }
                    }
                }
                if !moved {
                    break;
                }
            },
        }
    }
    if done(&got) {
        let assigned = got.into_iter().map(|mut c| {
            c.sort_unstable();
            c.truncate(b);
            c.into_iter().collect::<ColorSet>()
        });
        Ok(ColorSymOutcome::Colored(MultiColoring { assigned: assigned.collect() }))
    } else {
        Ok(ColorSymOutcome::Failed { failed: true, w: got.iter().map(|c| c.len() as u32).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{expand_symmetric, SymVector};
    use crate::setsys::realize;

    #[test]
    fn orbit_examples() {
        let o = orbit_decompose(1, 4).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].len(), 4);
        let sizes: Vec<usize> = orbit_decompose(2, 4).unwrap().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 2]);
        assert_eq!(orbit_decompose(5, 5).unwrap(), vec![vec![SubsetKey::full(5)]]);
        assert!(orbit_decompose(0, 3).is_err());
        assert!(orbit_decompose(4, 3).is_err());
    }

    #[test]
    fn orbits_partition_layers() {
        for n in 1..=8 {
            for i in 1..=n {
                let orbits = orbit_decompose(i, n).unwrap();
                let mut all: Vec<u32> = orbits.iter().flatten().map(|k| k.mask()).collect();
                assert!(orbits.iter().all(|o| n % o.len() == 0));
                all.sort_unstable();
                all.dedup();
                assert_eq!(all.len() as u64, crate::setsys::binom(n as u64, i as u64));
            }
        }
    }

    #[test]
    fn partition_examples() {
        let p = balanced_partition(&[0, 1, 0]).unwrap();
        assert_eq!(p.sizes(), vec![1, 1, 1]);
        assert!(p.is_balanced());
        let p = balanced_partition(&[0, 0, 1]).unwrap();
        assert_eq!(p.sizes(), vec![1, 0, 0]);
        let p = balanced_partition(&[1, 0, 0, 0]).unwrap();
        for j in 0..4 {
            assert_eq!(p.classes[j], vec![SubsetKey::singleton(j + 1)]);
        }
        assert!(balanced_partition(&[2, 1]).unwrap().is_balanced());
    }

    #[test]
    fn colorsym_examples() {
        let l = realize(&expand_symmetric(&SymVector::new(vec![0, 1, 0]).unwrap()), 1).unwrap();
        let out = colorsym(&l, 1).unwrap();
        out.coloring().unwrap().validate(&l, 1).unwrap();

        let l = ListAssignment::from_lists([vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        colorsym(&l, 2).unwrap().coloring().unwrap().validate(&l, 2).unwrap();

        let ex1 = crate::setsys::tests::example1();
        assert!(matches!(colorsym(&ex1, 3).unwrap(), ColorSymOutcome::Failed { .. }));
        assert!(colorsym(&ex1, 0).is_err());
    }

    #[test]
    fn exhaust_order_can_strand_a_vertex() {
        // x = (0,2,0,0), b = 3: total 12 = nb, but emptying {1,2} first feeds vertex 1 too much
        let l = realize(&expand_symmetric(&SymVector::new(vec![0, 2, 0, 0]).unwrap()), 1).unwrap();
        match colorsym_with(&l, 3, DrainOrder::Exhaust).unwrap() {
            ColorSymOutcome::Failed { w, .. } => assert_eq!(w, vec![2, 3, 4, 3]),
            other => panic!("{other:?}"),
        }
        colorsym_with(&l, 3, DrainOrder::RoundRobin).unwrap().coloring().unwrap().validate(&l, 3).unwrap();
        colorsym(&l, 3).unwrap().coloring().unwrap().validate(&l, 3).unwrap();
    }

    #[test]
    fn canonical_order_can_strand_a_vertex() {
        // one color per pair on K_5: canonical order leaves vertex 1 with a single color
        let l = realize(&expand_symmetric(&SymVector::new(vec![0, 1, 0, 0, 0]).unwrap()), 1).unwrap();
        for order in [DrainOrder::Exhaust, DrainOrder::RoundRobin] {
            match colorsym_with(&l, 2, order).unwrap() {
                ColorSymOutcome::Failed { w, .. } => assert_eq!(w, vec![1, 2, 3, 2, 2]),
                other => panic!("{other:?}"),
            }
        }
        colorsym(&l, 2).unwrap().coloring().unwrap().validate(&l, 2).unwrap();
    }

    #[test]
    fn failure_json_shape() {
        let ex1 = crate::setsys::tests::example1();
        let text = serde_json::to_string(&colorsym(&ex1, 3).unwrap()).unwrap();
        assert!(text.starts_with(r#"{"failed":true,"w":["#), "{text}");
    }
}
