//! Property tests across modules.

use std::collections::HashMap;

use listsep::choosability::{amplitude_ok, brute_force_color, is_abc_choosable};
use listsep::colorsym::{balanced_partition, colorsym};
use listsep::constructions::{expand_symmetric, SymVector};
use listsep::counting::count_classes;
use listsep::kernel::{basis_ker_a, basis_ker_ac, extreme_points, vec_a, vec_c, Rational, RationalVector};
use listsep::lattice::UniformLattice;
use listsep::search::{find_counterexample, sep, SearchOptions, SepQuery};
use listsep::setsys::{binom, canonical_order, pi_vector, realize};
use listsep::{Exec, ListAssignment, SubsetKey};
use num_bigint::BigInt;
use proptest::prelude::*;

fn assignment(max_n: usize) -> impl Strategy<Value = ListAssignment> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::btree_set(1u32..=8, 0..=5), n)
            .prop_map(|lists| ListAssignment::from_lists(lists.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap())
    })
}

fn sym_vector(max_n: usize, max_x: u32) -> impl Strategy<Value = SymVector> {
    (1..=max_n).prop_flat_map(move |n| proptest::collection::vec(0..=max_x, n).prop_map(|x| SymVector::new(x).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn amplitude_condition_matches_oracle(l in assignment(4), b in 1u32..=3) {
        let v = pi_vector(&l);
        let fast = amplitude_ok(&v, b).unwrap();
        let slow = brute_force_color(&l, b as usize).unwrap();
        prop_assert_eq!(fast.colorable, slow.colorable);
        if let Some(w) = &slow.witness {
            prop_assert!(w.validate(&l, b as usize).is_ok());
        }
        if let Some(s) = fast.violating_subset {
            let amp = v.amplitude(s).unwrap();
            prop_assert!(amp < b as u64 * s.len() as u64);
            prop_assert_eq!(fast.amplitude, Some(amp));
            // nothing earlier in canonical order violates
            for k in canonical_order(v.n()).into_iter().take_while(|&k| k != s) {
                prop_assert!(v.amplitude(k).unwrap() >= b as u64 * k.len() as u64);
            }
        }
    }

    #[test]
    fn symmetric_expansion_identities(x in sym_vector(8, 4)) {
        let v = expand_symmetric(&x);
        let n = x.n;
        prop_assert_eq!(v.total(), x.amplitude());
        for i in 1..=n {
            prop_assert_eq!(v.list_size(i).unwrap(), x.list_size());
        }
        if n >= 2 {
            prop_assert_eq!(v.pair_intersection(1, n).unwrap(), x.pair_intersection());
            prop_assert_eq!(v.max_pair_intersection(), x.pair_intersection());
        }
        let mass: u64 = (1..=n).map(|i| binom(n as u64, i as u64) * x.x[i - 1] as u64).sum();
        prop_assert_eq!(mass, x.amplitude());
    }

    #[test]
    fn colorsym_colors_symmetric_inputs(x in sym_vector(5, 3), b in 1usize..=4) {
        prop_assume!(x.amplitude() >= (x.n * b) as u64);
        let l = realize(&expand_symmetric(&x), 1).unwrap();
        let out = colorsym(&l, b).unwrap();
        let m = out.coloring().expect("symmetric input with enough mass");
        prop_assert!(m.validate(&l, b).is_ok());
    }

    #[test]
    fn colorsym_never_returns_an_invalid_coloring(l in assignment(4), b in 1usize..=3) {
        if let Some(m) = colorsym(&l, b).unwrap().coloring() {
            prop_assert!(m.validate(&l, b).is_ok());
        }
    }

    #[test]
    fn kernel_combinations_stay_in_kernel(n in 4usize..=9, coeffs in proptest::collection::vec(-5i64..=5, 9)) {
        let (va, vc) = (vec_a(n).unwrap(), vec_c(n).unwrap());
        let mut sum_a = RationalVector::zeros(n);
        for (v, &k) in basis_ker_a(n).unwrap().iter().zip(&coeffs) {
            sum_a = sum_a.add(&v.entries.scale(&Rational::from_integer(BigInt::from(k))));
        }
        prop_assert_eq!(va.dot(&sum_a), Rational::from_integer(BigInt::from(0)));
        let mut sum_ac = RationalVector::zeros(n);
        for (v, &k) in basis_ker_ac(n).unwrap().iter().zip(&coeffs) {
            sum_ac = sum_ac.add(&v.entries.scale(&Rational::from_integer(BigInt::from(k))));
        }
        prop_assert_eq!(va.dot(&sum_ac), Rational::from_integer(BigInt::from(0)));
        prop_assert_eq!(vc.dot(&sum_ac), Rational::from_integer(BigInt::from(0)));
    }

    #[test]
    fn extreme_points_are_realizable(n in 3usize..=7, a in 0u64..=20, c in 0u64..=20) {
        prop_assume!(c <= a);
        let p = extreme_points(n, a, c).unwrap();
        for x in [p.x1, p.x2].into_iter().flatten() {
            let s = x.to_sym().expect("integer nonnegative");
            let v = expand_symmetric(&s);
            prop_assert_eq!(v.list_size(1).unwrap(), a);
            prop_assert_eq!(v.pair_intersection(1, 2).unwrap(), c);
        }
    }

    #[test]
    fn balanced_partitions(w in (1usize..=6).prop_flat_map(|n| proptest::collection::vec(0u32..=3, n))) {
        let n = w.len();
        let mass: u64 = (1..=n).map(|i| binom(n as u64, i as u64) * w[i - 1] as u64).sum();
        prop_assume!(mass <= 200);
        let p = balanced_partition(&w).unwrap();
        prop_assert!(p.is_balanced(), "{:?}", p.sizes());
        let mut seen: HashMap<SubsetKey, u32> = HashMap::new();
        for cl in &p.classes {
            for &k in cl {
                *seen.entry(k).or_default() += 1;
            }
        }
        for key in canonical_order(n) {
            prop_assert_eq!(seen.get(&key).copied().unwrap_or(0), w[key.len() - 1]);
        }
    }
}

#[test]
fn counterexamples_are_sound() {
    let opts = SearchOptions::default();
    for n in 2..=4usize {
        for a in 1..=6u32 {
            for b in 1..=a {
                for c in 0..=a {
                    if let Some(v) = find_counterexample(n, a, b, c, &opts).unwrap() {
                        assert_eq!(v.uniform_size(), Some(a as u64));
                        assert!(v.max_pair_intersection() <= c as u64);
                        assert!(!amplitude_ok(&v, b).unwrap().colorable);
                        assert!(v.total() < n as u64 * b as u64);
                    }
                }
            }
        }
    }
}

#[test]
fn choosability_is_monotone() {
    let opts = SearchOptions::default();
    for n in 2..=4usize {
        for a in 1..=5u32 {
            for b in 1..=a {
                let ok: Vec<bool> = (0..=a).map(|c| is_abc_choosable(n, a, b, c, &opts).unwrap().0).collect();
                for c in 1..=a as usize {
                    assert!(!ok[c] || ok[c - 1], "({n},{a},{b},{c})");
                    if ok[c] && n > 2 {
                        assert!(is_abc_choosable(n - 1, a, b, c as u32, &opts).unwrap().0);
                    }
                }
            }
        }
    }
}

#[test]
fn sep_grid_monotonicity_and_increments() {
    let opts = SearchOptions::default();
    let mut s = HashMap::new();
    for n in 2..=4usize {
        for b in 1..=4u32 {
            for a in b..=8u32 {
                s.insert((n, a, b), sep(SepQuery::new(n, a, b).unwrap(), &opts).unwrap().value);
            }
        }
    }
    for (&(n, a, b), &v) in &s {
        if let Some(&next) = s.get(&(n, a + 1, b)) {
            assert!(next >= v, "sep not increasing in a at ({n},{a},{b})");
            if a < (n as u32 * b).min(8) {
                assert!(next <= v + 2, "increment above 2 at ({n},{a},{b})");
            }
        }
        if let Some(&bigger) = s.get(&(n + 1, a, b)) {
            assert!(bigger <= v, "sep not decreasing in n at ({n},{a},{b})");
        }
    }
}

#[test]
fn parallel_search_matches_sequential() {
    let par = SearchOptions { exec: Exec::Parallel, ..SearchOptions::default() };
    let seq = SearchOptions::default().sequential();
    for (n, a, b) in [(4, 5, 2), (4, 7, 3), (5, 4, 2), (5, 6, 3)] {
        let q = SepQuery::new(n, a, b).unwrap();
        assert_eq!(sep(q, &par).unwrap(), sep(q, &seq).unwrap());
    }
}

#[test]
fn class_counts_match_lattice() {
    for n in 1..=4usize {
        for a in 0..=4u32 {
            let c = count_classes(n, a).unwrap();
            let lattice = UniformLattice::new(n, a).count(Exec::Sequential);
            assert_eq!(c.total, lattice.into(), "n={n}, a={a}");
        }
    }
}

#[test]
fn extreme_point_matches_high_family() {
    use listsep::constructions::counterexample_high;
    // c = a: all mass on the full set
    for (n, a, b) in [(4usize, 7u32, 2u32), (3, 5, 2), (5, 9, 2)] {
        let x2 = extreme_points(n, a as u64, a as u64).unwrap().x2.unwrap();
        let v = expand_symmetric(&x2.to_sym().unwrap());
        assert_eq!(v, counterexample_high(n, a, b).unwrap(), "({n},{a},{b})");
    }
}
