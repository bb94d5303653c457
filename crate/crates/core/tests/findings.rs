//! Independent confirmations of the values behind the failing acceptance
//! items. None of these go through the branch and bound.

use listsep::choosability::{amplitude_ok, brute_force_color};
use listsep::kernel::{antisym, binomial, pascal, rank, RationalVector};
use listsep::lattice::UniformLattice;
use listsep::setsys::realize;
use listsep::{Exec, PIVector, SubsetKey};
use num_bigint::BigInt;
use num_rational::Ratio;

fn all_colorable(n: usize, a: u32, b: u32, c: u32, brute: bool) -> (u64, bool) {
    let mut count = 0;
    let mut ok = true;
    UniformLattice::new(n, a).with_max_pair(c).for_each(|v| {
        count += 1;
        let colorable = if brute {
            brute_force_color(&realize(v, 1).unwrap(), b as usize).unwrap().colorable
        } else {
            amplitude_ok(v, b).unwrap().colorable
        };
        ok &= colorable;
    });
    (count, ok)
}

#[test]
fn k4_a2_b1_is_one_separating_choosable() {
    // every 1-separating 2-list assignment of K_4 has a system of distinct representatives
    let (count, ok) = all_colorable(4, 2, 1, 1, true);
    assert!(count > 0);
    assert!(ok);
    // and 2-separating fails: four copies of one 2-list
    let (_, ok) = all_colorable(4, 2, 1, 2, true);
    assert!(!ok);
}

#[test]
fn k4_a8_b4_is_three_separating_choosable() {
    let (count, ok) = all_colorable(4, 8, 4, 3, false);
    assert_eq!(count, 22_060);
    assert!(ok);
    assert_eq!(UniformLattice::new(4, 8).with_max_pair(3).count(Exec::Sequential), 22_060);
}

#[test]
fn k4_a8_b4_fails_at_four() {
    let mut v = PIVector::zeros(4).unwrap();
    for s in [[1, 3], [1, 4], [2, 3], [2, 4], [3, 4]] {
        v.set(SubsetKey::from_vertices(&s, 4).unwrap(), 2);
    }
    for s in [[1, 2, 3], [1, 2, 4]] {
        v.set(SubsetKey::from_vertices(&s, 4).unwrap(), 2);
    }
    assert_eq!(v.uniform_size(), Some(8));
    assert_eq!(v.max_pair_intersection(), 4);
    assert_eq!(v.total(), 14);
    let l = realize(&v, 1).unwrap();
    assert!(!brute_force_color(&l, 4).unwrap().colorable);
}

fn q(k: i64) -> Ratio<BigInt> {
    Ratio::from_integer(BigInt::from(k))
}

#[test]
fn kernel_family_dependency() {
    // bn - 2 Σ tp(odd i ≤ n/2) + Σ as(i) = 0 when n/2 is odd
    for n in [6usize, 10] {
        let mut sum: RationalVector = binomial(n).unwrap();
        for i in (3..=n / 2).step_by(2) {
            sum = sum.add(&pascal(n, i).unwrap().scale(&q(-2)));
        }
        for i in 1..=n / 2 {
            sum = sum.add(&antisym(n, i).unwrap());
        }
        assert_eq!(sum, RationalVector::zeros(n), "n={n}");
    }
    for n in [4usize, 8, 12] {
        let mut fam: Vec<RationalVector> = (1..=n / 2).map(|i| antisym(n, i).unwrap()).collect();
        fam.extend((3..=n / 2).map(|i| pascal(n, i).unwrap()));
        fam.push(binomial(n).unwrap());
        assert_eq!(rank(&fam), n - 1, "n={n}");
    }
}
