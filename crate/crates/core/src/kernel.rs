//! Exact linear algebra of the symmetric reduction: the list-size form
//! `φ_a(x) = Σ C(n−1,i−1)·x_i`, the pair form `φ_c(x) = Σ C(n−2,i−2)·x_i`,
//! explicit bases of their kernels and two extreme solution points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::constructions::SymVector;
use crate::error::{Error, Result};

pub type Rational = Ratio<BigInt>;

const MAX_N: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector(pub Vec<Rational>);

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|x| x.to_string()))
    }
}

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(xs: I) -> Self {
        RationalVector(xs.into_iter().map(|x| Rational::from_integer(x.into())).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i - 1] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(x, y)| x * y).sum()
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, k: &Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// Nonnegative integer entries as a symmetric vector.
    pub fn to_sym(&self) -> Option<SymVector> {
        let x = self
            .0
            .iter()
            .map(|q| if q.is_integer() && !q.is_negative() { u32::try_from(q.to_integer()).ok() } else { None })
            .collect::<Option<Vec<u32>>>()?;
        SymVector::new(x).ok()
    }
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

fn int(x: BigInt) -> Rational {
    Rational::from_integer(x)
}

fn check_n(n: usize, least: usize) -> Result<()> {
    if n < least || n > MAX_N {
        return Err(Error::Domain(format!("need {least} ≤ n ≤ {MAX_N} (n={n})")));
    }
    Ok(())
}

fn binomial_vector(n: usize, top: i64, shift: i64) -> RationalVector {
    RationalVector((1..=n as i64).map(|i| int(binom(top, i - shift))).collect())
}

/// `(C(n−1, i−1))_i`.
pub fn vec_a(n: usize) -> Result<RationalVector> {
    check_n(n, 2)?;
    Ok(binomial_vector(n, n as i64 - 1, 1))
}

/// `(C(n−2, i−2))_i`.
pub fn vec_c(n: usize) -> Result<RationalVector> {
    check_n(n, 2)?;
    Ok(binomial_vector(n, n as i64 - 2, 2))
}

/// `(C(n, i))_i`, the total amplitude form.
pub fn vec_psi(n: usize) -> Result<RationalVector> {
    check_n(n, 2)?;
    Ok(binomial_vector(n, n as i64, 0))
}

fn check_index(n: usize, i: usize, lo: usize, hi: usize) -> Result<()> {
    check_n(n, 2)?;
    if i < lo || i > hi {
        return Err(Error::Domain(format!("index {i} outside [{lo}, {hi}] for n={n}")));
    }
    Ok(())
}

/// `e_i − e_{n+1−i}`.
pub fn antisym(n: usize, i: usize) -> Result<RationalVector> {
    check_index(n, i, 1, n)?;
    let mut v = RationalVector::unit(n, i);
    v.0[n - i] -= Rational::one();
    Ok(v)
}

/// `e_i + e_{i−1} − C(n, i−1)·e_1`.
pub fn pascal(n: usize, i: usize) -> Result<RationalVector> {
    check_index(n, i, 2, n)?;
    let mut v = RationalVector::unit(n, i).add(&RationalVector::unit(n, i - 1));
    v.0[0] -= int(binom(n as i64, i as i64 - 1));
    Ok(v)
}

/// `Σ e_i − 2^{n−1}·e_1`.
pub fn binomial(n: usize) -> Result<RationalVector> {
    check_n(n, 2)?;
    let mut v = RationalVector(vec![Rational::one(); n]);
    v.0[0] -= int(BigInt::one() << (n - 1));
    Ok(v)
}

/// `Δ·as(1) + as(i)` with `Δ = C(n−2,i−2) − C(n−2,i−1)`.
pub fn antisym_c(n: usize, i: usize) -> Result<RationalVector> {
    check_index(n, i, 2, n)?;
    let (nn, ii) = (n as i64, i as i64);
    let delta = binom(nn - 2, ii - 2) - binom(nn - 2, ii - 1);
    Ok(antisym(n, 1)?.scale(&int(delta)).add(&antisym(n, i)?))
}

/// `C(n−1, i−2)·as(1) + tp(i)`.
pub fn pascal_c(n: usize, i: usize) -> Result<RationalVector> {
    check_index(n, i, 2, n)?;
    let k = binom(n as i64 - 1, i as i64 - 2);
    Ok(antisym(n, 1)?.scale(&int(k)).add(&pascal(n, i)?))
}

/// `2^{n−2}·as(1) + bn`.
pub fn binomial_c(n: usize) -> Result<RationalVector> {
    check_n(n, 2)?;
    Ok(antisym(n, 1)?.scale(&int(BigInt::one() << (n - 2))).add(&binomial(n)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedVector {
    pub name: String,
    pub entries: RationalVector,
}

fn named(name: String, entries: RationalVector) -> NamedVector {
    NamedVector { name, entries }
}

/// `as(i)` for `1 ≤ i ≤ ⌊n/2⌋`, `tp(i)` for `3 ≤ i ≤ ⌈n/2⌉`, and `bn`.
pub fn basis_ker_a(n: usize) -> Result<Vec<NamedVector>> {
    check_n(n, 3)?;
    let mut out = Vec::new();
    for i in 1..=n / 2 {
        out.push(named(format!("as({i})"), antisym(n, i)?));
    }
    for i in 3..=n.div_ceil(2) {
        out.push(named(format!("tp({i})"), pascal(n, i)?));
    }
    out.push(named("bn".into(), binomial(n)?));
    if out.len() != n - 1 {
        return Err(Error::Hypothesis(format!("ker φ_a family has {} members, expected {}", out.len(), n - 1)));
    }
    Ok(out)
}

/// `asc(i)` for `2 ≤ i ≤ ⌊n/2⌋`, `tpc(i)` for `3 ≤ i ≤ ⌈n/2⌉`, and `bnc`.
pub fn basis_ker_ac(n: usize) -> Result<Vec<NamedVector>> {
    check_n(n, 4)?;
    let mut out = Vec::new();
    for i in 2..=n / 2 {
        out.push(named(format!("asc({i})"), antisym_c(n, i)?));
    }
    for i in 3..=n.div_ceil(2) {
        out.push(named(format!("tpc({i})"), pascal_c(n, i)?));
    }
    out.push(named("bnc".into(), binomial_c(n)?));
    if out.len() != n - 2 {
        return Err(Error::Hypothesis(format!("ker φ_a ∩ ker φ_c family has {} members, expected {}", out.len(), n - 2)));
    }
    Ok(out)
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn rank(vectors: &[RationalVector]) -> usize {
    let Some(width) = vectors.first().map(RationalVector::len) else {
        return 0;
    };
    // clear denominators row by row
    let mut m: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| {
            let l = v.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.0.iter().map(|x| (x * int(l.clone())).to_integer()).collect()
        })
        .collect();
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in col + 1..width {
                let v = (&m[r][col] * &m[i][j] - &m[i][col] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremePoints {
    pub x1: Option<RationalVector>,
    pub x2: Option<RationalVector>,
}

/// `x1 = (a−(n−1)c)e_1 + c·e_2` when `a ≥ (n−1)c`;
/// `x2 = (a−c)e_{n−1} + ((n−1)c−(n−2)a)e_n` when `(n−2)a ≤ (n−1)c` and
/// `c ≤ a`.
pub fn extreme_points(n: usize, a: u64, c: u64) -> Result<ExtremePoints> {
    check_n(n, 3)?;
    let (nn, a, c) = (n as i64, BigInt::from(a), BigInt::from(c));
    let x1 = (a >= (nn - 1) * &c).then(|| {
        let mut v = RationalVector::zeros(n);
        v.0[0] = int(&a - (nn - 1) * &c);
        v.0[1] = int(c.clone());
        v
    });
    let x2 = ((nn - 2) * &a <= (nn - 1) * &c && c <= a).then(|| {
        let mut v = RationalVector::zeros(n);
        v.0[n - 2] += int(&a - &c);
        v.0[n - 1] += int((nn - 1) * &c - (nn - 2) * &a);
        v
    });
    Ok(ExtremePoints { x1, x2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub n: usize,
    pub vec_a: RationalVector,
    pub vec_c: RationalVector,
    pub vec_psi: RationalVector,
    pub basis_ker_a: Vec<NamedVector>,
    pub rank_ker_a: usize,
    pub basis_ker_ac: Option<Vec<NamedVector>>,
    pub rank_ker_ac: Option<usize>,
    pub all_orthogonal: bool,
    pub extreme_points: Option<ExtremePoints>,
}

pub fn kernel_report(n: usize, ac: Option<(u64, u64)>) -> Result<KernelReport> {
    let (va, vc) = (vec_a(n)?, vec_c(n)?);
    let ka = basis_ker_a(n)?;
    let kac = if n >= 4 { Some(basis_ker_ac(n)?) } else { None };
    let entries = |b: &[NamedVector]| b.iter().map(|v| v.entries.clone()).collect::<Vec<_>>();
    let mut orthogonal = ka.iter().all(|v| va.dot(&v.entries).is_zero());
    if let Some(k) = &kac {
        orthogonal &= k.iter().all(|v| va.dot(&v.entries).is_zero() && vc.dot(&v.entries).is_zero());
    }
    Ok(KernelReport {
        n,
        vec_psi: vec_psi(n)?,
        rank_ker_a: rank(&entries(&ka)),
        rank_ker_ac: kac.as_ref().map(|k| rank(&entries(k))),
        vec_a: va,
        vec_c: vc,
        basis_ker_a: ka,
        basis_ker_ac: kac,
        all_orthogonal: orthogonal,
        extreme_points: ac.map(|(a, c)| extreme_points(n, a, c)).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &RationalVector) -> Vec<i64> {
        v.0.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect()
    }

    #[test]
    fn named_vectors() {
        assert_eq!(ints(&vec_a(4).unwrap()), vec![1, 3, 3, 1]);
        assert_eq!(ints(&vec_c(4).unwrap()), vec![0, 1, 2, 1]);
        assert_eq!(ints(&vec_psi(3).unwrap()), vec![3, 3, 1]);
        assert_eq!(ints(&antisym(4, 1).unwrap()), vec![1, 0, 0, -1]);
        assert_eq!(ints(&pascal(4, 3).unwrap()), vec![-6, 1, 1, 0]);
        assert_eq!(ints(&binomial(4).unwrap()), vec![-7, 1, 1, 1]);
        assert_eq!(ints(&antisym_c(4, 2).unwrap()), vec![-1, 1, -1, 1]);
        assert_eq!(ints(&binomial_c(5).unwrap()), vec![-7, 1, 1, 1, -7]);
        assert!(vec_a(1).is_err());
        assert!(pascal(4, 1).is_err());
    }

    #[test]
    fn kernels_small() {
        let a = vec_a(4).unwrap();
        let c = vec_c(4).unwrap();
        for v in basis_ker_a(4).unwrap() {
            assert!(a.dot(&v.entries).is_zero(), "{}", v.name);
        }
        for v in basis_ker_ac(5).unwrap() {
            assert!(vec_a(5).unwrap().dot(&v.entries).is_zero());
            assert!(vec_c(5).unwrap().dot(&v.entries).is_zero());
        }
        let asc2 = antisym_c(4, 2).unwrap();
        assert!(a.dot(&asc2).is_zero() && c.dot(&asc2).is_zero());
        assert!(basis_ker_ac(3).is_err());
    }

    #[test]
    fn rank_examples() {
        let e = |i| RationalVector::unit(3, i);
        assert_eq!(rank(&[e(1), e(2), e(3)]), 3);
        assert_eq!(rank(&[e(1), e(2), e(1).add(&e(2))]), 2);
        let half = RationalVector(vec![Rational::new(1.into(), 2.into()), Rational::one()]);
        assert_eq!(rank(&[half.clone(), half.scale(&int(4.into()))]), 1);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn extremes() {
        let p = extreme_points(3, 2, 2).unwrap();
        assert_eq!(ints(p.x2.as_ref().unwrap()), vec![0, 0, 2]);
        assert!(p.x1.is_none());
        let p = extreme_points(4, 7, 7).unwrap();
        assert_eq!(ints(p.x2.as_ref().unwrap()), vec![0, 0, 0, 7]);
        let p = extreme_points(4, 7, 2).unwrap();
        assert_eq!(ints(p.x1.as_ref().unwrap()), vec![1, 2, 0, 0]);
        assert!(p.x2.is_none());
    }

    #[test]
    fn report_json() {
        let text = serde_json::to_string(&kernel_report(4, Some((7, 7))).unwrap()).unwrap();
        assert!(text.contains(r#""vec_a":["1","3","3","1"]"#), "{text}");
        assert!(text.contains(r#""rank_ker_a":3"#));
    }
}
