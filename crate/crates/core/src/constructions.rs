//! Structured assignments: symmetric vectors, cardinality-support twins and
//! the explicit counter-example families for the separation bounds.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setsys::{binom, canonical_order, PIVector, SubsetKey};

/// A symmetric assignment: every proper intersection of an `i`-subset has
/// size `x[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymVector {
    pub n: usize,
    pub x: Vec<u32>,
}

impl SymVector {
    pub fn new(x: Vec<u32>) -> Result<Self> {
        if x.is_empty() || x.len() > crate::setsys::MAX_N {
            return Err(Error::Domain(format!("symmetric vector of length {}", x.len())));
        }
        Ok(SymVector { n: x.len(), x })
    }

    /// Common list size `Σ C(n−1,i−1)·x_i`.
    pub fn list_size(&self) -> u64 {
        self.weighted(|i| binom(self.n as u64 - 1, i - 1))
    }

    /// Common pair intersection `Σ C(n−2,i−2)·x_i`.
    pub fn pair_intersection(&self) -> u64 {
        self.weighted(|i| if i >= 2 && self.n >= 2 { binom(self.n as u64 - 2, i - 2) } else { 0 })
    }

    /// Total amplitude `Σ C(n,i)·x_i`.
    pub fn amplitude(&self) -> u64 {
        self.weighted(|i| binom(self.n as u64, i))
    }

    fn weighted(&self, w: impl Fn(u64) -> u64) -> u64 {
        self.x.iter().enumerate().map(|(k, &x)| w(k as u64 + 1) * x as u64).sum()
    }
}

pub fn expand_symmetric(x: &SymVector) -> PIVector {
    let mut v = PIVector::zeros(x.n).expect("length checked on construction");
    for key in canonical_order(x.n) {
        v.set(key, x.x[key.len() - 1]);
    }
    v
}

/// Every symmetric vector on `n` vertices with list size `a`.
pub fn symmetric_vectors(n: usize, a: u32) -> Vec<SymVector> {
    fn walk(n: usize, i: usize, left: u64, x: &mut Vec<u32>, out: &mut Vec<SymVector>) {
        if i == 0 {
            if left == 0 {
                out.push(SymVector { n, x: x.clone() });
            }
            return;
        }
        let w = binom(n as u64 - 1, i as u64 - 1);
        for v in 0..=left / w {
            x[i - 1] = v as u32;
            walk(n, i - 1, left - v * w, x, out);
        }
        x[i - 1] = 0;
    }
    let mut out = Vec::new();
    if n >= 1 {
        walk(n, n, a as u64, &mut vec![0; n], &mut out);
    }
    out.sort_by(|p, q| p.x.cmp(&q.x));
    out
}

/// Per-vertex occurrence counts of a family of subsets.
pub fn cardinality_support(family: &[SubsetKey], n: usize) -> Vec<u32> {
    (1..=n).map(|v| family.iter().filter(|s| s.contains(v)).count() as u32).collect()
}

/// Twin families with equal cardinality support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twins {
    /// `k + 1` subsets of size `k`.
    pub small: Vec<SubsetKey>,
    /// `k` subsets of size `k + 1`.
    pub large: Vec<SubsetKey>,
    pub support: Vec<u32>,
}

pub fn support_twins(n: usize, k: usize) -> Result<Twins> {
    if n < 4 || k < 2 || n > crate::setsys::MAX_N {
        return Err(Error::Hypothesis(format!("need n ≥ 4 and k ≥ 2 (n={n}, k={k})")));
    }
    // n ≥ (2k − 1 + √(8k+1))/2  ⇔  C(n−k+1, 2) ≥ k
    if n < k || binom((n - k + 1) as u64, 2) < k as u64 {
        return Err(Error::Hypothesis(format!("C(n−k+1, 2) < k for n={n}, k={k}")));
    }
    let key = |vs: &[usize]| SubsetKey::from_vertices(vs, n).expect("vertices in range");
    let (small, large) = if 2 * k <= n {
        let large: Vec<Vec<usize>> = (1..=k).map(|i| (1..=k).chain([k + i]).collect()).collect();
        let mut small: Vec<Vec<usize>> =
            large.iter().enumerate().map(|(j, s)| s.iter().copied().filter(|&v| v != j + 1).collect()).collect();
        small.push((1..=k).collect());
        (small, large)
    } else {
        let couples: Vec<(usize, usize)> = (k..=n).flat_map(|x| (x + 1..=n).map(move |y| (x, y))).take(k).collect();
        let large: Vec<Vec<usize>> = couples.iter().map(|&(x, y)| (1..k).chain([x, y]).collect()).collect();
        let mut small: Vec<Vec<usize>> = large[..k - 1]
            .iter()
            .enumerate()
            .map(|(j, s)| s.iter().copied().filter(|&v| v != j + 1).collect())
            .collect();
        let xk = couples[k - 1].0;
        small.push(large[k - 1].iter().copied().filter(|&v| v != xk).collect());
        small.push((1..k).chain([xk]).collect());
        (small, large)
    };
    let small: Vec<SubsetKey> = small.iter().map(|s| key(s)).collect();
    let large: Vec<SubsetKey> = large.iter().map(|s| key(s)).collect();
    let support = cardinality_support(&small, n);
    debug_assert_eq!(support, cardinality_support(&large, n));
    Ok(Twins { small, large, support })
}

/// Quasi-symmetric counter-example for `a = x·b`: the symmetric layer on
/// `x`-subsets with one twin swap, amplitude `n·b − 1`.
pub fn counterexample_xb(n: usize, a: u32, b: u32, x: usize) -> Result<PIVector> {
    if b == 0 || x == 0 || x > n || a as u64 != x as u64 * b as u64 {
        return Err(Error::Hypothesis(format!("need 1 ≤ x ≤ n and a = x·b (n={n}, a={a}, b={b}, x={x})")));
    }
    let per = binom(n as u64 - 1, x as u64 - 1);
    if !(a as u64).is_multiple_of(per) {
        return Err(Error::Hypothesis(format!("a = {a} not divisible by C({}, {}) = {per}", n - 1, x - 1)));
    }
    let p = (a as u64 / per) as u32;
    let twins = support_twins(n, x)?;
    let mut v = PIVector::zeros(n)?;
    for key in canonical_order(n).into_iter().filter(|k| k.len() == x) {
        v.set(key, p);
    }
    for &s in &twins.small {
        v.set(s, v.get(s) - 1);
    }
    for &s in &twins.large {
        v.set(s, v.get(s) + 1);
    }
    Ok(v)
}

/// `c′ = ⌊2(a−b)/(n−1)⌋ + 1`.
pub fn low_target(n: usize, a: u32, b: u32) -> u32 {
    2 * (a - b) / (n as u32 - 1) + 1
}

/// Counter-example at `c′` for `b ≤ a ≤ 2b`.
///
/// When `a ≥ (n−1)c′` every pair block gets `c′` and the singletons take
/// the rest. Otherwise, with `α = (n−1)c′ − a`, each vertex has `α` pair
/// blocks of size `c′−1` (an `α`-regular circulant) and the others of size
/// `c′`; for odd `n·α` one vertex carries `α+1` light blocks and a singleton
/// of size 1. That second pattern has amplitude `⌈na/2⌉`, which is below
/// `nb` only for `a < 2b`; at `a = 2b` the `a = x·b` family with `x = 2`
/// is used instead when `n − 1` divides `a`.
pub fn counterexample_low(n: usize, a: u32, b: u32) -> Result<PIVector> {
    if !(3..=crate::setsys::MAX_N).contains(&n) || b == 0 || a < b || a > 2 * b {
        return Err(Error::Domain(format!("need n ≥ 3 and b ≤ a ≤ 2b (n={n}, a={a}, b={b})")));
    }
    let c = low_target(n, a, b);
    let full = (n as u32 - 1) * c;
    let mut v = PIVector::zeros(n)?;
    if a >= full {
        for key in canonical_order(n) {
            match key.len() {
                1 => v.set(key, a - full),
                2 => v.set(key, c),
                _ => {}
            }
        }
        return Ok(v);
    }
    if a == 2 * b {
        if n == 3 {
            // a = (n−1)b: the high-range family applies with the same c′
            return counterexample_high(n, a, b);
        }
        // a = 2b with (n−1) | a: the x = 2 family reaches a/(n−1) + 1 = c′
        return counterexample_xb(n, a, b, 2).map_err(|_| {
            Error::Hypothesis(format!("no low-range construction at a = 2b with a < (n−1)c′ (n={n}, a={a}, b={b})"))
        });
    }
    let alpha = (full - a) as usize;
    let light = light_graph(n, alpha);
    for i in 0..n {
        for j in i + 1..n {
            let key = SubsetKey::from_mask_unchecked(1 << i | 1 << j);
            v.set(key, if light[i][j] { c - 1 } else { c });
        }
        let degree = light[i].iter().filter(|&&e| e).count();
        v.set(SubsetKey::singleton(i + 1), (degree - alpha) as u32);
    }
    Ok(v)
}

/// Adjacency of a graph on `n` vertices with all degrees `alpha`, except one
/// vertex of degree `alpha + 1` when `n·alpha` is odd.
fn light_graph(n: usize, alpha: usize) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    let mut link = |i: usize, j: usize| {
        adj[i][j] = true;
        adj[j][i] = true;
    };
    for i in 0..n {
        for d in 1..=alpha / 2 {
            link(i, (i + d) % n);
        }
    }
    if alpha % 2 == 1 {
        if n.is_multiple_of(2) {
            for i in 0..n / 2 {
                link(i, i + n / 2);
            }
        } else {
            // offset (n−1)/2 walks an n-cycle u_0..u_{n−1}; take the path
            // u_1 u_0 u_{n−1} and the matching u_2u_3, …, u_{n−3}u_{n−2}
            let d = (n - 1) / 2;
            let u = |k: usize| k * d % n;
            link(u(1), u(0));
            link(u(0), u(n - 1));
            for k in (2..n - 2).step_by(2) {
                link(u(k), u(k + 1));
            }
        }
    }
    adj
}

/// `c′ = 2a − nb + 1`.
pub fn high_target(n: usize, a: u32, b: u32) -> i64 {
    2 * a as i64 - n as i64 * b as i64 + 1
}

/// Counter-example at `c′ = 2a − nb + 1` for `(n−1)b ≤ a ≤ nb`: blocks on
/// the co-singletons and on the full set, amplitude `n·b − 1`.
pub fn counterexample_high(n: usize, a: u32, b: u32) -> Result<PIVector> {
    if !(3..=crate::setsys::MAX_N).contains(&n) || b == 0 {
        return Err(Error::Domain(format!("need n ≥ 3 and b ≥ 1 (n={n}, b={b})")));
    }
    let (nn, a64, b64) = (n as i64, a as i64, b as i64);
    if a64 < (nn - 1) * b64 || a64 > nn * b64 {
        return Err(Error::Domain(format!("need (n−1)b ≤ a ≤ nb (n={n}, a={a}, b={b})")));
    }
    let c = high_target(n, a, b);
    let co = a64 - c;
    let top = (nn - 1) * c - (nn - 2) * a64;
    if co < 0 || top < 0 {
        return Err(Error::Hypothesis(format!(
            "negative block sizes a − c′ = {co}, (n−1)c′ − (n−2)a = {top} (n={n}, a={a}, b={b})"
        )));
    }
    let mut v = PIVector::zeros(n)?;
    let full = SubsetKey::full(n);
    for i in 1..=n {
        v.set(SubsetKey::from_mask_unchecked(full.mask() & !(1 << (i - 1))), co as u32);
    }
    v.set(full, top as u32);
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub i: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub bound: Ratio<i64>,
    pub required: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoosabilityTrace {
    pub n: usize,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub lambda: u32,
    pub rows: Vec<BoundRow>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    if r.is_integer() {
        s.serialize_i64(r.to_integer())
    } else {
        s.serialize_str(&r.to_string())
    }
}

/// Certifies `(a, b, ⌊a²/(2b(n−1))⌋)`-choosability by per-size amplitude
/// lower bounds.
pub fn choosable_bikn(n: usize, a: u32, b: u32) -> Result<ChoosabilityTrace> {
    if n < 2 || b == 0 || a < 2 * b {
        return Err(Error::Hypothesis(format!("need n ≥ 2 and a ≥ 2b (n={n}, a={a}, b={b})")));
    }
    let c = (a as u64 * a as u64 / (2 * b as u64 * (n as u64 - 1))) as u32;
    if c == 0 || !a.is_multiple_of(c) {
        return Err(Error::Hypothesis(format!("c = {c} must be positive and divide a = {a}")));
    }
    let lambda = a / c;
    let (a_r, c_r) = (Ratio::from_integer(a as i64), Ratio::from_integer(c as i64));
    let rows: Vec<BoundRow> = (1..=n)
        .map(|i| {
            let ii = Ratio::from_integer(i as i64);
            let bound = if i as u32 <= lambda {
                ii * a_r - ii * (ii - 1) * c_r / 2
            } else {
                Ratio::from_integer(lambda as i64 + 1) * a_r / 2
            };
            BoundRow { i, bound, required: i as i64 * b as i64 }
        })
        .collect();
    if let Some(r) = rows.iter().find(|r| r.bound < Ratio::from_integer(r.required)) {
        return Err(Error::Hypothesis(format!("bound {} below {} at size {}", r.bound, r.required, r.i)));
    }
    Ok(ChoosabilityTrace { n, a, b, c, lambda, rows })
}
