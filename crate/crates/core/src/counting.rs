//! Counting `a`-list assignments of `n` vertices up to color renaming.
//!
//! Each class is one nonnegative vector with all per-vertex sums equal to
//! `a`, so counting classes is counting lattice points.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::UniformLattice;
use crate::setsys::SubsetKey;

#[derive(Clone, Copy, Debug)]
pub struct CountBudget {
    pub max_n: usize,
    pub max_a: u32,
}

impl Default for CountBudget {
    fn default() -> Self {
        CountBudget { max_n: 4, max_a: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivClassCount {
    pub n: usize,
    pub a: u32,
    #[serde(serialize_with = "ser_display")]
    pub total: BigUint,
    /// Classes with an empty full-set block.
    #[serde(serialize_with = "ser_display")]
    pub residue_full_empty: BigUint,
    /// Classes with an empty full-set block and some empty singleton block.
    #[serde(serialize_with = "ser_display")]
    pub residue_tight: BigUint,
}

fn ser_display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_display_vec<T: std::fmt::Display, S: Serializer>(xs: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

fn ser_display_opt_vec<T: std::fmt::Display, S: Serializer>(
    xs: &Option<Vec<T>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match xs {
        Some(v) => ser_display_vec(v, s),
        None => s.serialize_none(),
    }
}

fn ser_display_opt<T: std::fmt::Display, S: Serializer>(x: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

pub fn count_classes(n: usize, a: u32) -> Result<EquivClassCount> {
    count_classes_with(n, a, CountBudget::default(), Exec::default())
}

pub fn count_classes_with(n: usize, a: u32, budget: CountBudget, exec: Exec) -> Result<EquivClassCount> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n > budget.max_n || a > budget.max_a {
        return Err(Error::BudgetExceeded(format!(
            "count for n={n}, a={a} beyond budget n ≤ {}, a ≤ {}",
            budget.max_n, budget.max_a
        )));
    }
    let full = SubsetKey::full(n);
    let (total, empty, tight) = UniformLattice::new(n, a).fold(
        exec,
        || (0u64, 0u64, 0u64),
        |(t, e, g), v| {
            let is_empty = v.get(full) == 0;
            let is_tight = is_empty && (1..=n).any(|i| v.get(SubsetKey::singleton(i)) == 0);
            (t + 1, e + is_empty as u64, g + is_tight as u64)
        },
        |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2),
    );
    Ok(EquivClassCount {
        n,
        a,
        total: total.into(),
        residue_full_empty: empty.into(),
        residue_tight: tight.into(),
    })
}

/// `(a⁴ + 8a³ + 24a² + 32a + 16 − ε) / 16`, `ε = 1` for odd `a`.
pub fn closed_form_l3(a: u64) -> BigUint {
    let x = BigUint::from(a);
    let num = x.pow(4) + 8u32 * x.pow(3) + 24u32 * x.pow(2) + 32u32 * &x + 16u32 - (a % 2);
    num / 16u32
}

/// `(3a² + 6a + 4)/4` for even `a`, `(3a² + 6a + 3)/4` for odd `a`.
pub fn tight_count_l3(a: u64) -> BigUint {
    let x = BigUint::from(a);
    let num = 3u32 * x.pow(2) + 6u32 * &x + if a.is_multiple_of(2) { 4u32 } else { 3u32 };
    num / 4u32
}

type Q = Ratio<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitReport {
    pub n: usize,
    pub a_max: u32,
    #[serde(serialize_with = "ser_display_vec")]
    pub values: Vec<BigUint>,
    /// Least `d` whose `d`-th differences are constant over the range.
    pub raw_degree: Option<usize>,
    /// Same test on `f(a) + f(a+1)`, which removes a `(−1)^a` term.
    pub parity_degree: Option<usize>,
    /// `c_0, …, c_d` of `f(a) = Σ c_k a^k + e·(−1)^a`.
    #[serde(serialize_with = "ser_display_opt_vec")]
    pub coefficients: Option<Vec<Q>>,
    #[serde(serialize_with = "ser_display_opt")]
    pub alternating: Option<Q>,
    /// The fitted form reproduces every value.
    pub fits_all: bool,
    /// The degree the conjecture predicts, `n + 1`.
    pub conjectured_degree: usize,
}

/// Rows of the forward difference table, row `k` holding `Δ^k f`.
pub fn difference_table(values: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut rows = vec![values.to_vec()];
    while rows.last().is_some_and(|r| r.len() > 1) {
        let last = rows.last().unwrap();
        rows.push(last.windows(2).map(|w| &w[1] - &w[0]).collect());
    }
    rows
}

/// Least `d` with `Δ^d` constant on at least two entries.
fn constant_degree(values: &[BigInt]) -> Option<usize> {
    difference_table(values).iter().position(|r| r.len() >= 2 && r.iter().all(|x| *x == r[0]))
}

pub fn degree_fit(n: usize, a_max: u32) -> Result<FitReport> {
    degree_fit_with(n, a_max, CountBudget::default(), Exec::default())
}

pub fn degree_fit_with(n: usize, a_max: u32, budget: CountBudget, exec: Exec) -> Result<FitReport> {
    if (a_max as usize) < n + 3 {
        return Err(Error::Domain(format!("need a_max ≥ n + 3 (n={n}, a_max={a_max})")));
    }
    let values: Vec<BigUint> =
        (0..=a_max).map(|a| count_classes_with(n, a, budget, exec).map(|c| c.total)).collect::<Result<_>>()?;
    let f: Vec<BigInt> = values.iter().map(|v| BigInt::from(v.clone())).collect();
    let raw_degree = constant_degree(&f);
    let h: Vec<BigInt> = f.windows(2).map(|w| &w[0] + &w[1]).collect();
    let parity_degree = constant_degree(&h);
    let (coefficients, alternating, fits_all) = match parity_degree {
        Some(d) if d + 2 <= f.len() => match fit(&f, d) {
            Some((c, e)) => {
                let ok = f.iter().enumerate().all(|(a, y)| eval(&c, &e, a as i64) == Q::from_integer(y.clone()));
                (Some(c), Some(e), ok)
            }
            None => (None, None, false),
        },
        _ => (None, None, false),
    };
    Ok(FitReport {
        n,
        a_max,
        values,
        raw_degree,
        parity_degree,
        coefficients,
        alternating,
        fits_all,
        conjectured_degree: n + 1,
    })
}

fn basis(a: i64, d: usize) -> Vec<Q> {
    let x = Q::from_integer(BigInt::from(a));
    let mut row: Vec<Q> = std::iter::successors(Some(Q::one()), |p| Some(p * &x)).take(d + 1).collect();
    row.push(Q::from_integer(BigInt::from(if a % 2 == 0 { 1 } else { -1 })));
    row
}

fn eval(c: &[Q], e: &Q, a: i64) -> Q {
    let row = basis(a, c.len() - 1);
    c.iter().chain([e]).zip(&row).map(|(p, q)| p * q).sum()
}

/// Solves for the `d + 2` unknowns from the first `d + 2` points.
fn fit(f: &[BigInt], d: usize) -> Option<(Vec<Q>, Q)> {
    let m = d + 2;
    let mut rows: Vec<Vec<Q>> = (0..m)
        .map(|a| {
            let mut r = basis(a as i64, d);
            r.push(Q::from_integer(f[a].clone()));
            r
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let p = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for k in col..=m {
                    let delta = &factor * &rows[col][k];
                    rows[r][k] = &rows[r][k] - delta;
                }
            }
        }
    }
    let mut sol: Vec<Q> = rows.into_iter().map(|r| r[m].clone()).collect();
    let e = sol.pop()?;
    Some((sol, e))
}

/// Difference table as CSV: `order,values` with space-separated entries.
pub fn difference_csv(values: &[BigUint]) -> String {
    let f: Vec<BigInt> = values.iter().map(|v| BigInt::from(v.clone())).collect();
    let mut out = String::from("order,values\n");
    for (k, row) in difference_table(&f).iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("{k},{}\n", cells.join(" ")));
    }
    out
}
