//! Exact separation numbers of complete graphs by counter-example search.
//!
//! A counter-example for `(n, a, b, c)` is a vector with every per-vertex
//! sum equal to `a`, every pair sum at most `c`, and total mass (the union
//! of all lists) at most `n·b − 1`. The search walks the coordinates in
//! canonical subset order trying values in ascending order, so the first
//! solution found is the lexicographically smallest one. Subtrees are cut by
//! lower bounds on the mass still needed to fill the per-vertex residuals.
//!
//! `sep(K_n, a, b)` is one less than the smallest `c` admitting a
//! counter-example on some `K_m`, `2 ≤ m ≤ n`: a violation on a proper
//! subset lifts to `K_n` by giving the extra vertices fresh private lists.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::setsys::{binom, canonical_order, PIVector};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Only explore vectors that are lexicographically minimal in their
    /// vertex-permutation orbit.
    pub symmetry: bool,
    pub exec: Exec,
    /// Largest vertex count the exhaustive search accepts.
    pub max_n: usize,
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
    /// Only look for counter-examples on `K_m` with `m ≤ max_m` before
    /// padding. `None` means every `m ≤ n`.
    pub max_m: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { symmetry: true, exec: Exec::default(), max_n: 5, node_limit: None, deadline: None, max_m: None }
    }
}

impl SearchOptions {
    pub fn sequential(mut self) -> Self {
        self.exec = Exec::Sequential;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SepQuery {
    pub n: usize,
    pub a: u32,
    pub b: u32,
}

impl SepQuery {
    pub fn new(n: usize, a: u32, b: u32) -> Result<Self> {
        if n < 2 || b == 0 || b > a {
            return Err(Error::Domain(format!("need n ≥ 2 and 1 ≤ b ≤ a (n={n}, a={a}, b={b})")));
        }
        Ok(SepQuery { n, a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Choosability at `value` was proved by exploring the search tree.
    Exhaustive,
    /// Taken from a closed form without searching.
    ClosedForm,
    /// Choosability at `value` follows from the root bounds alone.
    AmplitudeBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SepResult {
    pub n: usize,
    pub a: u32,
    pub b: u32,
    pub value: u32,
    /// Violating vector on `n` vertices with max pair intersection
    /// `value + 1`; absent when `value = a`.
    pub counterexample: Option<PIVector>,
    pub certificate_kind: CertificateKind,
    /// Closed-form value when the parameters fall under a known formula.
    pub closed_form: Option<u32>,
}

/// Least `c`-separating counter-example on exactly `n` vertices violating
/// the amplitude condition on the whole vertex set.
pub fn find_counterexample(n: usize, a: u32, b: u32, c: u32, opts: &SearchOptions) -> Result<Option<PIVector>> {
    Ok(find_counterexample_traced(n, a, b, c, opts)?.0)
}

/// Like [`find_counterexample`], also reporting whether the root bounds
/// alone settled the instance.
fn find_counterexample_traced(
    n: usize,
    a: u32,
    b: u32,
    c: u32,
    opts: &SearchOptions,
) -> Result<(Option<PIVector>, bool)> {
    if n == 0 || b == 0 || b > a {
        return Err(Error::Domain(format!("need n ≥ 1 and 1 ≤ b ≤ a (n={n}, a={a}, b={b})")));
    }
    if n > opts.max_n {
        return Err(Error::BudgetExceeded(format!("n = {n} above the search cap {}", opts.max_n)));
    }
    let max_total = n as u64 * b as u64 - 1;
    if n == 1 || (a as u64) > max_total {
        // a single list already has a ≥ b·1 colors; a list of a > nb - 1 colors cannot fit either
        return Ok((None, true));
    }
    let problem = Problem::new(n, a, c.min(a), max_total, opts.symmetry);
    let guard = Guard::new(opts);
    let root = State::root(&problem);
    if !problem.feasible(&root) {
        return Ok((None, true));
    }
    let prefixes = problem.prefixes(&guard)?;
    let found = opts.exec.find_map_first(&prefixes, |state| {
        let mut state = state.clone();
        match problem.dfs(&mut state, n, &guard) {
            Ok(true) => Some(Ok(state.into_vector(&problem))),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        }
    });
    Ok((found.transpose()?, false))
}

struct Guard {
    nodes: AtomicU64,
    abort: AtomicBool,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
}

impl Guard {
    fn new(opts: &SearchOptions) -> Self {
        Guard { nodes: AtomicU64::new(0), abort: AtomicBool::new(false), node_limit: opts.node_limit, deadline: opts.deadline }
    }

    fn tick(&self) -> Result<()> {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.abort.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded("search aborted".into()));
        }
        if self.node_limit.is_some_and(|lim| count > lim) {
            self.abort.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded(format!("more than {count} search nodes")));
        }
        if count.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() > d) {
            self.abort.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded("time limit reached".into()));
        }
        Ok(())
    }
}

/// Static data of one `(m, a, c, max_total)` instance.
struct Problem {
    m: usize,
    a: u32,
    max_total: u64,
    /// Subsets in canonical order, as vertex index lists (0-based).
    members: Vec<Vec<usize>>,
    /// Pair indices covered by each subset.
    pairs: Vec<Vec<usize>>,
    masks: Vec<u32>,
    pair_list: Vec<(usize, usize)>,
    pair_index: Vec<usize>,
    /// For every non-identity vertex permutation, the canonical position of
    /// the image of each subset.
    perms: Vec<Vec<usize>>,
    init_room: u32,
}

#[derive(Clone)]
struct State {
    x: Vec<u32>,
    residual: Vec<u32>,
    room: Vec<u32>,
    total: u64,
}

impl State {
    fn root(p: &Problem) -> Self {
        State {
            x: vec![0; p.members.len()],
            residual: vec![p.a; p.m],
            room: vec![p.init_room; p.pair_list.len()],
            total: 0,
        }
    }

    fn into_vector(self, p: &Problem) -> PIVector {
        let mut dense = vec![0u32; 1 << p.m];
        for (pos, &x) in self.x.iter().enumerate() {
            dense[p.masks[pos] as usize] = x;
        }
        PIVector::from_dense(p.m, dense)
    }
}

impl Problem {
    fn new(m: usize, a: u32, c: u32, max_total: u64, symmetry: bool) -> Self {
        let order = canonical_order(m);
        let masks: Vec<u32> = order.iter().map(|k| k.mask()).collect();
        let members: Vec<Vec<usize>> = order.iter().map(|k| k.vertices().iter().map(|v| v - 1).collect()).collect();
        let pair_list: Vec<(usize, usize)> = (0..m).tuple_combinations().collect();
        let mut pair_index = vec![usize::MAX; m * m];
        for (idx, &(i, j)) in pair_list.iter().enumerate() {
            pair_index[i * m + j] = idx;
            pair_index[j * m + i] = idx;
        }
        let pairs = members
            .iter()
            .map(|vs| vs.iter().tuple_combinations().map(|(&i, &j)| pair_index[i * m + j]).collect())
            .collect();
        let perms = if symmetry {
            let mut position = vec![usize::MAX; 1 << m];
            for (pos, &mask) in masks.iter().enumerate() {
                position[mask as usize] = pos;
            }
            (0..m)
                .permutations(m)
                .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
                .map(|p| {
                    masks
                        .iter()
                        .map(|&mask| {
                            let image = (0..m).filter(|&i| mask >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << p[i]);
                            position[image as usize]
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        Problem { m, a, max_total, members, pairs, masks, pair_list, pair_index, perms, init_room: c }
    }

    fn upper(&self, s: &State, pos: usize) -> u32 {
        let mut hi = self.members[pos].iter().map(|&i| s.residual[i]).min().unwrap_or(0);
        for &p in &self.pairs[pos] {
            hi = hi.min(s.room[p]);
        }
        let left = self.max_total - s.total;
        hi.min(u32::try_from(left).unwrap_or(u32::MAX))
    }

    fn assign(&self, s: &mut State, pos: usize, value: u32) {
        for &i in &self.members[pos] {
            s.residual[i] -= value;
        }
        for &p in &self.pairs[pos] {
            s.room[p] -= value;
        }
        s.total += value as u64;
        s.x[pos] = value;
    }

    fn unassign(&self, s: &mut State, pos: usize) {
        let value = s.x[pos];
        for &i in &self.members[pos] {
            s.residual[i] += value;
        }
        for &p in &self.pairs[pos] {
            s.room[p] += value;
        }
        s.total -= value as u64;
        s.x[pos] = 0;
    }

    /// Can the residuals still be filled without exceeding the mass budget?
    /// `s` has positions `< next` assigned.
    fn feasible_from(&self, s: &State, next: usize) -> bool {
        let m = self.m;
        let r = &s.residual;
        let sum_r: u64 = r.iter().map(|&x| x as u64).sum();
        if sum_r == 0 {
            return true;
        }
        if next >= self.members.len() {
            return false;
        }
        let budget = self.max_total - s.total;
        let max_r = *r.iter().max().unwrap() as u64;
        if max_r > budget {
            return false;
        }
        // the remaining subsets have at most m elements
        if sum_r.div_ceil(m as u64) > budget {
            return false;
        }
        let usable = |p: usize| {
            let (i, j) = self.pair_list[p];
            s.room[p].min(r[i]).min(r[j]) as u64
        };
        let pair_mass: u64 = (0..self.pair_list.len()).map(usable).sum();
        // Jensen on k(k-1)/2: covering sum_r with Y sets needs pair mass ≥ sum_r(sum_r - Y) / 2Y
        let jensen = (sum_r * sum_r).div_ceil(sum_r + 2 * pair_mass);
        if jensen > budget {
            return false;
        }
        let singletons_done = next >= m;
        if singletons_done {
            // every remaining subset containing i also contains some other vertex
            for i in 0..m {
                let reach: u64 = (0..m)
                    .filter(|&j| j != i)
                    .map(|j| usable(self.pair_index[i * m + j]))
                    .sum();
                if (r[i] as u64) > reach {
                    return false;
                }
            }
        }
        // Bonferroni: the union of the residual lists over T is at least
        // Σ r_i - Σ |pairwise overlaps|
        for t in 3u32..(1 << m) {
            if t.count_ones() < 2 {
                continue;
            }
            let mut lower: i64 = 0;
            for i in (0..m).filter(|&i| t >> i & 1 == 1) {
                lower += r[i] as i64;
                for j in (i + 1..m).filter(|&j| t >> j & 1 == 1) {
                    lower -= usable(self.pair_index[i * m + j]) as i64;
                }
            }
            if lower > budget as i64 {
                return false;
            }
        }
        true
    }

    fn feasible(&self, s: &State) -> bool {
        self.feasible_from(s, 0)
    }

    /// `false` when some vertex permutation maps the assigned prefix to a
    /// lexicographically smaller one.
    fn orbit_minimal(&self, s: &State, assigned: usize) -> bool {
        'perm: for map in &self.perms {
            for q in 0..assigned {
                let image = map[q];
                if image >= assigned {
                    continue 'perm;
                }
                match s.x[q].cmp(&s.x[image]) {
                    std::cmp::Ordering::Less => continue 'perm,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    /// Partial states with the singleton coordinates fixed, in lexicographic
    /// order. These are the independent work units.
    fn prefixes(&self, guard: &Guard) -> Result<Vec<State>> {
        let mut out = Vec::new();
        let mut s = State::root(self);
        self.collect_prefixes(&mut s, 0, guard, &mut out)?;
        Ok(out)
    }

    fn collect_prefixes(&self, s: &mut State, pos: usize, guard: &Guard, out: &mut Vec<State>) -> Result<()> {
        if pos == self.m {
            out.push(s.clone());
            return Ok(());
        }
        for value in 0..=self.upper(s, pos) {
            guard.tick()?;
            self.assign(s, pos, value);
            if self.feasible_from(s, pos + 1) && self.orbit_minimal(s, pos + 1) {
                self.collect_prefixes(s, pos + 1, guard, out)?;
            }
            self.unassign(s, pos);
        }
        Ok(())
    }

    /// Depth-first search from `pos`; on success `s` holds the solution.
    fn dfs(&self, s: &mut State, pos: usize, guard: &Guard) -> Result<bool> {
        if pos == self.members.len() {
            return Ok(s.residual.iter().all(|&r| r == 0));
        }
        for value in 0..=self.upper(s, pos) {
            guard.tick()?;
            self.assign(s, pos, value);
            if self.feasible_from(s, pos + 1) && self.orbit_minimal(s, pos + 1) && self.dfs(s, pos + 1, guard)? {
                return Ok(true);
            }
            self.unassign(s, pos);
        }
        Ok(false)
    }
}

/// Known closed forms, when `(n, a, b)` falls under one.
pub fn closed_form(n: usize, a: u32, b: u32) -> Option<u32> {
    if b == 0 || a < b {
        return None;
    }
    let (a64, b64, n64) = (a as i64, b as i64, n as i64);
    if n == 2 {
        // two lists sharing c colors span 2a - c
        return Some(a.min(2 * (a - b)));
    }
    if n == 3 {
        return Some(if a < 2 * b {
            a - b
        } else if a < 3 * b {
            2 * a - 3 * b
        } else {
            a
        });
    }
    if n < 3 {
        return None;
    }
    if a <= 2 * b {
        return Some((2 * (a64 - b64) / (n64 - 1)) as u32);
    }
    if (n64 - 1) * b64 <= a64 && a64 <= n64 * b64 {
        return Some((2 * a64 - n64 * b64) as u32);
    }
    if a64 >= n64 * b64 {
        return Some(a);
    }
    None
}

/// Exact `sep(K_n, a, b)`.
pub fn sep(q: SepQuery, opts: &SearchOptions) -> Result<SepResult> {
    let SepQuery { n, a, b } = q;
    SepQuery::new(n, a, b)?;
    if n > opts.max_n {
        return Err(Error::BudgetExceeded(format!("n = {n} above the search cap {}", opts.max_n)));
    }
    // least c with a counter-example on some K_m, and that counter-example
    let m_top = opts.max_m.map_or(n, |m| m.min(n));
    let mut best: Option<(u32, PIVector)> = None;
    for m in 2..=m_top {
        let hi = best.as_ref().map_or(a, |(c, _)| c - 1);
        if hi == 0 {
            break;
        }
        let Some(mut witness) = find_counterexample(m, a, b, hi, opts)? else {
            continue;
        };
        // feasibility is monotone in c: invariant lo infeasible, hi feasible
        let (mut lo, mut hi) = (0u32, hi);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            match find_counterexample(m, a, b, mid, opts)? {
                Some(v) => {
                    hi = mid;
                    witness = v;
                }
                None => lo = mid,
            }
        }
        // the stored witness may come from a larger c: take the one at hi
        if witness.max_pair_intersection() != hi as u64 {
            witness = find_counterexample(m, a, b, hi, opts)?.expect("feasible at hi");
        }
        best = Some((hi, witness));
    }
    let (value, counterexample) = match best {
        Some((c, v)) => (c - 1, Some(v.pad(n, a)?)),
        None => (a, None),
    };
    // how was choosability at `value` established?
    let mut root_only = true;
    if value >= 1 {
        for m in 2..=m_top {
            let (found, at_root) = find_counterexample_traced(m, a, b, value, opts)?;
            debug_assert!(found.is_none());
            root_only &= at_root;
        }
    }
    Ok(SepResult {
        n,
        a,
        b,
        value,
        counterexample,
        certificate_kind: if root_only { CertificateKind::AmplitudeBound } else { CertificateKind::Exhaustive },
        closed_form: closed_form(n, a, b),
    })
}

/// `sep` over many queries; results come back in query order.
pub fn sep_grid(queries: &[SepQuery], opts: &SearchOptions) -> Vec<Result<SepResult>> {
    // parallelism goes to the grid, each point searches sequentially
    let inner = SearchOptions { exec: Exec::Sequential, ..opts.clone() };
    opts.exec.map(queries, |&q| sep(q, &inner))
}

/// Upper bound on `sep` from symmetric counter-examples only: one less than
/// the least pair intersection of a symmetric `a`-uniform vector with total
/// mass below `n·b`.
pub fn sep_symmetric(q: SepQuery) -> Result<u32> {
    let SepQuery { n, a, b } = q;
    SepQuery::new(n, a, b)?;
    if n > 12 {
        return Err(Error::BudgetExceeded(format!("n = {n} above the symmetric cap 12")));
    }
    let size_w: Vec<u64> = (1..=n).map(|i| binom(n as u64 - 1, i as u64 - 1)).collect();
    let pair_w: Vec<u64> = (1..=n).map(|i| if i >= 2 { binom(n as u64 - 2, i as u64 - 2) } else { 0 }).collect();
    let mass_w: Vec<u64> = (1..=n).map(|i| binom(n as u64, i as u64)).collect();
    let max_mass = n as u64 * b as u64 - 1;
    let mut best: Option<u64> = None;
    sym_walk(&size_w, &pair_w, &mass_w, n, a as u64, 0, max_mass, &mut best);
    Ok(match best {
        Some(c) => (c - 1) as u32,
        None => a,
    })
}

#[allow(clippy::too_many_arguments)]
fn sym_walk(size_w: &[u64], pair_w: &[u64], mass_w: &[u64], i: usize, left: u64, pair: u64, mass_left: u64, best: &mut Option<u64>) {
    if best.is_some_and(|b| pair >= b) {
        return;
    }
    if i == 0 {
        if left == 0 {
            *best = Some(pair);
        }
        return;
    }
    let k = i - 1;
    let max_x = (left / size_w[k]).min(mass_left / mass_w[k]);
    for x in 0..=max_x {
        sym_walk(size_w, pair_w, mass_w, k, left - x * size_w[k], pair + x * pair_w[k], mass_left - x * mass_w[k], best);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub a: u32,
    pub b: u32,
    pub p: u32,
    pub sep: u32,
    pub conjectured: i64,
    pub epsilon: i64,
    /// `true` when epsilon lies outside {-1, 0}.
    pub deviates: bool,
}

/// Conjectured value `⌈(2pa − p(p+1)b) / (n−1)⌉` for `pb ≤ a < (p+1)b`.
pub fn conjectured_sep(n: usize, a: u32, b: u32, p: u32) -> i64 {
    let num = 2 * p as i64 * a as i64 - (p as i64) * (p as i64 + 1) * b as i64;
    num.div_euclid(n as i64 - 1) + i64::from(num.rem_euclid(n as i64 - 1) != 0)
}

/// Tabulates exact `sep` against the conjectured formula for every
/// `(a, b, p)` with `2 ≤ p ≤ n−2`, `pb ≤ a < (p+1)b`, `a ≤ a_max`, `b ≤ b_max`.
/// Purely empirical: deviations are flagged, not treated as errors.
pub fn conjecture_scan(n: usize, a_max: u32, b_max: u32, opts: &SearchOptions) -> Result<Vec<ScanRow>> {
    let mut cells = Vec::new();
    for b in 1..=b_max {
        for p in 2..=(n as u32).saturating_sub(2) {
            for a in p * b..((p + 1) * b).min(a_max + 1) {
                cells.push((SepQuery::new(n, a, b)?, p));
            }
        }
    }
    cells.sort_by_key(|(q, _)| (q.b, q.a));
    let queries: Vec<SepQuery> = cells.iter().map(|(q, _)| *q).collect();
    let results = sep_grid(&queries, opts);
    cells
        .iter()
        .zip(results)
        .map(|((q, p), r)| {
            let value = r?.value;
            let conjectured = conjectured_sep(n, q.a, q.b, *p);
            let epsilon = value as i64 - conjectured;
            Ok(ScanRow { n, a: q.a, b: q.b, p: *p, sep: value, conjectured, epsilon, deviates: !(-1..=0).contains(&epsilon) })
        })
        .collect()
}
