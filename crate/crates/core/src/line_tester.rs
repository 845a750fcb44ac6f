//! Triple tests and convexity testers for functions on the line `[n]`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::line::triple_convex_unchecked;
use crate::grid::{GridFunction, GridPoint};
use crate::oracle::QueryOracle;
use crate::report::{TestReport, TripleWitness, Verdict, Witness};
use crate::rng::Rng;
use crate::scalar::ExactScalar;

/// Rounds constant used when none is configured.
pub const DEFAULT_CONST_C: f64 = 40.0;

/// A triple `(root, hub, third)` with `hub` a multiple of `height` adjacent
/// to the root, and `third` either `root + 1` or `hub + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TripleTest {
    pub root: i64,
    pub hub: i64,
    pub third: i64,
    pub height: i64,
}

impl TripleTest {
    pub fn sorted(&self) -> [i64; 3] {
        let mut t = [self.root, self.hub, self.third];
        t.sort_unstable();
        t
    }

    /// Checks the structural invariants for root tests on `[n]`.
    pub fn is_valid(&self, n: usize) -> bool {
        let (a, b, c, h) = (self.root, self.hub, self.third, self.height);
        let n = n as i64;
        h >= 1
            && h < n
            && h.count_ones() == 1
            && (b == lower_hub(a, h) || b == upper_hub(a, h))
            && (c == a + 1 || c == b + 1)
            && a != b
            && b != c
            && a != c
            && [a, b, c].iter().all(|&v| (0..n).contains(&v))
    }
}

/// Largest multiple of `h` strictly below `a`.
fn lower_hub(a: i64, h: i64) -> i64 {
    h * (a - 1).div_euclid(h)
}

/// Smallest multiple of `h` strictly above `a`.
fn upper_hub(a: i64, h: i64) -> i64 {
    h * (a + h).div_euclid(h)
}

fn in_range(v: i64, n: usize) -> bool {
    v >= 0 && (v as u64) < n as u64
}

/// Every triple test rooted at `a` with height below `n` (and at most
/// `max_height` if given). Candidates leaving `[n]` or repeating a point are
/// dropped. The same triple may appear under several heights.
pub fn enumerate_triple_tests(a: i64, n: usize, max_height: Option<i64>) -> Result<Vec<TripleTest>> {
    if !in_range(a, n) {
        return Err(Error::invalid(format!("root {a} outside [0, {n})")));
    }
    let mut out: Vec<TripleTest> = Vec::new();
    let mut h: i64 = 1;
    while (h as u64) < n as u64 && max_height.is_none_or(|m| h <= m) {
        for b in [lower_hub(a, h), upper_hub(a, h)] {
            for c in [a + 1, b + 1] {
                let t = TripleTest { root: a, hub: b, third: c, height: h };
                if !(in_range(b, n) && in_range(c, n) && a != b && b != c && a != c) {
                    continue;
                }
                out.push(t);
            }
        }
        h *= 2;
    }
    Ok(out)
}

fn check_sorted(t: [i64; 3], v: [&ExactScalar; 3]) -> bool {
    triple_convex_unchecked(t[0], t[1], t[2], v[0], v[1], v[2])
}

/// A failed triple test with the queried values, in sorted point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailedTest {
    pub test: TripleTest,
    pub points: [i64; 3],
    pub values: [ExactScalar; 3],
}

impl FailedTest {
    /// Witness with points built by `embed` (e.g. into a stripe column).
    pub fn witness(&self, embed: impl Fn(i64) -> GridPoint) -> Witness {
        Witness::Triple(TripleWitness {
            points: self.points.map(embed),
            values: self.values.clone(),
        })
    }
}

/// Runs every triple test rooted at `a` against the accessor `value`,
/// querying each point at most once. Returns the first failure.
pub fn run_triple_tests_with<E>(
    n: usize,
    a: i64,
    max_height: Option<i64>,
    mut value: impl FnMut(i64) -> std::result::Result<ExactScalar, E>,
) -> std::result::Result<Result<Option<FailedTest>>, E> {
    let tests = match enumerate_triple_tests(a, n, max_height) {
        Ok(t) => t,
        Err(e) => return Ok(Err(e)),
    };
    let mut memo: HashMap<i64, ExactScalar> = HashMap::new();
    for t in tests {
        let s = t.sorted();
        let mut vals = Vec::with_capacity(3);
        for x in s {
            let v = match memo.get(&x) {
                Some(v) => v.clone(),
                None => {
                    let v = value(x)?;
                    memo.insert(x, v.clone());
                    v
                }
            };
            vals.push(v);
        }
        if !check_sorted(s, [&vals[0], &vals[1], &vals[2]]) {
            let values: [ExactScalar; 3] = vals.try_into().expect("three values");
            return Ok(Ok(Some(FailedTest { test: t, points: s, values })));
        }
    }
    Ok(Ok(None))
}

/// Runs the triple tests rooted at `a` through a line oracle.
pub fn run_triple_tests(oracle: &mut QueryOracle<'_>, a: i64, max_height: Option<i64>) -> Result<Option<FailedTest>> {
    let n = line_length(oracle)?;
    run_triple_tests_with(n, a, max_height, |x| oracle.query(&[x]))?
}

fn line_length(oracle: &QueryOracle<'_>) -> Result<usize> {
    let dims = oracle.domain().dims();
    if dims.len() != 1 {
        return Err(Error::invalid(format!("expected a line domain, got dimensions {dims:?}")));
    }
    Ok(dims[0])
}

/// A hub shared by `x` and `y` (with `x < y - 1`) of height at most
/// `2 (y - x)`, returned as `(hub, height)`.
pub fn common_hub(x: i64, y: i64) -> Result<(i64, i64)> {
    if x >= y - 1 {
        return Err(Error::invalid(format!("common hub needs x < y - 1, got x={x}, y={y}")));
    }
    let gap = (y - x) as u64;
    let k = 63 - gap.leading_zeros() as i64;
    let multiples = |h: i64| -> Vec<i64> {
        let first = upper_hub(x, h);
        (0..).map(|i| first + i * h).take_while(|&m| m < y).collect()
    };
    let h = 1i64 << k;
    let found = multiples(h);
    let (hub, height) = match found.len() {
        1 => (found[0], h),
        2 => {
            let m = multiples(2 * h);
            debug_assert_eq!(m.len(), 1);
            (m[0], 2 * h)
        }
        // only when y - x = h and x is a multiple of h
        _ => (x + h / 2, h / 2),
    };
    Ok((hub, height))
}

/// For a non-convex triple `x < y < z` of `f`, a root among `x, y, z` together
/// with one of its triple tests that fails, of height at most
/// `2 max(y - x, z - y)`.
///
/// Hubs `h` of `(x, y)` and `h'` of `(y, z)` split `x <= h < y < h' <= z`; one
/// of the consecutive triples of that sequence is non-convex, and each case
/// refines to a failing test through `h + 1`, `y + 1` or `h' + 1`.
pub fn locate_failing_root(f: &GridFunction, x: i64, y: i64, z: i64) -> Result<(i64, TripleTest)> {
    let vals = f.line_values()?;
    let n = vals.len();
    if !(x < y && y < z) || !in_range(x, n) || !in_range(z, n) {
        return Err(Error::invalid(format!("({x}, {y}, {z}) is not an increasing triple in [0, {n})")));
    }
    let v = |i: i64| &vals[i as usize];
    let violates = |a: i64, b: i64, c: i64| !check_sorted([a, b, c], [v(a), v(b), v(c)]);
    if !violates(x, y, z) {
        return Err(Error::invalid(format!("f is convex on ({x}, {y}, {z})")));
    }
    let test = |root: i64, hub: i64, third: i64, height: i64| (root, TripleTest { root, hub, third, height });
    if y == x + 1 && z == y + 1 {
        return Ok(test(x, y, z, 1));
    }
    let (h, hh) = if y == x + 1 { (x, 1) } else { common_hub(x, y)? };
    let (h2, hh2) = if z == y + 1 { (z, 1) } else { common_hub(y, z)? };
    if h != x && violates(x, h, y) {
        return Ok(if violates(x, h, h + 1) { test(x, h, h + 1, hh) } else { test(y, h, h + 1, hh) });
    }
    if violates(h, y, h2) {
        return Ok(if violates(h, y, y + 1) { test(y, h, y + 1, hh) } else { test(y, h2, y + 1, hh2) });
    }
    if h2 != z && violates(y, h2, z) {
        return Ok(if violates(y, h2, h2 + 1) { test(y, h2, h2 + 1, hh2) } else { test(z, h2, h2 + 1, hh2) });
    }
    Err(Error::Arithmetic(format!(
        "no violating sub-triple found for ({x}, {y}, {z}); the function values are inconsistent"
    )))
}

/// Whether `a` passes every triple test rooted at it, evaluated directly on `f`.
pub fn passes_all_tests(f: &GridFunction, a: i64) -> Result<bool> {
    let vals = f.line_values()?;
    let failed = run_triple_tests_with::<std::convert::Infallible>(vals.len(), a, None, |x| {
        Ok(vals[x as usize].clone())
    });
    match failed {
        Ok(r) => Ok(r?.is_none()),
        Err(e) => match e {},
    }
}

/// Points of `[n]` that pass all their triple tests; `f` restricted to them
/// is convex.
pub fn passing_set(f: &GridFunction) -> Result<Vec<i64>> {
    let n = f.line_values()?.len() as i64;
    let mut out = Vec::new();
    for a in 0..n {
        if passes_all_tests(f, a)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// Greedily collects roots that fail a test: repeatedly take the first
/// non-convex consecutive triple of the surviving points, locate a failing
/// root, and drop it, until `ceil(eps n)` roots are collected or the
/// survivors are convex. Each entry records the triple's largest gap.
pub fn greedy_failing_roots(f: &GridFunction, eps: &ExactScalar) -> Result<Vec<(TripleTest, i64)>> {
    let vals = f.line_values()?;
    let n = vals.len();
    let target = (eps * &ExactScalar::from(n as i64)).ceil();
    let mut alive: Vec<i64> = (0..n as i64).collect();
    let mut out = Vec::new();
    while num_bigint::BigInt::from(out.len()) < target {
        let Some(w) = alive.windows(3).find(|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            !check_sorted([a, b, c], [&vals[a as usize], &vals[b as usize], &vals[c as usize]])
        }) else {
            break;
        };
        let (x, y, z) = (w[0], w[1], w[2]);
        let (root, test) = locate_failing_root(f, x, y, z)?;
        out.push((test, (y - x).max(z - y)));
        alive.retain(|&p| p != root);
    }
    Ok(out)
}

fn check_eps(eps: &ExactScalar) -> Result<()> {
    if !eps.is_positive() || eps >= &ExactScalar::one() {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

/// `ceil(log2(2 eps n))`, exactly; zero when `2 eps n <= 1`.
pub fn max_height_exponent(eps: &ExactScalar, n: usize) -> u32 {
    let target = ExactScalar::from(2 * n as i64) * eps;
    let mut k = 0u32;
    let mut p = ExactScalar::one();
    while p < target {
        p = p * ExactScalar::from(2);
        k += 1;
    }
    k
}

/// `ceil(C (log2(2 eps n) + 1) / eps)`.
pub fn default_rounds_1d(eps: &ExactScalar, n: usize, const_c: f64) -> u64 {
    let e = eps.to_f64();
    let l = (2.0 * e * n as f64).log2().max(0.0);
    (const_c * (l + 1.0) / e).ceil() as u64
}

/// `ceil(C / eps)`.
pub fn default_rounds_df(eps: &ExactScalar, const_c: f64) -> u64 {
    (const_c / eps.to_f64()).ceil() as u64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TesterConfig {
    /// Explicit round count; when absent it is derived from `const_c`.
    pub rounds: Option<u64>,
    pub const_c: f64,
}

impl Default for TesterConfig {
    fn default() -> Self {
        TesterConfig { rounds: None, const_c: DEFAULT_CONST_C }
    }
}

fn report(oracle: &QueryOracle<'_>, rounds: u64, witness: Option<Witness>) -> TestReport {
    TestReport {
        verdict: if witness.is_some() { Verdict::Reject } else { Verdict::Accept },
        witness,
        rounds_used: rounds,
        query_total: oracle.query_total(),
        query_distinct: oracle.query_distinct(),
        samples_used: oracle.samples_used(),
    }
}

/// One round of the uniform tester: a random root, a random height up to
/// `2^max_k`, a random side for the hub and a random third point. Rounds whose
/// triple leaves `[n]` or repeats a point pass without querying.
pub fn one_round_1d(oracle: &mut QueryOracle<'_>, n: usize, max_k: u32, rng: &mut Rng) -> Result<Option<Witness>> {
    let a = rng.uniform(n as u64) as i64;
    let k = rng.uniform(max_k as u64 + 1) as u32;
    let h = 1i64 << k.min(62);
    let b = if rng.coin() { lower_hub(a, h) } else { upper_hub(a, h) };
    let c = if rng.coin() { a + 1 } else { b + 1 };
    if !(in_range(b, n) && in_range(c, n) && a != b && b != c && a != c) {
        return Ok(None);
    }
    let mut t = [a, b, c];
    t.sort_unstable();
    let vals = [oracle.query(&[t[0]])?, oracle.query(&[t[1]])?, oracle.query(&[t[2]])?];
    if check_sorted(t, [&vals[0], &vals[1], &vals[2]]) {
        Ok(None)
    } else {
        Ok(Some(Witness::Triple(TripleWitness {
            points: t.map(|x| GridPoint::new(vec![x])),
            values: vals,
        })))
    }
}

/// Non-adaptive tester for functions on `[n]` under the uniform distribution.
/// Never rejects a convex function; stops at the first violated triple.
pub fn convexity_test_1d(
    oracle: &mut QueryOracle<'_>,
    eps: &ExactScalar,
    rng: &mut Rng,
    config: TesterConfig,
) -> Result<TestReport> {
    let n = line_length(oracle)?;
    check_eps(eps)?;
    if eps * &ExactScalar::from(n as i64) < ExactScalar::one() {
        return Err(Error::invalid(format!("eps must be at least 1/n = 1/{n}, got {eps}")));
    }
    let max_k = max_height_exponent(eps, n);
    let rounds = config.rounds.unwrap_or_else(|| default_rounds_1d(eps, n, config.const_c));
    for r in 1..=rounds {
        if let Some(w) = one_round_1d(oracle, n, max_k, rng)? {
            return Ok(report(oracle, r, Some(w)));
        }
    }
    Ok(report(oracle, rounds, None))
}

/// Distribution-free tester: each round samples a root from the oracle's
/// distribution and runs all triple tests rooted there.
pub fn convexity_test_1d_distribution_free(
    oracle: &mut QueryOracle<'_>,
    eps: &ExactScalar,
    rng: &mut Rng,
    config: TesterConfig,
) -> Result<TestReport> {
    let n = line_length(oracle)?;
    check_eps(eps)?;
    let rounds = config.rounds.unwrap_or_else(|| default_rounds_df(eps, config.const_c));
    for r in 1..=rounds {
        let a = oracle.sample(rng)?.coords()[0];
        if let Some(failed) = run_triple_tests_with(n, a, None, |x| oracle.query(&[x]))?? {
            let w = failed.witness(|x| GridPoint::new(vec![x]));
            return Ok(report(oracle, r, Some(w)));
        }
    }
    Ok(report(oracle, rounds, None))
}
