//! Adaptive distribution-free convexity tester on the stripe `[3] x [n]`.
//!
//! Columns are `f_i(x) = f(i, x)`. The outer columns are checked with triple
//! tests; the middle column is compared against
//! `h(y) = min_δ (f_0(y - δ) + f_2(y + δ)) / 2` on half-integers `y`, which is
//! evaluated by bisection over `δ` and audited locally.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::bisection::try_bisection_min;
use crate::geometry::simplex::CentredSimplex;
use crate::grid::{FunctionSource, GridPoint};
use crate::line_tester::{default_rounds_df, run_triple_tests_with, TesterConfig};
use crate::oracle::QueryOracle;
use crate::report::{AuditWitness, TestReport, Verdict, Witness};
use crate::rng::Rng;
use crate::scalar::ExactScalar;

/// `twice / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub fn from_integer(x: i64) -> Self {
        HalfInteger { twice: 2 * x }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_scalar(self) -> ExactScalar {
        ExactScalar::ratio(self.twice, 2).expect("nonzero denominator")
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `h(y)` with the outer-column points `(0, u)` and `(2, v)`, `u + v = 2y`,
/// attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HValue {
    pub value: ExactScalar,
    pub u: i64,
    pub v: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Pass(T),
    Reject(Witness),
}

/// Control flow inside a round: a rejection or a genuine error both stop it.
enum Stop {
    Reject(Witness),
    Error(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Error(e)
    }
}

type Flow<T> = std::result::Result<T, Stop>;

fn stripe_length(oracle: &QueryOracle<'_>) -> Result<usize> {
    match oracle.domain().dims() {
        [3, n] => Ok(*n),
        dims => Err(Error::invalid(format!("expected a [3] x [n] domain, got dimensions {dims:?}"))),
    }
}

/// Admissible `u = y - δ` for the half-integer `2y = twice`: both `u` and
/// `2y - u` in `[0, n)`. Ascending `δ` is descending `u`.
pub fn u_range(twice: i64, n: usize) -> Option<(i64, i64)> {
    let last = n as i64 - 1;
    let lo = (twice - last).max(0);
    let hi = twice.min(last);
    (lo <= hi).then_some((lo, hi))
}

fn half_sum(a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
    (a + b) * ExactScalar::ratio(1, 2).expect("nonzero denominator")
}

fn simplex_witness(
    vertices: Vec<GridPoint>,
    centre: GridPoint,
    barycentric: Vec<ExactScalar>,
    centre_value: ExactScalar,
    vertex_values: Vec<ExactScalar>,
) -> Flow<Witness> {
    let simplex = CentredSimplex::new(vertices, centre, barycentric)?;
    Ok(Witness::Simplex { simplex, centre_value, vertex_values })
}

/// Which sub-check of a round ran and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    OneD { column: i64, root: i64, passed: bool },
    Evaluate { x: HalfInteger, value: Option<ExactScalar> },
    BelowH { passed: bool },
    BetaMinus { minimum: Option<ExactScalar> },
    BetaPlus { minimum: Option<ExactScalar> },
}

/// Everything one round did, for inspection and replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrace {
    pub point: GridPoint,
    pub checks: Vec<Check>,
    pub query_total: u64,
    pub witness: Option<Witness>,
}

/// State of one round: memoised `h` values and 1D tests that already passed.
struct Round<'o, 'a> {
    oracle: &'o mut QueryOracle<'a>,
    n: usize,
    h_memo: HashMap<i64, HValue>,
    passed: HashSet<(i64, i64)>,
    checks: Vec<Check>,
}

impl<'o, 'a> Round<'o, 'a> {
    fn new(oracle: &'o mut QueryOracle<'a>, n: usize) -> Self {
        Round { oracle, n, h_memo: HashMap::new(), passed: HashSet::new(), checks: Vec::new() }
    }

    fn query(&mut self, i: i64, x: i64) -> Result<ExactScalar> {
        self.oracle.query(&[i, x])
    }

    fn one_d(&mut self, column: i64, root: i64) -> Flow<()> {
        if root < 0 || root >= self.n as i64 || self.passed.contains(&(column, root)) {
            return Ok(());
        }
        let oracle = &mut *self.oracle;
        let failed = run_triple_tests_with(self.n, root, None, |x| oracle.query(&[column, x]))??;
        self.checks.push(Check::OneD { column, root, passed: failed.is_none() });
        match failed {
            None => {
                self.passed.insert((column, root));
                Ok(())
            }
            Some(f) => Err(Stop::Reject(f.witness(|x| GridPoint::new(vec![column, x])))),
        }
    }

    fn g(&mut self, twice: i64, u: i64) -> Result<ExactScalar> {
        let a = self.query(0, u)?;
        let b = self.query(2, twice - u)?;
        Ok(half_sum(&a, &b))
    }

    fn evaluate(&mut self, x: HalfInteger) -> Flow<HValue> {
        let twice = x.twice();
        if let Some(v) = self.h_memo.get(&twice) {
            return Ok(v.clone());
        }
        let (lo, hi) = u_range(twice, self.n)
            .ok_or_else(|| Error::invalid(format!("h is undefined at {x}")))?;
        let len = (hi - lo + 1) as usize;
        let best = try_bisection_min(len, |i| self.g(twice, hi - i as i64))?;
        let u = hi - best.index as i64;
        let v = twice - u;
        for y in [u - 1, u, u + 1] {
            self.one_d(0, y)?;
        }
        for y in [v - 1, v, v + 1] {
            self.one_d(2, y)?;
        }
        // δ ± 1 moves u by ∓1
        for nu in [u + 1, u - 1] {
            if nu < lo || nu > hi {
                continue;
            }
            let other = self.g(twice, nu)?;
            if other < best.value {
                self.checks.push(Check::Evaluate { x, value: None });
                return Err(Stop::Reject(Witness::MinimumAudit(AuditWitness {
                    x_twice: twice,
                    n: self.n,
                    argmin_twice: twice - 2 * u,
                    neighbour_twice: twice - 2 * nu,
                    argmin_value: best.value,
                    neighbour_value: other,
                })));
            }
        }
        let h = HValue { value: best.value, u, v };
        self.checks.push(Check::Evaluate { x, value: Some(h.value.clone()) });
        self.h_memo.insert(twice, h.clone());
        Ok(h)
    }

    /// Minimises `h - β` over `2y` in `[lo_twice, hi_twice]`, where `β` is
    /// affine through `(x, fx)` and `(anchor, f_anchor)`, `anchor = x ± 1`.
    /// A negative minimum gives a simplex centred at `(1, x)`.
    fn beta_check(
        &mut self,
        x: i64,
        fx: &ExactScalar,
        anchor: i64,
        f_anchor: &ExactScalar,
        lo_twice: i64,
        hi_twice: i64,
    ) -> Flow<ExactScalar> {
        // β(y) = fx + (y - x)(fx - f_anchor) / (x - anchor)
        let slope = (fx - f_anchor) * ExactScalar::from(x - anchor);
        let beta = |y: &ExactScalar| fx + &((y - &ExactScalar::from(x)) * &slope);
        let len = (hi_twice - lo_twice + 1) as usize;
        let best = try_bisection_min(len, |i| -> Flow<ExactScalar> {
            let y = HalfInteger::from_twice(lo_twice + i as i64);
            let h = self.evaluate(y)?;
            Ok(&h.value - &beta(&y.to_scalar()))
        })?;
        if !best.value.is_negative() {
            return Ok(best.value);
        }
        let y = HalfInteger::from_twice(lo_twice + best.index as i64);
        let h = self.h_memo.get(&y.twice()).cloned().expect("evaluated during the search");
        // centre (1, x) = μ (1, anchor) + (1 - μ) (1, y)
        let dist = (y.to_scalar() - ExactScalar::from(x)).abs();
        let mu = &dist / &(&dist + &ExactScalar::one());
        let rest = (ExactScalar::one() - &mu) * ExactScalar::ratio(1, 2).expect("nonzero");
        let f0 = self.query(0, h.u)?;
        let f2 = self.query(2, h.v)?;
        let w = simplex_witness(
            vec![GridPoint::new(vec![1, anchor]), GridPoint::new(vec![0, h.u]), GridPoint::new(vec![2, h.v])],
            GridPoint::new(vec![1, x]),
            vec![mu, rest.clone(), rest],
            fx.clone(),
            vec![f_anchor.clone(), f0, f2],
        )?;
        Err(Stop::Reject(w))
    }

    fn run(&mut self, i: i64, x: i64) -> Flow<()> {
        let n = self.n as i64;
        self.one_d(i, x)?;
        if i != 1 {
            return Ok(());
        }
        let h = self.evaluate(HalfInteger::from_integer(x))?;
        let fx = self.query(1, x)?;
        let below = fx <= h.value;
        self.checks.push(Check::BelowH { passed: below });
        if !below {
            let half = ExactScalar::ratio(1, 2).expect("nonzero");
            let f0 = self.query(0, h.u)?;
            let f2 = self.query(2, h.v)?;
            let w = simplex_witness(
                vec![GridPoint::new(vec![0, h.u]), GridPoint::new(vec![2, h.v])],
                GridPoint::new(vec![1, x]),
                vec![half.clone(), half],
                fx,
                vec![f0, f2],
            )?;
            return Err(Stop::Reject(w));
        }
        self.one_d(1, x - 1)?;
        self.one_d(1, x + 1)?;
        if x < 1 || x > n - 2 {
            return Ok(());
        }
        let f_prev = self.query(1, x - 1)?;
        let f_next = self.query(1, x + 1)?;
        let m = self.beta_check(x, &fx, x - 1, &f_prev, 2 * x + 2, 2 * n - 2);
        self.checks.push(Check::BetaMinus { minimum: m.as_ref().ok().cloned() });
        m?;
        let m = self.beta_check(x, &fx, x + 1, &f_next, 0, 2 * x - 2);
        self.checks.push(Check::BetaPlus { minimum: m.as_ref().ok().cloned() });
        m?;
        Ok(())
    }
}

fn outcome<T>(r: Flow<T>) -> Result<Outcome<T>> {
    match r {
        Ok(v) => Ok(Outcome::Pass(v)),
        Err(Stop::Reject(w)) => Ok(Outcome::Reject(w)),
        Err(Stop::Error(e)) => Err(e),
    }
}

/// All triple tests rooted at `x` on column `i`.
pub fn one_d_test(oracle: &mut QueryOracle<'_>, i: i64, x: i64) -> Result<Outcome<()>> {
    let n = stripe_length(oracle)?;
    if !(0..3).contains(&i) || x < 0 || x >= n as i64 {
        return Err(Error::OutOfDomain { point: vec![i, x], dims: vec![3, n] });
    }
    outcome(Round::new(oracle, n).one_d(i, x))
}

/// `h(x)`, or a rejection if the outer columns are caught being non-convex.
pub fn evaluate_h(oracle: &mut QueryOracle<'_>, x: HalfInteger) -> Result<Outcome<HValue>> {
    let n = stripe_length(oracle)?;
    outcome(Round::new(oracle, n).evaluate(x))
}

/// One full round at the point `(i, x)`.
pub fn stripe_round(oracle: &mut QueryOracle<'_>, point: &GridPoint) -> Result<RoundTrace> {
    let n = stripe_length(oracle)?;
    oracle.domain().check(point.coords())?;
    let before = oracle.query_total();
    let (i, x) = (point.coords()[0], point.coords()[1]);
    let mut round = Round::new(oracle, n);
    let result = round.run(i, x);
    let checks = std::mem::take(&mut round.checks);
    let witness = match result {
        Ok(()) => None,
        Err(Stop::Reject(w)) => Some(w),
        Err(Stop::Error(e)) => return Err(e),
    };
    Ok(RoundTrace { point: point.clone(), checks, query_total: oracle.query_total() - before, witness })
}

/// Repeats `ceil(C / eps)` rounds at points sampled from the oracle's
/// distribution, stopping at the first rejection. Never rejects a convex
/// function.
pub fn convexity_test_stripe(
    oracle: &mut QueryOracle<'_>,
    eps: &ExactScalar,
    rng: &mut Rng,
    config: TesterConfig,
) -> Result<TestReport> {
    stripe_length(oracle)?;
    if !eps.is_positive() || eps >= &ExactScalar::one() {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let rounds = config.rounds.unwrap_or_else(|| default_rounds_df(eps, config.const_c));
    for r in 1..=rounds {
        let p = oracle.sample(rng)?;
        let trace = stripe_round(oracle, &p)?;
        if trace.witness.is_some() {
            return Ok(TestReport {
                verdict: Verdict::Reject,
                witness: trace.witness,
                rounds_used: r,
                query_total: oracle.query_total(),
                query_distinct: oracle.query_distinct(),
                samples_used: oracle.samples_used(),
            });
        }
    }
    Ok(TestReport {
        verdict: Verdict::Accept,
        witness: None,
        rounds_used: rounds,
        query_total: oracle.query_total(),
        query_distinct: oracle.query_distinct(),
        samples_used: oracle.samples_used(),
    })
}

/// Replays a minimum audit against `source`: the bisection must return the
/// recorded minimiser and the recorded neighbour must be strictly smaller.
pub(crate) fn verify_audit(source: &dyn FunctionSource, a: &AuditWitness) -> bool {
    if source.domain().dims() != [3, a.n] {
        return false;
    }
    let Some((lo, hi)) = u_range(a.x_twice, a.n) else {
        return false;
    };
    let g = |u: i64| half_sum(&source.value_at(&[0, u]), &source.value_at(&[2, a.x_twice - u]));
    let best = crate::geometry::bisection::bisection_min((hi - lo + 1) as usize, |i| g(hi - i as i64));
    let u = hi - best.index as i64;
    // neighbour δ differs by one, i.e. twice-δ by two
    let nu2 = a.x_twice - a.neighbour_twice;
    if nu2 % 2 != 0 {
        return false;
    }
    let nu = nu2 / 2;
    a.x_twice - 2 * u == a.argmin_twice
        && (nu - u).abs() == 1
        && (lo..=hi).contains(&nu)
        && best.value == a.argmin_value
        && g(nu) == a.neighbour_value
        && a.neighbour_value < a.argmin_value
}
