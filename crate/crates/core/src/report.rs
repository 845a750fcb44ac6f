//! Tester verdicts and the witnesses that justify a rejection.

use std::fmt;

use crate::geometry::simplex::CentredSimplex;
use crate::grid::{FunctionSource, GridPoint};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

/// Three collinear points, the middle one strictly between the others, on
/// which the function is not convex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleWitness {
    pub points: [GridPoint; 3],
    pub values: [ExactScalar; 3],
}

impl TripleWitness {
    /// Position `r` of the middle point with `p1 = p0 + r (p2 - p0)`, if the
    /// points are collinear with `0 < r < 1`.
    fn middle_position(&self) -> Option<ExactScalar> {
        let [p0, p1, p2] = &self.points;
        let d = p0.dimension();
        if p1.dimension() != d || p2.dimension() != d {
            return None;
        }
        let c = (0..d).find(|&c| p2.coords()[c] != p0.coords()[c])?;
        let r = ExactScalar::ratio(p1.coords()[c] - p0.coords()[c], p2.coords()[c] - p0.coords()[c]).ok()?;
        let on_line = (0..d).all(|i| {
            let expect = ExactScalar::from(p0.coords()[i])
                + &r * &ExactScalar::from(p2.coords()[i] - p0.coords()[i]);
            expect == ExactScalar::from(p1.coords()[i])
        });
        (on_line && r.is_positive() && r < ExactScalar::one()).then_some(r)
    }

    /// Whether the recorded values violate convexity along the segment.
    pub fn is_violation(&self) -> bool {
        let Some(r) = self.middle_position() else {
            return false;
        };
        let [f0, f1, f2] = &self.values;
        let chord = (ExactScalar::one() - &r) * f0 + &r * f2;
        f1 > &chord
    }
}

/// A minimiser audit that failed: bisection over the averaged column sums
/// `g(δ) = (f(0, x - δ) + f(2, x + δ)) / 2` returned `δ*`, yet a neighbour
/// has a strictly smaller value. Bisection is exact on convex sequences, so
/// `g` and hence one of the outer columns is not convex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditWitness {
    /// Twice the half-integer argument `x`.
    pub x_twice: i64,
    /// Column length.
    pub n: usize,
    pub argmin_twice: i64,
    pub neighbour_twice: i64,
    pub argmin_value: ExactScalar,
    pub neighbour_value: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Triple(TripleWitness),
    Simplex {
        simplex: CentredSimplex,
        centre_value: ExactScalar,
        vertex_values: Vec<ExactScalar>,
    },
    MinimumAudit(AuditWitness),
}

impl Witness {
    /// Re-checks the witness against `source`: recorded values must match and
    /// must violate convexity.
    pub fn verify(&self, source: &dyn FunctionSource) -> bool {
        let value = |p: &GridPoint| -> Option<ExactScalar> {
            source.domain().contains(p.coords()).then(|| source.value_at(p.coords()))
        };
        match self {
            Witness::Triple(t) => {
                t.points.iter().zip(&t.values).all(|(p, v)| value(p).as_ref() == Some(v))
                    && t.is_violation()
            }
            Witness::Simplex { simplex, centre_value, vertex_values } => {
                simplex.validate().is_ok()
                    && value(&simplex.centre).as_ref() == Some(centre_value)
                    && simplex.vertices.len() == vertex_values.len()
                    && simplex.vertices.iter().zip(vertex_values).all(|(p, v)| value(p).as_ref() == Some(v))
                    && {
                        let combined: ExactScalar =
                            simplex.barycentric.iter().zip(vertex_values).map(|(l, v)| l * v).sum();
                        centre_value > &combined
                    }
            }
            Witness::MinimumAudit(a) => crate::stripe_tester::verify_audit(source, a),
        }
    }
}

fn half(twice: i64) -> ExactScalar {
    ExactScalar::ratio(twice, 2).expect("nonzero denominator")
}

impl fmt::Display for Witness {
    /// Single-line form without commas, for CSV cells.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Triple(t) => {
                write!(f, "triple")?;
                for (p, v) in t.points.iter().zip(&t.values) {
                    write!(f, " {p}={v}")?;
                }
                Ok(())
            }
            Witness::Simplex { simplex, centre_value, vertex_values } => {
                write!(f, "simplex {}={centre_value} >", simplex.centre)?;
                for ((p, l), v) in simplex.vertices.iter().zip(&simplex.barycentric).zip(vertex_values) {
                    write!(f, " {l}*{p}={v}")?;
                }
                Ok(())
            }
            Witness::MinimumAudit(a) => write!(
                f,
                "audit x={} g({})={} > g({})={}",
                half(a.x_twice),
                half(a.argmin_twice),
                a.argmin_value,
                half(a.neighbour_twice),
                a.neighbour_value
            ),
        }
    }
}

/// Outcome of one tester run. Counters are read from the oracle at the end of
/// the run, so a fresh oracle gives per-run figures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub rounds_used: u64,
    pub query_total: u64,
    pub query_distinct: u64,
    pub samples_used: u64,
}
