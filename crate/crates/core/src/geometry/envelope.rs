//! Lower convex envelope values and exact convexity decisions on grids.
//!
//! The envelope at `z` is the least value of `sum λ_i f(x_i)` over convex
//! combinations `sum λ_i x_i = z`, computed by one linear program. A function
//! is convex iff at every point the envelope of the remaining points is
//! either undefined or at least the function value: a combination that uses
//! `z` itself can be renormalised to one that does not.

use std::collections::HashSet;

use num_integer::Integer;

use super::line::triple_convex_unchecked;
use super::lp::{solve_lp, LpProblem, LpResult};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridPoint};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub value: ExactScalar,
    /// Indices into the input points with positive weight.
    pub weights: Vec<(usize, ExactScalar)>,
}

/// A point whose value exceeds the envelope of the other points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub centre: GridPoint,
    pub value: ExactScalar,
    pub envelope: ExactScalar,
    pub combination: Vec<(GridPoint, ExactScalar)>,
}

fn check_points(points: &[(GridPoint, ExactScalar)]) -> Result<usize> {
    let d = points
        .first()
        .map(|(p, _)| p.dimension())
        .ok_or_else(|| Error::invalid("envelope of an empty point set"))?;
    let mut seen = HashSet::with_capacity(points.len());
    for (p, _) in points {
        if p.dimension() != d {
            return Err(Error::invalid("points of mixed dimension"));
        }
        if !seen.insert(p) {
            return Err(Error::invalid(format!("repeated point {p}")));
        }
    }
    Ok(d)
}

fn envelope_unchecked(points: &[(&GridPoint, &ExactScalar)], z: &GridPoint) -> Result<Option<Envelope>> {
    let d = z.dimension();
    let mut rows = vec![vec![ExactScalar::one(); points.len()]];
    for c in 0..d {
        rows.push(points.iter().map(|(p, _)| ExactScalar::from(p.coords()[c])).collect());
    }
    let mut rhs = vec![ExactScalar::one()];
    rhs.extend(z.coords().iter().map(|&c| ExactScalar::from(c)));
    let objective = points.iter().map(|(_, v)| (*v).clone()).collect();
    match solve_lp(&LpProblem::new(objective, rows, rhs)?)? {
        LpResult::Infeasible => Ok(None),
        LpResult::Unbounded => Err(Error::Arithmetic("envelope program reported unbounded".into())),
        LpResult::Optimal { value, solution } => {
            let weights = solution
                .into_iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .collect();
            Ok(Some(Envelope { value, weights }))
        }
    }
}

/// Envelope of `points` at `z`, or `None` when `z` lies outside their hull.
pub fn envelope(points: &[(GridPoint, ExactScalar)], z: &GridPoint) -> Result<Option<Envelope>> {
    let d = check_points(points)?;
    if z.dimension() != d {
        return Err(Error::invalid("centre dimension differs from the points"));
    }
    let refs: Vec<_> = points.iter().map(|(p, v)| (p, v)).collect();
    envelope_unchecked(&refs, z)
}

pub fn envelope_value(points: &[(GridPoint, ExactScalar)], z: &GridPoint) -> Result<Option<ExactScalar>> {
    Ok(envelope(points, z)?.map(|e| e.value))
}

/// First point (in input order) where `f` exceeds the envelope of the others.
pub fn find_violation_points(points: &[(GridPoint, ExactScalar)]) -> Result<Option<Violation>> {
    check_points(points)?;
    for (i, (z, fz)) in points.iter().enumerate() {
        let others: Vec<(&GridPoint, &ExactScalar)> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (p, v))| (p, v))
            .collect();
        if others.is_empty() {
            continue;
        }
        if let Some(env) = envelope_unchecked(&others, z)? {
            if &env.value < fz {
                let combination = env
                    .weights
                    .iter()
                    .map(|(j, w)| (others[*j].0.clone(), w.clone()))
                    .collect();
                return Ok(Some(Violation {
                    centre: z.clone(),
                    value: fz.clone(),
                    envelope: env.value,
                    combination,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_convex_points(points: &[(GridPoint, ExactScalar)]) -> Result<bool> {
    Ok(find_violation_points(points)?.is_none())
}

pub fn find_grid_violation(f: &GridFunction) -> Result<Option<Violation>> {
    let points: Vec<(GridPoint, ExactScalar)> = f.entries().map(|(p, v)| (p, v.clone())).collect();
    find_violation_points(&points)
}

/// Exact convexity of a function on a grid of any dimension.
pub fn is_convex_grid(f: &GridFunction) -> Result<bool> {
    Ok(find_grid_violation(f)?.is_none())
}

/// Collinear lattice triple `(p, r, q)`, `r` strictly between `p` and `q`,
/// on which `f` is not convex.
pub fn find_line_violation(f: &GridFunction) -> Option<(GridPoint, GridPoint, GridPoint)> {
    let domain = f.domain();
    let values = f.values();
    let n = values.len();
    for i in 0..n {
        let p = domain.point_at(i);
        for j in i + 1..n {
            let q = domain.point_at(j);
            let diff: Vec<i64> = q.coords().iter().zip(p.coords()).map(|(a, b)| a - b).collect();
            let g = diff.iter().fold(0i64, |acc, &d| acc.gcd(&d));
            for t in 1..g {
                let r: Vec<i64> =
                    p.coords().iter().zip(&diff).map(|(&c, &d)| c + t * d / g).collect();
                let k = domain.index_of(&r).expect("segment stays inside a box");
                if !triple_convex_unchecked(0, t, g, &values[i], &values[k], &values[j]) {
                    return Some((p, GridPoint::new(r), q));
                }
            }
        }
    }
    None
}

/// Convexity along every lattice segment of the domain.
pub fn is_line_convex_grid(f: &GridFunction) -> bool {
    find_line_violation(f).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDomain;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn pv(c: &[i64], v: i64) -> (GridPoint, ExactScalar) {
        (GridPoint::new(c.to_vec()), ExactScalar::from(v))
    }

    /// The 3x3 table with value f(x, y) at row x, column y.
    fn table() -> GridFunction {
        let v = [5, 1, 3, 3, 2, 1, 1, 3, 5];
        GridFunction::new(
            GridDomain::new(vec![3, 3]).unwrap(),
            v.iter().map(|&x| ExactScalar::from(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn envelope_examples() {
        let pts = vec![pv(&[0], 0), pv(&[2], 2)];
        assert_eq!(envelope_value(&pts, &GridPoint::new(vec![1])).unwrap(), Some(ExactScalar::one()));
        assert_eq!(envelope_value(&pts, &GridPoint::new(vec![3])).unwrap(), None);
        assert_eq!(envelope_value(&pts, &GridPoint::new(vec![2])).unwrap(), Some(ExactScalar::from(2)));
        let tri = vec![pv(&[2, 0], 1), pv(&[0, 1], 1), pv(&[1, 2], 1)];
        let e = envelope(&tri, &GridPoint::new(vec![1, 1])).unwrap().unwrap();
        assert_eq!(e.value, ExactScalar::one());
        assert_eq!(e.weights.len(), 3);
        assert!(envelope(&[], &GridPoint::new(vec![0])).is_err());
        assert!(envelope(&[pv(&[0], 1), pv(&[0], 2)], &GridPoint::new(vec![0])).is_err());
    }

    #[test]
    fn interior_point_can_sit_below_its_value() {
        // z is a point of the set but not a hull vertex: envelope can be lower
        let pts = vec![pv(&[0], 0), pv(&[1], 5), pv(&[2], 0)];
        assert_eq!(envelope_value(&pts, &GridPoint::new(vec![1])).unwrap(), Some(ExactScalar::zero()));
    }

    #[test]
    fn three_by_three_table() {
        let f = table();
        let v = find_grid_violation(&f).unwrap().unwrap();
        assert_eq!(v.centre, GridPoint::new(vec![1, 1]));
        assert_eq!(v.envelope, ExactScalar::one());
        assert!(is_line_convex_grid(&f));
        assert!(!is_convex_grid(&f).unwrap());
    }

    #[test]
    fn affine_and_sum_functions() {
        let f = GridFunction::from_fn(GridDomain::cube(4, 2).unwrap(), |p| {
            ExactScalar::from(3 * p[0] - 2 * p[1] + 7)
        });
        assert!(is_convex_grid(&f).unwrap());
        let g = GridFunction::from_fn(GridDomain::cube(3, 2).unwrap(), |p| ExactScalar::from(p[0] + p[1]));
        assert!(is_line_convex_grid(&g));
    }

    #[test]
    fn line_convexity_matches_on_one_dimension() {
        let f = GridFunction::line_from_ints(&[0, 3, 4, 6]).unwrap();
        assert!(!is_convex_grid(&f).unwrap());
        assert!(!is_line_convex_grid(&f));
    }

    fn random_psd_quadratic(rng: &mut Rng, n: usize) -> GridFunction {
        // M = L L^T for a random integer L, plus a random linear term
        let l: Vec<i64> = (0..4).map(|_| rng.uniform_inclusive(-3, 3)).collect();
        let m = [
            l[0] * l[0] + l[1] * l[1],
            l[0] * l[2] + l[1] * l[3],
            l[2] * l[2] + l[3] * l[3],
        ];
        let (bx, by) = (rng.uniform_inclusive(-5, 5), rng.uniform_inclusive(-5, 5));
        GridFunction::from_fn(GridDomain::cube(n, 2).unwrap(), |p| {
            let (x, y) = (p[0], p[1]);
            ExactScalar::from(m[0] * x * x + 2 * m[1] * x * y + m[2] * y * y + bx * x + by * y)
        })
    }

    #[test]
    fn psd_quadratics_are_convex() {
        let mut rng = Rng::new(41);
        for _ in 0..10 {
            assert!(is_convex_grid(&random_psd_quadratic(&mut rng, 5)).unwrap());
        }
    }

    #[test]
    fn restriction_of_convex_is_convex() {
        let mut rng = Rng::new(42);
        for _ in 0..10 {
            let f = random_psd_quadratic(&mut rng, 5);
            let subset: Vec<(GridPoint, ExactScalar)> = f
                .entries()
                .filter(|_| rng.coin())
                .map(|(p, v)| (p, v.clone()))
                .collect();
            if !subset.is_empty() {
                assert!(is_convex_points(&subset).unwrap());
            }
        }
    }

    #[test]
    fn envelope_is_convex_over_the_hull() {
        let pts = vec![pv(&[0, 0], 4), pv(&[4, 0], 0), pv(&[0, 4], 2), pv(&[4, 4], 7), pv(&[2, 2], 5)];
        let dom = GridDomain::cube(5, 2).unwrap();
        let g = GridFunction::from_fn(dom, |p| {
            envelope_value(&pts, &GridPoint::new(p.to_vec())).unwrap().expect("inside the square")
        });
        assert!(is_convex_grid(&g).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn one_dimensional_decisions_agree(v in prop::collection::vec(-4i64..5, 1..9)) {
            let f = GridFunction::line_from_ints(&v).unwrap();
            prop_assert_eq!(
                is_convex_grid(&f).unwrap(),
                crate::geometry::line::is_convex_line(&f).unwrap()
            );
        }
    }
}
