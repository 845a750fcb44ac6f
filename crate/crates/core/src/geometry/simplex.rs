//! Centred simplices and the convexity criterion over minimal ones.
//!
//! Exhaustive enumeration; meant for small point sets, as a cross-check of
//! the envelope-based decision.

use itertools::Itertools;

use super::linalg::{rank, solve, Solution};
use super::lp::{solve_lp, LpProblem, LpResult};
use crate::error::{Error, Result};
use crate::grid::{GridDomain, GridFunction, GridPoint};
use crate::scalar::ExactScalar;

/// Affinely independent vertices with a centre of strictly positive
/// barycentric coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentredSimplex {
    pub vertices: Vec<GridPoint>,
    pub centre: GridPoint,
    pub barycentric: Vec<ExactScalar>,
}

/// Columns are the vertices lifted by a leading 1.
fn lifted(vertices: &[&GridPoint]) -> Vec<Vec<ExactScalar>> {
    let d = vertices[0].dimension();
    let mut rows = vec![vec![ExactScalar::one(); vertices.len()]];
    for c in 0..d {
        rows.push(vertices.iter().map(|v| ExactScalar::from(v.coords()[c])).collect());
    }
    rows
}

fn lifted_point(z: &GridPoint) -> Vec<ExactScalar> {
    let mut b = vec![ExactScalar::one()];
    b.extend(z.coords().iter().map(|&c| ExactScalar::from(c)));
    b
}

pub fn affinely_independent(vertices: &[&GridPoint]) -> bool {
    !vertices.is_empty() && rank(&lifted(vertices)) == vertices.len()
}

/// Barycentric coordinates of `z` with respect to affinely independent
/// vertices, if `z` lies in their affine hull.
pub fn barycentric_coordinates(vertices: &[&GridPoint], z: &GridPoint) -> Option<Vec<ExactScalar>> {
    match solve(&lifted(vertices), &lifted_point(z)) {
        Solution::Unique(l) => Some(l),
        _ => None,
    }
}

/// Membership of `w` in the convex hull of `vertices`, by LP feasibility.
pub fn in_convex_hull(vertices: &[&GridPoint], w: &GridPoint) -> Result<bool> {
    let problem = LpProblem::new(
        vec![ExactScalar::zero(); vertices.len()],
        lifted(vertices),
        lifted_point(w),
    )?;
    Ok(!matches!(solve_lp(&problem)?, LpResult::Infeasible))
}

impl CentredSimplex {
    pub fn new(vertices: Vec<GridPoint>, centre: GridPoint, barycentric: Vec<ExactScalar>) -> Result<Self> {
        let s = CentredSimplex { vertices, centre, barycentric };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() || self.vertices.len() != self.barycentric.len() {
            return Err(Error::invalid("simplex needs one weight per vertex"));
        }
        let d = self.centre.dimension();
        if self.vertices.iter().any(|v| v.dimension() != d) {
            return Err(Error::invalid("simplex vertices differ in dimension from the centre"));
        }
        if self.barycentric.iter().any(|l| !l.is_positive()) {
            return Err(Error::invalid("barycentric weights must be positive"));
        }
        if self.barycentric.iter().sum::<ExactScalar>() != ExactScalar::one() {
            return Err(Error::invalid("barycentric weights must sum to one"));
        }
        for c in 0..d {
            let s: ExactScalar = self
                .vertices
                .iter()
                .zip(&self.barycentric)
                .map(|(v, l)| l * &ExactScalar::from(v.coords()[c]))
                .sum();
            if s != ExactScalar::from(self.centre.coords()[c]) {
                return Err(Error::invalid("weights do not reproduce the centre"));
            }
        }
        let refs: Vec<&GridPoint> = self.vertices.iter().collect();
        if !affinely_independent(&refs) {
            return Err(Error::invalid("simplex vertices are affinely dependent"));
        }
        Ok(())
    }

    /// `sum λ_i f(x_i)` for a value accessor.
    pub fn combined_value(&self, mut value: impl FnMut(&GridPoint) -> ExactScalar) -> ExactScalar {
        self.vertices.iter().zip(&self.barycentric).map(|(v, l)| l * &value(v)).sum()
    }

    /// Whether `f(centre) <= sum λ_i f(x_i)`.
    pub fn is_satisfied(&self, mut value: impl FnMut(&GridPoint) -> ExactScalar) -> bool {
        let centre = value(&self.centre);
        centre <= self.combined_value(value)
    }
}

/// Every minimal centred simplex of `points` centred at `z`: no point of the
/// set other than the vertices and `z` lies in the simplex.
pub fn minimal_centred_simplices(points: &[GridPoint], z: &GridPoint) -> Result<Vec<CentredSimplex>> {
    let d = z.dimension();
    if points.iter().any(|p| p.dimension() != d) {
        return Err(Error::invalid("points of mixed dimension"));
    }
    let others: Vec<&GridPoint> = points.iter().filter(|p| *p != z).collect();
    let mut out = Vec::new();
    for k in 2..=(d + 1).min(others.len()) {
        for subset in others.iter().copied().combinations(k) {
            if !affinely_independent(&subset) {
                continue;
            }
            let Some(lambda) = barycentric_coordinates(&subset, z) else {
                continue;
            };
            if lambda.iter().any(|l| !l.is_positive()) {
                continue;
            }
            let mut minimal = true;
            for w in &others {
                if !subset.contains(w) && in_convex_hull(&subset, w)? {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push(CentredSimplex {
                    vertices: subset.into_iter().cloned().collect(),
                    centre: z.clone(),
                    barycentric: lambda,
                });
            }
        }
    }
    Ok(out)
}

/// All minimal centred simplices of a domain, by point index, so that many
/// functions on the same domain can be checked without re-enumerating.
pub struct MinimalSimplexIndex {
    domain: GridDomain,
    entries: Vec<(usize, Vec<usize>, Vec<ExactScalar>)>,
}

impl MinimalSimplexIndex {
    pub fn new(domain: &GridDomain) -> Result<Self> {
        let points: Vec<GridPoint> = domain.points().collect();
        let mut entries = Vec::new();
        for (ci, z) in points.iter().enumerate() {
            for s in minimal_centred_simplices(&points, z)? {
                let idx = s
                    .vertices
                    .iter()
                    .map(|v| domain.index_of(v.coords()).expect("vertex in domain"))
                    .collect();
                entries.push((ci, idx, s.barycentric));
            }
        }
        Ok(MinimalSimplexIndex { domain: domain.clone(), entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// First minimal centred simplex on which `f` is not convex.
    pub fn find_violation(&self, f: &GridFunction) -> Result<Option<CentredSimplex>> {
        if f.domain() != &self.domain {
            return Err(Error::invalid("function domain differs from the index domain"));
        }
        let v = f.values();
        for (ci, idx, lambda) in &self.entries {
            let combined: ExactScalar = idx.iter().zip(lambda).map(|(&i, l)| l * &v[i]).sum();
            if v[*ci] > combined {
                return Ok(Some(CentredSimplex {
                    vertices: idx.iter().map(|&i| self.domain.point_at(i)).collect(),
                    centre: self.domain.point_at(*ci),
                    barycentric: lambda.clone(),
                }));
            }
        }
        Ok(None)
    }

    pub fn is_convex(&self, f: &GridFunction) -> Result<bool> {
        Ok(self.find_violation(f)?.is_none())
    }
}

/// Convexity decided over every minimal centred simplex of the domain.
pub fn is_convex_via_minimal_simplices(f: &GridFunction) -> Result<bool> {
    MinimalSimplexIndex::new(f.domain())?.is_convex(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::envelope::is_convex_grid;
    use crate::rng::Rng;

    fn p(c: &[i64]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    #[test]
    fn line_examples() {
        let pts = vec![p(&[0]), p(&[1]), p(&[2])];
        let s = minimal_centred_simplices(&pts, &p(&[1])).unwrap();
        let half = ExactScalar::ratio(1, 2).unwrap();
        assert_eq!(s, vec![CentredSimplex {
            vertices: vec![p(&[0]), p(&[2])],
            centre: p(&[1]),
            barycentric: vec![half.clone(), half],
        }]);
        let pts = vec![p(&[0]), p(&[1]), p(&[2]), p(&[3])];
        let s = minimal_centred_simplices(&pts, &p(&[1])).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].vertices, vec![p(&[0]), p(&[2])]);
    }

    #[test]
    fn three_by_three_centre_includes_the_skew_triangle() {
        let dom = GridDomain::cube(3, 2).unwrap();
        let pts: Vec<GridPoint> = dom.points().collect();
        let s = minimal_centred_simplices(&pts, &p(&[1, 1])).unwrap();
        let third = ExactScalar::ratio(1, 3).unwrap();
        assert!(s.iter().any(|c| {
            let mut v = c.vertices.clone();
            v.sort();
            v == vec![p(&[0, 1]), p(&[1, 2]), p(&[2, 0])] && c.barycentric.iter().all(|l| l == &third)
        }));
        for c in &s {
            c.validate().unwrap();
        }
    }

    #[test]
    fn validation_rejects_bad_simplices() {
        let half = ExactScalar::ratio(1, 2).unwrap();
        assert!(CentredSimplex::new(vec![p(&[0]), p(&[2])], p(&[1]), vec![half.clone(), half.clone()]).is_ok());
        assert!(CentredSimplex::new(vec![p(&[0]), p(&[4])], p(&[1]), vec![half.clone(), half.clone()]).is_err());
        assert!(CentredSimplex::new(vec![p(&[0]), p(&[0])], p(&[0]), vec![half.clone(), half]).is_err());
    }

    #[test]
    fn agrees_with_envelope_on_random_functions() {
        let mut rng = Rng::new(7);
        for dims in [vec![3, 3], vec![4, 3]] {
            let dom = GridDomain::new(dims).unwrap();
            let index = MinimalSimplexIndex::new(&dom).unwrap();
            for _ in 0..200 {
                let f = GridFunction::from_fn(dom.clone(), |_| ExactScalar::from(rng.uniform(5) as i64));
                assert_eq!(index.is_convex(&f).unwrap(), is_convex_grid(&f).unwrap());
            }
        }
    }

    #[test]
    fn affine_passes() {
        let f = GridFunction::from_fn(GridDomain::cube(3, 2).unwrap(), |q| ExactScalar::from(q[0] - 4 * q[1]));
        assert!(is_convex_via_minimal_simplices(&f).unwrap());
    }
}
