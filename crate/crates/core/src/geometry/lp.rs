//! Dense two-phase simplex method over exact rationals.
//!
//! Problems are in standard equality form: minimise `c·x` subject to
//! `A x = b` and `x >= 0`. Pivoting follows Bland's rule, so the method
//! terminates on degenerate problems.

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<ExactScalar>,
    /// One row per equality constraint, each of the same length as `objective`.
    pub constraints: Vec<Vec<ExactScalar>>,
    pub rhs: Vec<ExactScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { value: ExactScalar, solution: Vec<ExactScalar> },
}

impl LpResult {
    pub fn value(&self) -> Option<&ExactScalar> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LpProblem {
    pub fn new(
        objective: Vec<ExactScalar>,
        constraints: Vec<Vec<ExactScalar>>,
        rhs: Vec<ExactScalar>,
    ) -> Result<Self> {
        let p = LpProblem { objective, constraints, rhs };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.constraints.len() != self.rhs.len() {
            return Err(Error::invalid("constraint rows and right-hand side differ in length"));
        }
        if let Some(row) = self.constraints.iter().find(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "constraint row has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(())
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    /// Checks `A x = b` and `x >= 0` exactly.
    pub fn is_feasible_point(&self, x: &[ExactScalar]) -> bool {
        x.len() == self.variables()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().zip(&self.rhs).all(|(row, b)| {
                let lhs: ExactScalar = row.iter().zip(x).map(|(a, v)| a * v).sum();
                &lhs == b
            })
    }

    pub fn objective_at(&self, x: &[ExactScalar]) -> ExactScalar {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// Simplex tableau. Row `i` holds the constraint coefficients followed by the
/// right-hand side; `cost` holds reduced costs followed by minus the
/// objective value.
struct Tableau {
    width: usize,
    rows: Vec<Vec<ExactScalar>>,
    cost: Vec<ExactScalar>,
    basis: Vec<usize>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &ExactScalar {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if p != ExactScalar::one() {
            let inv = p.recip().expect("pivot element is nonzero");
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row, &pivot_row, c);
            }
        }
        eliminate(&mut self.cost, &pivot_row, c);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Most negative reduced cost over columns `0..limit`, falling back to
    /// Bland's rule for good after a run of degenerate pivots so that the
    /// method cannot cycle.
    fn optimise(&mut self, limit: usize) -> Outcome {
        const DEGENERATE_RUN: usize = 32;
        let mut bland = false;
        let mut degenerate = 0usize;
        loop {
            let enter = if bland {
                (0..limit).find(|&j| self.cost[j].is_negative())
            } else {
                (0..limit)
                    .filter(|&j| self.cost[j].is_negative())
                    .min_by(|&a, &b| self.cost[a].cmp(&self.cost[b]).then(a.cmp(&b)))
            };
            let Some(enter) = enter else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, ExactScalar)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Outcome::Unbounded,
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        degenerate += 1;
                        bland |= degenerate >= DEGENERATE_RUN;
                    } else {
                        degenerate = 0;
                    }
                    self.pivot(r, enter)
                }
            }
        }
    }
}

fn eliminate(row: &mut [ExactScalar], pivot_row: &[ExactScalar], c: usize) {
    let factor = row[c].clone();
    if factor.is_zero() {
        return;
    }
    for (v, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *v -= &(&factor * p);
        }
    }
}

pub fn solve_lp(problem: &LpProblem) -> Result<LpResult> {
    problem.validate()?;
    let n = problem.variables();
    let m = problem.constraints.len();
    let width = n + m;

    // Phase 1: artificial variable per row, rows sign-normalised so b >= 0.
    let mut rows = Vec::with_capacity(m);
    for (i, (row, b)) in problem.constraints.iter().zip(&problem.rhs).enumerate() {
        let flip = b.is_negative();
        let mut r = Vec::with_capacity(width + 1);
        r.extend(row.iter().map(|a| if flip { -a } else { a.clone() }));
        r.extend((0..m).map(|j| if j == i { ExactScalar::one() } else { ExactScalar::zero() }));
        r.push(if flip { -b } else { b.clone() });
        rows.push(r);
    }
    let mut cost = vec![ExactScalar::zero(); width + 1];
    for r in &rows {
        for j in 0..n {
            cost[j] -= &r[j];
        }
        cost[width] -= &r[width];
    }
    let mut t = Tableau { width, rows, cost, basis: (n..n + m).collect() };
    t.optimise(width);
    if !t.cost[width].is_zero() {
        return Ok(LpResult::Infeasible);
    }

    // Drive artificials out of the basis; rows where that is impossible are
    // redundant and dropped.
    let mut keep = vec![true; m];
    for i in 0..m {
        if t.basis[i] < n {
            continue;
        }
        match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
            Some(j) => t.pivot(i, j),
            None => keep[i] = false,
        }
    }

    // Phase 2 on the original columns.
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, mut r) in std::mem::take(&mut t.rows).into_iter().enumerate() {
        if keep[i] {
            let rhs = r.pop().expect("rhs column");
            r.truncate(n);
            r.push(rhs);
            rows.push(r);
            basis.push(t.basis[i]);
        }
    }
    let mut cost: Vec<ExactScalar> = problem.objective.clone();
    cost.push(ExactScalar::zero());
    for (r, &b) in rows.iter().zip(&basis) {
        let cb = problem.objective[b].clone();
        if !cb.is_zero() {
            for (c, v) in cost.iter_mut().zip(r) {
                if !v.is_zero() {
                    *c -= &(&cb * v);
                }
            }
        }
    }
    let mut t = Tableau { width: n, rows, cost, basis };
    if let Outcome::Unbounded = t.optimise(n) {
        return Ok(LpResult::Unbounded);
    }
    let mut solution = vec![ExactScalar::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        solution[b] = t.rhs(i).clone();
    }
    Ok(LpResult::Optimal { value: -&t.cost[n], solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn s(v: i64) -> ExactScalar {
        ExactScalar::from(v)
    }

    fn row(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&x| s(x)).collect()
    }

    #[test]
    fn single_variable() {
        let p = LpProblem::new(row(&[1]), vec![row(&[1])], row(&[1])).unwrap();
        assert_eq!(solve_lp(&p).unwrap().value(), Some(&s(1)));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let p = LpProblem::new(row(&[1, 1]), vec![row(&[1, 1])], row(&[-1])).unwrap();
        assert_eq!(solve_lp(&p).unwrap(), LpResult::Infeasible);
        let p = LpProblem::new(row(&[0, -1]), vec![row(&[1, -1])], row(&[0])).unwrap();
        assert_eq!(solve_lp(&p).unwrap(), LpResult::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let p = LpProblem::new(
            row(&[2, 1, 3]),
            vec![row(&[1, 1, 1]), row(&[2, 2, 2]), row(&[1, 0, -1])],
            row(&[1, 2, 0]),
        )
        .unwrap();
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.value(), Some(&s(1)));
    }

    #[test]
    fn envelope_of_three_points() {
        // points (2,0),(0,1),(1,2) with value 1 each, centre (1,1)
        let p = LpProblem::new(
            row(&[1, 1, 1]),
            vec![row(&[1, 1, 1]), row(&[2, 0, 1]), row(&[0, 1, 2])],
            row(&[1, 1, 1]),
        )
        .unwrap();
        match solve_lp(&p).unwrap() {
            LpResult::Optimal { value, solution } => {
                assert_eq!(value, s(1));
                let third = ExactScalar::ratio(1, 3).unwrap();
                assert_eq!(solution, vec![third.clone(), third.clone(), third]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_ragged_input() {
        assert!(LpProblem::new(row(&[1, 2]), vec![row(&[1])], row(&[1])).is_err());
        assert!(LpProblem::new(row(&[1]), vec![row(&[1])], row(&[])).is_err());
    }

    /// Optimum by enumerating every basic feasible solution. Returns `None`
    /// when no basis is feasible; the caller bounds the region so the problem
    /// is never unbounded.
    fn vertex_oracle(p: &LpProblem) -> Option<ExactScalar> {
        let n = p.variables();
        let m = p.constraints.len();
        let mut best: Option<ExactScalar> = None;
        for k in 0..=m.min(n) {
            for cols in (0..n).combinations(k) {
                let a: Vec<Vec<ExactScalar>> = p
                    .constraints
                    .iter()
                    .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                    .collect();
                if let crate::geometry::linalg::Solution::Unique(xs) =
                    crate::geometry::linalg::solve(&a, &p.rhs)
                {
                    let mut x = vec![ExactScalar::zero(); n];
                    for (&c, v) in cols.iter().zip(xs) {
                        x[c] = v;
                    }
                    if p.is_feasible_point(&x) {
                        let v = p.objective_at(&x);
                        if best.as_ref().is_none_or(|b| &v < b) {
                            best = Some(v);
                        }
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            obj in prop::collection::vec(-5i64..6, 3),
            a in prop::collection::vec(-4i64..5, 3),
            b in -6i64..7,
        ) {
            // sum x = 2 keeps the region bounded; one more random row
            let p = LpProblem::new(
                row(&obj),
                vec![row(&[1, 1, 1]), row(&a)],
                row(&[2, b]),
            ).unwrap();
            let r = solve_lp(&p).unwrap();
            let expect = vertex_oracle(&p);
            match (&r, expect) {
                (LpResult::Infeasible, None) => {}
                (LpResult::Optimal { value, solution }, Some(e)) => {
                    prop_assert_eq!(value, &e);
                    prop_assert!(p.is_feasible_point(solution));
                    prop_assert_eq!(&p.objective_at(solution), value);
                }
                (got, e) => prop_assert!(false, "solver {:?} vs oracle {:?}", got, e),
            }
        }
    }
}
