//! Exact Gauss-Jordan elimination.

use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<ExactScalar>),
    Inconsistent,
    /// Consistent with free variables.
    Underdetermined,
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
fn rref(m: &mut [Vec<ExactScalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// Solves `a x = b` for a (possibly non-square) matrix `a`.
pub fn solve(a: &[Vec<ExactScalar>], b: &[ExactScalar]) -> Solution {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<ExactScalar>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, cols);
    if m[pivots.len()..].iter().any(|r| !r[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    if pivots.len() < cols {
        return Solution::Underdetermined;
    }
    Solution::Unique(m[..cols].iter().map(|r| r[cols].clone()).collect())
}

pub fn rank(a: &[Vec<ExactScalar>]) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.to_vec();
    rref(&mut m, cols).len()
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse(a: &[Vec<ExactScalar>]) -> Option<Vec<Vec<ExactScalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<ExactScalar>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n, "matrix is not square");
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }));
            row
        })
        .collect();
    if rref(&mut m, n).len() < n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by Gaussian elimination over the rationals.
pub fn determinant(a: &[Vec<ExactScalar>]) -> ExactScalar {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = ExactScalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return ExactScalar::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip().expect("nonzero pivot");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= &d;
            }
        }
    }
    det
}

pub fn mat_mul(a: &[Vec<ExactScalar>], b: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            assert_eq!(r.len(), inner, "dimension mismatch");
            (0..cols).map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum()).collect()
        })
        .collect()
}
