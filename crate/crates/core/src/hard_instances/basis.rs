//! Hidden directions and their unimodular basis completions.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Draws a direction `a` with coordinates in `[0, n / (4d)]` whose first two
/// coordinates are coprime. Rejection sampling; each attempt succeeds with
/// probability above one half.
pub fn sample_direction(d: usize, n: usize, rng: &mut Rng) -> Result<Vec<i64>> {
    if d < 2 {
        return Err(Error::invalid("a hidden direction needs d >= 2"));
    }
    if n < 4 * d {
        return Err(Error::invalid(format!("need n >= 4d, got n = {n}, d = {d}")));
    }
    let hi = (n / (4 * d)) as i64;
    loop {
        let a: Vec<i64> = (0..d).map(|_| rng.uniform_inclusive(0, hi)).collect();
        if a[0].gcd(&a[1]) == 1 {
            return Ok(a);
        }
    }
}

/// Direction for the stripe family: `(1, a2)` with `a2` uniform in `[0, n / 100]`.
pub fn sample_stripe_direction(n: usize, rng: &mut Rng) -> Vec<i64> {
    vec![1, rng.uniform_inclusive(0, (n / 100) as i64)]
}

/// A unimodular integer basis whose first column is `a`.
///
/// `c1, c2` satisfy `a1 c1 - a2 c2 = 1`, with `c1` reduced into `[0, |a2|)`.
/// The second column is `(c2, c1, 0, ..)`; every later column `i` is `e_i`.
/// With this layout the leading 2x2 block has determinant `a1 c1 - a2 c2 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCompletion {
    pub a: Vec<i64>,
    pub c1: i64,
    pub c2: i64,
    /// Row-major; column `j` is the basis vector `b_{j+1}`.
    pub b: Vec<Vec<i64>>,
    pub b_inv: Vec<Vec<i64>>,
}

impl BasisCompletion {
    pub fn new(a: &[i64]) -> Result<Self> {
        let d = a.len();
        if d < 2 {
            return Err(Error::invalid("basis completion needs d >= 2"));
        }
        let (a1, a2) = (a[0], a[1]);
        let e = a1.extended_gcd(&a2);
        if e.gcd != 1 {
            return Err(Error::invalid(format!("a1 = {a1} and a2 = {a2} are not coprime")));
        }
        // a1 x + a2 y = 1, so (c1, c2) = (x, -y); shifting by (a2, a1) keeps the identity.
        let (mut c1, mut c2) = (e.x, -e.y);
        if a2 != 0 {
            let t = c1.div_euclid(a2.abs()) * a2.signum();
            c1 -= t * a2;
            c2 -= t * a1;
        }
        debug_assert_eq!(a1 * c1 - a2 * c2, 1);

        let mut b = vec![vec![0i64; d]; d];
        for (i, row) in b.iter_mut().enumerate() {
            row[0] = a[i];
            if i >= 2 {
                row[i] = 1;
            }
        }
        b[0][1] = c2;
        b[1][1] = c1;

        // Block inverse of [[M, 0], [R, I]] is [[M^-1, 0], [-R M^-1, I]].
        let m_inv = [[c1, -c2], [-a2, a1]];
        let mut b_inv = vec![vec![0i64; d]; d];
        b_inv[0][0] = m_inv[0][0];
        b_inv[0][1] = m_inv[0][1];
        b_inv[1][0] = m_inv[1][0];
        b_inv[1][1] = m_inv[1][1];
        for i in 2..d {
            b_inv[i][0] = -a[i] * m_inv[0][0];
            b_inv[i][1] = -a[i] * m_inv[0][1];
            b_inv[i][i] = 1;
        }
        Ok(BasisCompletion { a: a.to_vec(), c1, c2, b, b_inv })
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    /// `x^B = B^-1 x`, the coordinates of `x` in this basis.
    pub fn coords(&self, x: &[i64]) -> Vec<i64> {
        self.b_inv
            .iter()
            .map(|row| row.iter().zip(x).map(|(r, c)| r * c).sum())
            .collect()
    }

    /// `B y`, the point with basis coordinates `y`.
    pub fn point(&self, y: &[i64]) -> Vec<i64> {
        self.b
            .iter()
            .map(|row| row.iter().zip(y).map(|(r, c)| r * c).sum())
            .collect()
    }
}

/// `g_B(x) = (x^B_1)^2 + 2 * sum_{i >= 2} (x^B_i)^2`.
pub fn canonical_g(basis: &BasisCompletion, x: &[i64]) -> i128 {
    basis
        .coords(x)
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let sq = (c as i128) * (c as i128);
            if i == 0 {
                sq
            } else {
                2 * sq
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::envelope::is_convex_grid;
    use crate::geometry::linalg::{determinant, inverse};
    use crate::grid::{GridDomain, GridFunction};
    use crate::scalar::ExactScalar;

    fn to_scalar(m: &[Vec<i64>]) -> Vec<Vec<ExactScalar>> {
        m.iter().map(|r| r.iter().map(|&v| ExactScalar::from(v)).collect()).collect()
    }

    fn check_basis(basis: &BasisCompletion) {
        let d = basis.dimension();
        let a = &basis.a;
        assert_eq!(a[0] * basis.c1 - a[1] * basis.c2, 1);
        let det = determinant(&to_scalar(&basis.b));
        assert!(det == ExactScalar::one() || det == -ExactScalar::one(), "det {det}");
        // independent route: rational inverse by elimination
        let inv = inverse(&to_scalar(&basis.b)).unwrap();
        assert_eq!(inv, to_scalar(&basis.b_inv));
        for i in 0..d {
            assert_eq!(basis.b[i][0], a[i]);
        }
        let e1: Vec<i64> = (0..d).map(|i| (i == 0) as i64).collect();
        assert_eq!(basis.coords(a), e1);
    }

    #[test]
    fn identity_like_case() {
        let b = BasisCompletion::new(&[1, 0, 0]).unwrap();
        assert_eq!((b.c1, b.c2), (1, 0));
        check_basis(&b);
    }

    #[test]
    fn hand_computed_euclid() {
        let b = BasisCompletion::new(&[2, 3]).unwrap();
        assert_eq!((b.c1, b.c2), (2, 1));
        assert_eq!(b.b, vec![vec![2, 1], vec![3, 2]]);
        assert_eq!(b.b_inv, vec![vec![2, -1], vec![-3, 2]]);
        check_basis(&b);
    }

    #[test]
    fn stripe_directions() {
        let b = BasisCompletion::new(&[1, 7]).unwrap();
        assert_eq!((b.c1, b.c2), (1, 0));
        assert_eq!(b.coords(&[2, 20]), vec![2, 6]);
        let b = BasisCompletion::new(&[1, 1]).unwrap();
        check_basis(&b);
        let b = BasisCompletion::new(&[0, 1]).unwrap();
        check_basis(&b);
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(BasisCompletion::new(&[2, 4]).is_err());
        assert!(BasisCompletion::new(&[0, 0, 1]).is_err());
        assert!(BasisCompletion::new(&[1]).is_err());
    }

    #[test]
    fn random_coprime_directions_are_unimodular() {
        let mut rng = Rng::new(12);
        for t in 0..1000 {
            let d = 2 + t % 4;
            let a = sample_direction(d, 400, &mut rng).unwrap();
            let b = BasisCompletion::new(&a).unwrap();
            check_basis(&b);
            assert!(b.c1 >= 0 && (a[1] == 0 || b.c1 < a[1].abs()));
            let y: Vec<i64> = (0..d).map(|_| rng.uniform_inclusive(-50, 50)).collect();
            assert_eq!(b.coords(&b.point(&y)), y);
        }
    }

    #[test]
    fn admissible_directions_small_grid() {
        let mut rng = Rng::new(3);
        for _ in 0..300 {
            let a = sample_direction(2, 16, &mut rng).unwrap();
            assert!(a.iter().all(|&c| (0..=2).contains(&c)));
            assert_eq!(a[0].gcd(&a[1]), 1);
        }
        assert!(sample_direction(2, 7, &mut rng).is_err());
        assert!(sample_direction(1, 100, &mut rng).is_err());
    }

    #[test]
    fn canonical_g_basics() {
        let b = BasisCompletion::new(&[2, 3]).unwrap();
        assert_eq!(canonical_g(&b, &[2, 3]), 1);
        assert_eq!(canonical_g(&b, &[0, 0]), 0);
        assert_eq!(canonical_g(&b, &[1, 2]), 2);
    }

    #[test]
    fn canonical_g_is_convex_on_small_grids() {
        let mut rng = Rng::new(21);
        let dom = GridDomain::cube(8, 2).unwrap();
        for _ in 0..20 {
            let a = sample_direction(2, 64, &mut rng).unwrap();
            let b = BasisCompletion::new(&a).unwrap();
            let f = GridFunction::from_fn(dom.clone(), |x| ExactScalar::from(canonical_g(&b, x)));
            assert!(is_convex_grid(&f).unwrap());
        }
    }
}
