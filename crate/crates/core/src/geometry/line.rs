//! Convexity on the line: the three-point inequality and distance to the
//! nearest convex function.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::scalar::ExactScalar;

/// Whether `f` is convex on `x < y < z`:
/// `(f(y) - f(x))(z - y) <= (f(z) - f(y))(y - x)`. Equality counts as convex.
pub fn triple_is_convex(
    x: i64,
    y: i64,
    z: i64,
    fx: &ExactScalar,
    fy: &ExactScalar,
    fz: &ExactScalar,
) -> Result<bool> {
    if !(x < y && y < z) {
        return Err(Error::invalid(format!("triple ({x}, {y}, {z}) is not strictly increasing")));
    }
    Ok(triple_convex_unchecked(x, y, z, fx, fy, fz))
}

#[inline]
pub(crate) fn triple_convex_unchecked(
    x: i64,
    y: i64,
    z: i64,
    fx: &ExactScalar,
    fy: &ExactScalar,
    fz: &ExactScalar,
) -> bool {
    let left = (fy - fx) * ExactScalar::from(z - y);
    let right = (fz - fy) * ExactScalar::from(y - x);
    left <= right
}

/// First consecutive triple `(i, i+1, i+2)` on which `f` is not convex.
pub fn first_line_violation(f: &GridFunction) -> Result<Option<(i64, i64, i64)>> {
    let v = f.line_values()?;
    Ok(v.windows(3).position(|w| !triple_convex_unchecked(0, 1, 2, &w[0], &w[1], &w[2])).map(|i| {
        let i = i as i64;
        (i, i + 1, i + 2)
    }))
}

/// Convexity of a function on `[n]`, decided on consecutive triples.
pub fn is_convex_line(f: &GridFunction) -> Result<bool> {
    Ok(first_line_violation(f)?.is_none())
}

/// Length of the longest subsequence of `values` (indexed by position) on
/// which the function is convex, i.e. whose chord slopes are nondecreasing.
///
/// For each middle index `j` the predecessors `i < j` are sorted by the slope
/// of `(i, j)`; prefix maxima then answer every extension `(j, k)` by binary
/// search, for `O(n^2 log n)` overall.
pub fn longest_convex_subsequence(values: &[ExactScalar]) -> usize {
    let n = values.len();
    if n <= 2 {
        return n;
    }
    let slope = |i: usize, j: usize| -> ExactScalar {
        (&values[j] - &values[i]) / ExactScalar::from((j - i) as i64)
    };
    // best[i][j - i - 1]: longest convex subsequence ending with i, j
    let mut best: Vec<Vec<u32>> = (0..n).map(|i| vec![2; n - i - 1]).collect();
    let mut answer = 2u32;
    for j in 1..n - 1 {
        let mut preds: Vec<(ExactScalar, u32)> =
            (0..j).map(|i| (slope(i, j), best[i][j - i - 1])).collect();
        preds.sort_by(|a, b| a.0.cmp(&b.0));
        let mut prefix = Vec::with_capacity(preds.len());
        let mut running = 0u32;
        for (_, len) in &preds {
            running = running.max(*len);
            prefix.push(running);
        }
        for k in j + 1..n {
            let s = slope(j, k);
            let count = preds.partition_point(|(p, _)| p <= &s);
            if count > 0 {
                let len = prefix[count - 1] + 1;
                let slot = &mut best[j][k - j - 1];
                if len > *slot {
                    *slot = len;
                }
                answer = answer.max(len);
            }
        }
    }
    answer as usize
}

/// Fraction of points of `[n]` that must change to make `f` convex.
///
/// Any convex subsequence extends to a convex function on all of `[n]`, so the
/// distance is `(n - L) / n` with `L` the longest convex subsequence.
pub fn distance_to_convex_line(f: &GridFunction) -> Result<ExactScalar> {
    let v = f.line_values()?;
    let n = v.len();
    let keep = longest_convex_subsequence(v);
    ExactScalar::ratio((n - keep) as i64, n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&x| ExactScalar::from(x)).collect()
    }

    fn line(v: &[i64]) -> GridFunction {
        GridFunction::line_from_ints(v).unwrap()
    }

    #[test]
    fn triple_examples() {
        let t = |x, y, z, a: i64, b: i64, c: i64| {
            triple_is_convex(x, y, z, &a.into(), &b.into(), &c.into()).unwrap()
        };
        assert!(t(0, 1, 2, 0, 0, 0));
        assert!(!t(0, 1, 2, -1, 1, -1));
        assert!(!t(0, 2, 3, 0, 3, 4));
        let z = ExactScalar::zero();
        assert!(triple_is_convex(1, 1, 2, &z, &z, &z).is_err());
        assert!(triple_is_convex(3, 2, 1, &z, &z, &z).is_err());
    }

    #[test]
    fn line_examples() {
        let sq: Vec<i64> = (0..10).map(|x| x * x).collect();
        assert!(is_convex_line(&line(&sq)).unwrap());
        assert!(is_convex_line(&line(&[5, 1, 3])).unwrap());
        assert_eq!(first_line_violation(&line(&[0, 2, 3, 3, 2])).unwrap(), Some((0, 1, 2)));
        assert!(!is_convex_line(&line(&[0, 2, 3, 3, 2])).unwrap());
        assert!(is_convex_line(&line(&[4])).unwrap());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_to_convex_line(&line(&[1, 0, 1])).unwrap(), ExactScalar::zero());
        assert_eq!(
            distance_to_convex_line(&line(&[-1, 1, -1])).unwrap(),
            ExactScalar::ratio(1, 3).unwrap()
        );
        assert_eq!(longest_convex_subsequence(&ints(&[])), 0);
        assert_eq!(longest_convex_subsequence(&ints(&[7])), 1);
    }

    /// Brute force over all retained subsets, largest first.
    fn brute_force(values: &[ExactScalar]) -> usize {
        let n = values.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if keep.len() <= best {
                continue;
            }
            let ok = keep.windows(3).all(|w| {
                triple_convex_unchecked(
                    w[0] as i64,
                    w[1] as i64,
                    w[2] as i64,
                    &values[w[0]],
                    &values[w[1]],
                    &values[w[2]],
                )
            });
            if ok {
                best = keep.len();
            }
        }
        best
    }

    #[test]
    fn dp_matches_brute_force_on_small_ternary_functions() {
        for code in 0..3usize.pow(6) {
            let v: Vec<i64> = (0..6).map(|i| (code / 3usize.pow(i) % 3) as i64).collect();
            let vals = ints(&v);
            assert_eq!(longest_convex_subsequence(&vals), brute_force(&vals), "{v:?}");
        }
    }

    proptest! {
        #[test]
        fn affine_shift_invariance(
            xs in prop::collection::btree_set(-20i64..20, 3),
            fs in prop::collection::vec(-30i64..30, 3),
            slope in -9i64..9,
            offset in -9i64..9,
        ) {
            let p: Vec<i64> = xs.into_iter().collect();
            let f: Vec<ExactScalar> = fs.iter().map(|&v| ExactScalar::from(v)).collect();
            let g: Vec<ExactScalar> = fs
                .iter()
                .zip(&p)
                .map(|(&v, &x)| ExactScalar::from(v + slope * x + offset))
                .collect();
            prop_assert_eq!(
                triple_is_convex(p[0], p[1], p[2], &f[0], &f[1], &f[2]).unwrap(),
                triple_is_convex(p[0], p[1], p[2], &g[0], &g[1], &g[2]).unwrap()
            );
        }

        #[test]
        fn zero_distance_iff_convex(v in prop::collection::vec(-4i64..5, 1..12)) {
            let f = line(&v);
            prop_assert_eq!(
                distance_to_convex_line(&f).unwrap().is_zero(),
                is_convex_line(&f).unwrap()
            );
        }
    }
}
