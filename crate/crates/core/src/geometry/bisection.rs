//! Minimum of a convex sequence by bisection.

use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectionResult {
    pub index: usize,
    pub value: ExactScalar,
    pub evaluations: usize,
}

/// Like [`bisection_min`] with a fallible accessor; the first error aborts.
///
/// Ranges of fewer than six points are scanned. Otherwise, with `a = ⌊len/2⌋`,
/// the points `a - 1` and `a` of the range (zero-based) are compared and the
/// search continues on the first `a` points if the former is strictly
/// smaller, else on the rest.
///
/// # Panics
///
/// If `n` is zero.
pub fn try_bisection_min<E>(
    n: usize,
    mut accessor: impl FnMut(usize) -> Result<ExactScalar, E>,
) -> Result<BisectionResult, E> {
    assert!(n > 0, "minimum of an empty sequence");
    let (mut lo, mut hi) = (0usize, n);
    let mut evaluations = 0;
    while hi - lo >= 6 {
        let a = (hi - lo) / 2;
        let left = accessor(lo + a - 1)?;
        let right = accessor(lo + a)?;
        evaluations += 2;
        if left < right {
            hi = lo + a;
        } else {
            lo += a;
        }
    }
    let mut best: Option<(usize, ExactScalar)> = None;
    for i in lo..hi {
        let v = accessor(i)?;
        evaluations += 1;
        if best.as_ref().is_none_or(|(_, b)| &v < b) {
            best = Some((i, v));
        }
    }
    let (index, value) = best.expect("nonempty range");
    Ok(BisectionResult { index, value, evaluations })
}

/// Global minimiser of a convex sequence of length `n` given by `accessor`.
///
/// On a non-convex sequence some point is returned; nothing is detected.
pub fn bisection_min(n: usize, mut accessor: impl FnMut(usize) -> ExactScalar) -> BisectionResult {
    match try_bisection_min::<std::convert::Infallible>(n, |i| Ok(accessor(i))) {
        Ok(r) => r,
        Err(e) => match e {},
    }
}

/// `2⌈log₂ n⌉ + 6`.
pub fn evaluation_bound(n: usize) -> usize {
    2 * (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize + 6
}
