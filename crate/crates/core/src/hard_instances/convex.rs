//! Random convex functions, for completeness runs.

use crate::error::{Error, Result};
use crate::grid::{GridDomain, GridFunction};
use crate::rng::Rng;
use crate::scalar::ExactScalar;

/// A random convex integer sequence of length `n`.
///
/// Mixes three shapes: dense curvature, a few sharp kinks with long flat
/// stretches of equal slope, and nearly affine sequences with ties. The
/// minimum lands at a random position.
pub fn random_convex_sequence(n: usize, rng: &mut Rng) -> Vec<i64> {
    if n == 0 {
        return Vec::new();
    }
    let style = rng.uniform(3);
    let kink_odds = (n as u64 / 4).max(1);
    let second: Vec<i64> = (1..n)
        .map(|_| match style {
            0 => rng.uniform_inclusive(0, 3),
            1 if rng.uniform(kink_odds) == 0 => rng.uniform_inclusive(1, 50),
            2 if rng.uniform(4 * kink_odds) == 0 => 1,
            _ => 0,
        })
        .collect();
    let curvature: i64 = second.iter().sum();
    let mut slope = -rng.uniform_inclusive(0, curvature) + rng.uniform_inclusive(-2, 2);
    let mut value = rng.uniform_inclusive(-1000, 1000);
    let mut out = Vec::with_capacity(n);
    out.push(value);
    for d in second {
        value += slope;
        out.push(value);
        slope += d;
    }
    out
}

pub fn random_convex_line(n: usize, rng: &mut Rng) -> Result<GridFunction> {
    if n == 0 {
        return Err(Error::invalid("empty line"));
    }
    GridFunction::line_from_ints(&random_convex_sequence(n, rng))
}

/// A random convex function on a box: a maximum of a few integer affine maps
/// plus a convex sequence in each coordinate. Both parts extend to convex
/// functions on `R^d`, so the sum restricted to the grid is convex.
pub fn random_convex_grid(domain: &GridDomain, rng: &mut Rng) -> GridFunction {
    let d = domain.dimension();
    let span = *domain.dims().iter().max().expect("non-empty dims") as i64;
    let pieces = 1 + rng.uniform(4) as usize;
    let affine: Vec<(Vec<i64>, i64)> = (0..pieces)
        .map(|_| {
            let p = (0..d).map(|_| rng.uniform_inclusive(-span, span)).collect();
            (p, rng.uniform_inclusive(-span * span, span * span))
        })
        .collect();
    let separable: Vec<Vec<i64>> = domain
        .dims()
        .iter()
        .map(|&n| random_convex_sequence(n, rng))
        .collect();
    GridFunction::from_fn(domain.clone(), |x| {
        let top = affine
            .iter()
            .map(|(p, r)| p.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + r)
            .max()
            .expect("at least one piece");
        let sep: i64 = separable.iter().zip(x).map(|(s, &c)| s[c as usize]).sum();
        ExactScalar::from(top + sep)
    })
}

pub fn random_convex_stripe(n: usize, rng: &mut Rng) -> Result<GridFunction> {
    Ok(random_convex_grid(&GridDomain::stripe(n)?, rng))
}
