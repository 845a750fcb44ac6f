//! Finite distributions over grid points with exact rational weights.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::grid::{GridDomain, GridPoint};
use crate::rng::Rng;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug)]
enum Cumulative {
    /// Integer weights scaled by the common denominator, when it fits a word.
    Word { total: u64, prefix: Vec<u64> },
    Big { total: BigUint, prefix: Vec<BigUint> },
}

#[derive(Clone, Debug)]
pub struct DiscreteDistribution {
    support: Vec<GridPoint>,
    weights: Vec<ExactScalar>,
    cumulative: Cumulative,
}

impl DiscreteDistribution {
    /// Validates that weights are non-negative, sum to exactly one, and that
    /// the support points are distinct (and inside `domain`, when given).
    pub fn new(
        support: Vec<GridPoint>,
        weights: Vec<ExactScalar>,
        domain: Option<&GridDomain>,
    ) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("distribution with empty support"));
        }
        if support.len() != weights.len() {
            return Err(Error::invalid("support and weights differ in length"));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::invalid("negative weight"));
        }
        let total: ExactScalar = weights.iter().sum();
        if total != ExactScalar::one() {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        let mut seen = HashSet::with_capacity(support.len());
        for p in &support {
            if !seen.insert(p) {
                return Err(Error::invalid(format!("repeated support point {p}")));
            }
            if let Some(d) = domain {
                d.check(p.coords())?;
            }
        }
        let cumulative = build_cumulative(&weights);
        Ok(DiscreteDistribution { support, weights, cumulative })
    }

    /// Uniform distribution over the given distinct points.
    pub fn uniform_over(points: Vec<GridPoint>, domain: Option<&GridDomain>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("distribution with empty support"));
        }
        let w = ExactScalar::ratio(1, points.len() as i64)?;
        let weights = vec![w; points.len()];
        Self::new(points, weights, domain)
    }

    /// Uniform distribution over a whole domain.
    pub fn uniform(domain: &GridDomain) -> Result<Self> {
        Self::uniform_over(domain.points().collect(), Some(domain))
    }

    /// All mass on one point.
    pub fn point_mass(point: GridPoint) -> Self {
        Self::new(vec![point], vec![ExactScalar::one()], None).expect("valid point mass")
    }

    pub fn support(&self) -> &[GridPoint] {
        &self.support
    }

    pub fn weights(&self) -> &[ExactScalar] {
        &self.weights
    }

    pub fn weight_of(&self, point: &GridPoint) -> ExactScalar {
        self.support
            .iter()
            .position(|p| p == point)
            .map(|i| self.weights[i].clone())
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Draws a support point with probability exactly equal to its weight.
    pub fn sample(&self, rng: &mut Rng) -> &GridPoint {
        let index = match &self.cumulative {
            Cumulative::Word { total, prefix } => {
                let r = rng.uniform(*total);
                prefix.partition_point(|&c| c <= r)
            }
            Cumulative::Big { total, prefix } => {
                let r = uniform_biguint(total, rng);
                prefix.partition_point(|c| c <= &r)
            }
        };
        &self.support[index]
    }
}

fn build_cumulative(weights: &[ExactScalar]) -> Cumulative {
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(&w.denom()));
    let scaled: Vec<BigUint> = weights
        .iter()
        .map(|w| (w.numer() * (&lcm / w.denom())).to_biguint().expect("non-negative"))
        .collect();
    let mut prefix = Vec::with_capacity(scaled.len());
    let mut acc = BigUint::zero();
    for s in scaled {
        acc += s;
        prefix.push(acc.clone());
    }
    let total = lcm.to_biguint().expect("positive");
    match total.to_u64() {
        Some(t) => Cumulative::Word {
            total: t,
            prefix: prefix.iter().map(|c| c.to_u64().expect("bounded by total")).collect(),
        },
        None => Cumulative::Big { total, prefix },
    }
}

/// Rejection sampling of a uniform integer in `[0, bound)`.
fn uniform_biguint(bound: &BigUint, rng: &mut Rng) -> BigUint {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64 * 8) - bits;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        // big-endian: mask the top byte down to `bits`
        buf[0] &= 0xffu8 >> excess;
        let r = BigUint::from_bytes_be(&buf);
        if &r < bound {
            return r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64) -> GridPoint {
        GridPoint::new(vec![x])
    }

    #[test]
    fn point_mass_always_returns_its_point() {
        let d = DiscreteDistribution::point_mass(p(7));
        let mut rng = Rng::new(1);
        for _ in 0..100 {
            assert_eq!(d.sample(&mut rng), &p(7));
        }
    }

    #[test]
    fn two_point_support_is_respected() {
        let half = ExactScalar::ratio(1, 2).unwrap();
        let d = DiscreteDistribution::new(vec![p(0), p(9)], vec![half.clone(), half], None).unwrap();
        let mut rng = Rng::new(2);
        for _ in 0..1000 {
            let s = d.sample(&mut rng);
            assert!(s == &p(0) || s == &p(9));
        }
    }

    #[test]
    fn uniform_frequencies() {
        let dom = GridDomain::line(4).unwrap();
        let d = DiscreteDistribution::uniform(&dom).unwrap();
        let mut rng = Rng::new(99);
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            counts[d.sample(&mut rng).coords()[0] as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / draws as f64 - 0.25).abs() < 0.02);
        }
    }

    #[test]
    fn skewed_weights_frequencies() {
        let w = |a, b| ExactScalar::ratio(a, b).unwrap();
        let d = DiscreteDistribution::new(vec![p(0), p(1), p(2)], vec![w(1, 6), w(1, 3), w(1, 2)], None)
            .unwrap();
        let mut rng = Rng::new(5);
        let mut counts = [0usize; 3];
        let draws = 120_000;
        for _ in 0..draws {
            counts[d.sample(&mut rng).coords()[0] as usize] += 1;
        }
        let expect = [1.0 / 6.0, 1.0 / 3.0, 0.5];
        for (c, e) in counts.iter().zip(expect) {
            assert!((*c as f64 / draws as f64 - e).abs() < 0.01);
        }
    }

    #[test]
    fn huge_denominators_use_bigint_sampling() {
        let tiny: ExactScalar = "1/340282366920938463463374607431768211456".parse().unwrap();
        let rest = ExactScalar::one() - &tiny;
        let d = DiscreteDistribution::new(vec![p(0), p(1)], vec![tiny, rest], None).unwrap();
        assert!(matches!(d.cumulative, Cumulative::Big { .. }));
        let mut rng = Rng::new(8);
        for _ in 0..200 {
            assert_eq!(d.sample(&mut rng), &p(1));
        }
    }

    #[test]
    fn invalid_distributions_are_rejected() {
        let w = |a, b| ExactScalar::ratio(a, b).unwrap();
        assert!(DiscreteDistribution::new(vec![], vec![], None).is_err());
        assert!(DiscreteDistribution::new(vec![p(0)], vec![w(1, 2)], None).is_err());
        assert!(DiscreteDistribution::new(vec![p(0), p(0)], vec![w(1, 2), w(1, 2)], None).is_err());
        assert!(DiscreteDistribution::new(vec![p(0), p(1)], vec![w(3, 2), w(-1, 2)], None).is_err());
        let dom = GridDomain::line(2).unwrap();
        assert!(DiscreteDistribution::new(vec![p(0), p(5)], vec![w(1, 2), w(1, 2)], Some(&dom)).is_err());
    }
}
