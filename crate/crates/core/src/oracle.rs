//! Query access to an unknown function, with counting.

use std::collections::HashSet;

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::grid::{FunctionSource, GridDomain, GridPoint};
use crate::rng::Rng;
use crate::scalar::ExactScalar;

/// Wraps a function so that every evaluation is counted.
///
/// `query_total` counts every call; `query_distinct` counts distinct points.
/// An optional distribution gives the tester sample access.
pub struct QueryOracle<'a> {
    source: &'a dyn FunctionSource,
    distribution: Option<&'a DiscreteDistribution>,
    query_total: u64,
    queried: HashSet<usize>,
    samples: u64,
    trace: Option<Vec<(GridPoint, ExactScalar)>>,
}

impl<'a> QueryOracle<'a> {
    pub fn new(source: &'a dyn FunctionSource) -> Self {
        QueryOracle {
            source,
            distribution: None,
            query_total: 0,
            queried: HashSet::new(),
            samples: 0,
            trace: None,
        }
    }

    pub fn with_distribution(mut self, distribution: &'a DiscreteDistribution) -> Self {
        self.distribution = Some(distribution);
        self
    }

    /// Record every query in order.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn domain(&self) -> &GridDomain {
        self.source.domain()
    }

    pub fn source(&self) -> &'a dyn FunctionSource {
        self.source
    }

    pub fn query(&mut self, point: &[i64]) -> Result<ExactScalar> {
        let index = self
            .source
            .domain()
            .index_of(point)
            .ok_or_else(|| Error::OutOfDomain {
                point: point.to_vec(),
                dims: self.source.domain().dims().to_vec(),
            })?;
        let value = self.source.value_at(point);
        self.query_total += 1;
        self.queried.insert(index);
        if let Some(trace) = &mut self.trace {
            trace.push((GridPoint::new(point.to_vec()), value.clone()));
        }
        Ok(value)
    }

    /// One draw from the attached distribution.
    pub fn sample(&mut self, rng: &mut Rng) -> Result<GridPoint> {
        let dist = self
            .distribution
            .ok_or_else(|| Error::invalid("oracle has no distribution to sample from"))?;
        self.samples += 1;
        Ok(dist.sample(rng).clone())
    }

    pub fn query_total(&self) -> u64 {
        self.query_total
    }

    pub fn query_distinct(&self) -> u64 {
        self.queried.len() as u64
    }

    pub fn samples_used(&self) -> u64 {
        self.samples
    }

    pub fn trace(&self) -> Option<&[(GridPoint, ExactScalar)]> {
        self.trace.as_deref()
    }
}

/// Oracle over `f` with no distribution attached.
pub fn make_oracle(f: &dyn FunctionSource) -> QueryOracle<'_> {
    QueryOracle::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridFunction;

    #[test]
    fn counts_queries() {
        let f = GridFunction::line(vec![ExactScalar::zero(); 5]).unwrap();
        let mut o = make_oracle(&f);
        assert_eq!(o.query(&[3]).unwrap(), ExactScalar::zero());
        assert_eq!(o.query_total(), 1);
        o.query(&[3]).unwrap();
        o.query(&[1]).unwrap();
        assert_eq!(o.query_total(), 3);
        assert_eq!(o.query_distinct(), 2);
    }

    #[test]
    fn square_values() {
        let f = GridFunction::line_from_ints(&[0, 1, 4, 9]).unwrap();
        let mut o = make_oracle(&f);
        assert_eq!(o.query(&[2]).unwrap(), ExactScalar::from(4));
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let f = GridFunction::line_from_ints(&[0, 1]).unwrap();
        let mut o = make_oracle(&f);
        assert!(matches!(o.query(&[2]), Err(Error::OutOfDomain { .. })));
        assert!(o.query(&[0, 0]).is_err());
        assert_eq!(o.query_total(), 0);
    }

    #[test]
    fn sampling_requires_a_distribution() {
        let f = GridFunction::line_from_ints(&[0, 1]).unwrap();
        let mut rng = Rng::new(0);
        let mut o = make_oracle(&f);
        assert!(o.sample(&mut rng).is_err());
        let d = DiscreteDistribution::point_mass(GridPoint::new(vec![1]));
        let mut o = make_oracle(&f).with_distribution(&d);
        assert_eq!(o.sample(&mut rng).unwrap(), GridPoint::new(vec![1]));
        assert_eq!(o.samples_used(), 1);
    }

    #[test]
    fn trace_replays_to_the_same_values() {
        let f = GridFunction::line_from_ints(&[3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
        let mut o = make_oracle(&f).with_trace();
        let mut rng = Rng::new(11);
        for _ in 0..40 {
            let x = rng.uniform(8) as i64;
            o.query(&[x]).unwrap();
        }
        let trace = o.trace().unwrap();
        let distinct: HashSet<_> = trace.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(distinct.len() as u64, o.query_distinct());
        assert_eq!(trace.len() as u64, o.query_total());
        for (p, v) in trace {
            assert_eq!(f.get(p.coords()).unwrap(), v);
        }
    }
}
