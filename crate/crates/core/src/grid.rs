//! Hypergrid domains `[n_1] x ... x [n_d]` and dense functions over them.
//!
//! Coordinates start at zero. Dense storage is row-major with the last
//! coordinate varying fastest.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridDomain {
    dims: Vec<usize>,
}

impl GridDomain {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::invalid("a grid needs at least one dimension"));
        }
        if dims.contains(&0) {
            return Err(Error::invalid(format!("grid extents must be positive, got {dims:?}")));
        }
        let mut count: u128 = 1;
        for &n in &dims {
            count = count
                .checked_mul(n as u128)
                .ok_or_else(|| Error::invalid("grid has too many points"))?;
        }
        if count > i64::MAX as u128 {
            return Err(Error::invalid("grid has too many points"));
        }
        Ok(GridDomain { dims })
    }

    /// `[n]`
    pub fn line(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `[3] x [n]`
    pub fn stripe(n: usize) -> Result<Self> {
        Self::new(vec![3, n])
    }

    /// `[n]^d`
    pub fn cube(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![n; d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.dims.len()
            && point.iter().zip(&self.dims).all(|(&c, &n)| c >= 0 && (c as u64) < n as u64)
    }

    pub fn check(&self, point: &[i64]) -> Result<()> {
        if self.contains(point) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { point: point.to_vec(), dims: self.dims.clone() })
        }
    }

    /// Row-major index of a point, or `None` outside the domain.
    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        if !self.contains(point) {
            return None;
        }
        let mut index = 0usize;
        for (&c, &n) in point.iter().zip(&self.dims) {
            index = index * n + c as usize;
        }
        Some(index)
    }

    pub fn point_at(&self, mut index: usize) -> GridPoint {
        let mut coords = vec![0i64; self.dims.len()];
        for (slot, &n) in coords.iter_mut().zip(&self.dims).rev() {
            *slot = (index % n) as i64;
            index /= n;
        }
        GridPoint(coords)
    }

    /// All points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.len()).map(|i| self.point_at(i))
    }
}

/// A point of `Z^d`; inside a domain it is a grid point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint(pub Vec<i64>);

impl GridPoint {
    pub fn new(coords: Vec<i64>) -> Self {
        GridPoint(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<i64>> for GridPoint {
    fn from(v: Vec<i64>) -> Self {
        GridPoint(v)
    }
}

impl<const N: usize> From<[i64; N]> for GridPoint {
    fn from(v: [i64; N]) -> Self {
        GridPoint(v.to_vec())
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Read access to a function on a grid, either stored or computed on demand.
pub trait FunctionSource: Send + Sync {
    fn domain(&self) -> &GridDomain;

    /// Value at a point already known to be inside the domain.
    fn value_at(&self, point: &[i64]) -> ExactScalar;

    /// Dense copy of the function.
    fn materialize(&self) -> GridFunction {
        let domain = self.domain().clone();
        let values = domain.points().map(|p| self.value_at(p.coords())).collect();
        GridFunction { domain, values }
    }
}

/// A function stored densely over its whole domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    domain: GridDomain,
    values: Vec<ExactScalar>,
}

impl GridFunction {
    pub fn new(domain: GridDomain, values: Vec<ExactScalar>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::invalid(format!(
                "expected {} values for domain {:?}, got {}",
                domain.len(),
                domain.dims(),
                values.len()
            )));
        }
        Ok(GridFunction { domain, values })
    }

    pub fn from_fn(domain: GridDomain, mut f: impl FnMut(&[i64]) -> ExactScalar) -> Self {
        let values = domain.points().map(|p| f(p.coords())).collect();
        GridFunction { domain, values }
    }

    /// A function on `[n]` from its values.
    pub fn line(values: Vec<ExactScalar>) -> Result<Self> {
        let domain = GridDomain::line(values.len())?;
        Ok(GridFunction { domain, values })
    }

    /// A function on `[n]` from integer values.
    pub fn line_from_ints(values: &[i64]) -> Result<Self> {
        Self::line(values.iter().map(|&v| ExactScalar::from(v)).collect())
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[ExactScalar] {
        &self.values
    }

    pub fn get(&self, point: &[i64]) -> Result<&ExactScalar> {
        match self.domain.index_of(point) {
            Some(i) => Ok(&self.values[i]),
            None => Err(Error::OutOfDomain {
                point: point.to_vec(),
                dims: self.domain.dims().to_vec(),
            }),
        }
    }

    pub fn set(&mut self, point: &[i64], value: ExactScalar) -> Result<()> {
        let i = self.domain.index_of(point).ok_or_else(|| Error::OutOfDomain {
            point: point.to_vec(),
            dims: self.domain.dims().to_vec(),
        })?;
        self.values[i] = value;
        Ok(())
    }

    /// `(point, value)` pairs in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (GridPoint, &ExactScalar)> + '_ {
        self.domain.points().zip(self.values.iter())
    }

    /// Column `i` of a two-dimensional function, as a function on `[n_2]`.
    pub fn column(&self, i: i64) -> Result<GridFunction> {
        if self.domain.dimension() != 2 {
            return Err(Error::invalid("column() needs a two-dimensional function"));
        }
        let n = self.domain.dims()[1];
        if i < 0 || i as usize >= self.domain.dims()[0] {
            return Err(Error::invalid(format!("column {i} out of range")));
        }
        let start = i as usize * n;
        GridFunction::line(self.values[start..start + n].to_vec())
    }

    fn require_line(&self) -> Result<()> {
        if self.domain.dimension() == 1 {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected a function on a line, got dimension {}",
                self.domain.dimension()
            )))
        }
    }

    /// The values as a slice, for one-dimensional functions.
    pub fn line_values(&self) -> Result<&[ExactScalar]> {
        self.require_line()?;
        Ok(&self.values)
    }
}

impl FunctionSource for GridFunction {
    fn domain(&self) -> &GridDomain {
        &self.domain
    }

    fn value_at(&self, point: &[i64]) -> ExactScalar {
        let i = self.domain.index_of(point).expect("point inside domain");
        self.values[i].clone()
    }

    fn materialize(&self) -> GridFunction {
        self.clone()
    }
}
