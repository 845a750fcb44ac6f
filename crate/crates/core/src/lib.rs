//! Exact convexity testing for functions on discrete grids.
//!
//! The crate provides exact rational arithmetic, grid functions with
//! query-counting oracles, convexity checks based on linear programming,
//! sublinear convexity testers for the line and the `[3] x [n]` stripe, and
//! generators for families of functions that are hard to test.

pub mod descriptor;
pub mod distribution;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod hard_instances;
pub mod io;
pub mod line_tester;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod stripe_tester;

pub use descriptor::{Family, Instance, InstanceDescriptor};
pub use distribution::DiscreteDistribution;
pub use error::{Error, Result};
pub use grid::{FunctionSource, GridDomain, GridFunction, GridPoint};
pub use oracle::{make_oracle, QueryOracle};
pub use rng::{uniform_point, Rng};
pub use scalar::ExactScalar;
pub use report::{TestReport, Verdict, Witness};
