//! Exact convex geometry on grids.

pub mod bisection;
pub mod envelope;
pub mod line;
pub mod linalg;
pub mod lp;
pub mod simplex;

pub use bisection::{bisection_min, try_bisection_min, BisectionResult};
pub use envelope::{
    envelope, envelope_value, find_grid_violation, find_line_violation, find_violation_points,
    is_convex_grid, is_convex_points, is_line_convex_grid, Envelope, Violation,
};
pub use line::{
    distance_to_convex_line, first_line_violation, is_convex_line, longest_convex_subsequence,
    triple_is_convex,
};
pub use lp::{solve_lp, LpProblem, LpResult};
pub use simplex::{
    is_convex_via_minimal_simplices, minimal_centred_simplices, CentredSimplex, MinimalSimplexIndex,
};
