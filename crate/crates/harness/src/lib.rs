//! Experiment orchestration for the convexity testers: repeated seeded
//! trials with CSV output, query-scaling regressions, and the file-level
//! commands behind the `convexity` binary.

pub mod commands;
pub mod experiment;
pub mod scaling;
pub mod stats;
