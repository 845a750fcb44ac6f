//! Certified families of functions that are hard to test.

mod appendix;
mod basis;
mod convex;
mod highdim;
mod lb1d;
mod signs;

pub use appendix::appendix_counterexample;
pub use basis::{canonical_g, sample_direction, sample_stripe_direction, BasisCompletion};
pub use convex::{random_convex_grid, random_convex_line, random_convex_sequence, random_convex_stripe};
pub use highdim::{
    sample_dn, sample_dn_stripe, sample_dy, sample_dy_stripe, verify_dn_far, BasisInstance, FarnessCertificate,
    InstanceKind,
};
pub use lb1d::{
    digits, lb1d_derivative, lb1d_f_function, lb1d_g, lb1d_g_function, lb1d_g_values, lb1d_general,
    lb1d_general_function, lb1d_general_values, lb1d_value, lb1d_value_bound, lb1d_value_closed, lb1d_values,
    string_index, GeneralEpsAssignment, GeneralMode, LbAssignment,
};
pub use signs::SignField;
