//! Instances survive the text formats and rebuild identically.

use convexity_core::geometry::{find_grid_violation, is_convex_line};
use convexity_core::io::{read_function, write_function};
use convexity_core::{FunctionSource, GridPoint, InstanceDescriptor};

fn round_trip(descriptor: &str) -> convexity_core::GridFunction {
    let f = descriptor.parse::<InstanceDescriptor>().unwrap().build().unwrap().materialize();
    let mut buf = Vec::new();
    write_function(&f, &mut buf).unwrap();
    let back = read_function(buf.as_slice()).unwrap();
    assert_eq!(back, f);
    back
}

#[test]
fn appendix_file() {
    let f = round_trip("family=appendixA");
    let v = find_grid_violation(&f).unwrap().unwrap();
    assert_eq!(v.centre, GridPoint::from([1, 1]));
}

#[test]
fn lb1d_files() {
    let f = round_trip("family=lb1d_f k=3 seed=1");
    assert_eq!(f.domain().len(), 27);
    assert!(is_convex_line(&f).unwrap());
    let g = round_trip("family=lb1d_g k=3 j=0 seed=1");
    assert!(!is_convex_line(&g).unwrap());
}

#[test]
fn hidden_basis_files() {
    let f = round_trip("family=dn d=2 n=16 seed=7");
    assert_eq!(f.domain().dims(), &[16, 16]);
    let lazy = "family=dn d=2 n=16 seed=7".parse::<InstanceDescriptor>().unwrap().build().unwrap();
    for p in f.domain().points().step_by(13) {
        assert_eq!(&lazy.value_at(p.coords()), f.get(p.coords()).unwrap());
    }
}
