//! A function on `[3] x [3]` that is convex along every lattice line but not
//! convex.

use crate::grid::{GridDomain, GridFunction};
use crate::scalar::ExactScalar;

/// Values indexed by `3x + y`.
const TABLE: [i64; 9] = [5, 1, 3, 3, 2, 1, 1, 3, 5];

pub fn appendix_counterexample() -> GridFunction {
    let domain = GridDomain::cube(3, 2).expect("valid domain");
    let values = TABLE.iter().map(|&v| ExactScalar::from(v)).collect();
    GridFunction::new(domain, values).expect("nine values")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::envelope::{find_grid_violation, is_line_convex_grid};
    use crate::grid::GridPoint;

    #[test]
    fn table_values() {
        let f = appendix_counterexample();
        assert_eq!(f.get(&[1, 1]).unwrap(), &ExactScalar::from(2));
        assert_eq!(f.get(&[2, 2]).unwrap(), &ExactScalar::from(5));
        assert_eq!(f.get(&[0, 0]).unwrap(), &ExactScalar::from(5));
        assert_eq!(f.get(&[2, 0]).unwrap(), &ExactScalar::from(1));
    }

    #[test]
    fn line_convex_but_not_convex() {
        let f = appendix_counterexample();
        assert!(is_line_convex_grid(&f));
        let v = find_grid_violation(&f).unwrap().unwrap();
        assert_eq!(v.centre, GridPoint::from([1, 1]));
        assert_eq!(v.envelope, ExactScalar::one());
        let mut support: Vec<GridPoint> = v.combination.iter().map(|(p, _)| p.clone()).collect();
        support.sort();
        assert_eq!(support, vec![GridPoint::from([0, 1]), GridPoint::from([1, 2]), GridPoint::from([2, 0])]);
    }
}
