//! Random sign functions on integer tuples.

use crate::rng::mix64;

/// A random function `sigma: Z^k -> {-1, +1}` evaluated on demand.
///
/// Each sign is a keyed hash of the seed and the tuple, so the field needs no
/// storage, is safe to share across threads, and returns the same sign for
/// the same tuple every time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignField {
    seed: u64,
    forced: Option<i8>,
}

impl SignField {
    pub fn new(seed: u64) -> Self {
        SignField { seed, forced: None }
    }

    /// The constant field `sigma = sign`.
    pub fn constant(sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "a sign is +1 or -1");
        SignField { seed: 0, forced: Some(sign) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sign(&self, z: &[i64]) -> i64 {
        if let Some(s) = self.forced {
            return s as i64;
        }
        let mut h = mix64(self.seed);
        for &c in z {
            h = mix64(h ^ c as u64);
        }
        h = mix64(h ^ z.len() as u64);
        if h >> 63 == 0 {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_and_seed_dependent() {
        let s = SignField::new(9);
        let t = SignField::new(10);
        let a: Vec<i64> = (0..64).map(|z| s.sign(&[z, -z])).collect();
        let b: Vec<i64> = (0..64).map(|z| s.sign(&[z, -z])).collect();
        let c: Vec<i64> = (0..64).map(|z| t.sign(&[z, -z])).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn roughly_fair() {
        let s = SignField::new(77);
        let plus = (-5000..5000).filter(|&z| s.sign(&[z]) == 1).count();
        assert!((4700..5300).contains(&plus), "{plus}");
    }

    #[test]
    fn forced_sign() {
        let s = SignField::constant(-1);
        assert!((0..20).all(|z| s.sign(&[z, 3]) == -1));
    }
}
