//! Deterministic, label-splittable randomness.

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded ChaCha stream. Child streams are derived from the parent seed and a
/// string label, so the same seed and label sequence always reproduce the same
/// draws regardless of how much the parent has been used.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// SplitMix64 finaliser.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream keyed by `label`.
    pub fn split(&self, label: &str) -> Rng {
        Rng::new(mix64(self.seed ^ mix64(fnv1a(label.as_bytes()))))
    }

    /// Uniform draw from `[0, n)`; `n` must be positive.
    pub fn uniform(&mut self, n: u64) -> u64 {
        assert!(n > 0, "uniform draw from an empty range");
        self.inner.gen_range(0..n)
    }

    /// Uniform draw from the inclusive range `[lo, hi]`.
    pub fn uniform_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        self.inner.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.inner.gen_bool(0.5)
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Uniform point of `[n]`.
pub fn uniform_point(n: usize, rng: &mut Rng) -> usize {
    rng.uniform(n as u64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_range() {
        let mut rng = Rng::new(3);
        for _ in 0..10 {
            assert_eq!(uniform_point(1, &mut rng), 0);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let draw = |seed| {
            let mut r = Rng::new(seed);
            (0..50).map(|_| uniform_point(100, &mut r)).collect::<Vec<_>>()
        };
        assert_eq!(draw(17), draw(17));
        assert_ne!(draw(17), draw(18));
    }

    #[test]
    fn split_depends_only_on_seed_and_label() {
        let mut a = Rng::new(5);
        let b = Rng::new(5);
        a.uniform(10);
        let mut x = a.split("trial-1");
        let mut y = b.split("trial-1");
        let mut z = b.split("trial-2");
        let xs: Vec<u64> = (0..8).map(|_| x.uniform(1 << 40)).collect();
        let ys: Vec<u64> = (0..8).map(|_| y.uniform(1 << 40)).collect();
        let zs: Vec<u64> = (0..8).map(|_| z.uniform(1 << 40)).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }

    #[test]
    fn three_way_frequencies_are_uniform() {
        let mut rng = Rng::new(2024);
        let mut counts = [0usize; 3];
        let draws = 300_000;
        for _ in 0..draws {
            counts[uniform_point(3, &mut rng)] += 1;
        }
        for c in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.01, "frequency {freq}");
        }
    }
}
