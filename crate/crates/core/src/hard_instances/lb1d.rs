//! Hard families on the line `[3^k]`.
//!
//! Points are read as `k`-digit ternary strings, digit 0 most significant.
//! An assignment gives a value `a_s` to every string `s` of length below `k`.
//! The discrete derivative at `x` is
//!
//! ```text
//! df(x) = sum_i m^(k-1-i) phi(x, i),  phi(x, i) = a_s, a_s + 1, m - 2 a_s - 1
//! ```
//!
//! for digit `x_i = 0, 1, 2`, where `s` is the length-`i` prefix of `x` and
//! `m = 3k^3`. The function `f_a` is the prefix sum of `df`, which is convex
//! because `df` is nondecreasing. The perturbed `g_{a,j}` shifts the level-`j`
//! values by `+1` or `-1` depending on digit `x_j`, which is enough to force
//! a change in every aligned 9-point block.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::rng::Rng;
use crate::scalar::ExactScalar;

const MAX_DIGITS: usize = 20;

/// Index of the string of length `len` whose base-3 value is `prefix`.
pub fn string_index(len: usize, prefix: u64) -> usize {
    (3usize.pow(len as u32) - 1) / 2 + prefix as usize
}

/// The `k` ternary digits of `x`, most significant first.
pub fn digits(x: u64, k: usize) -> Vec<u8> {
    let mut out = vec![0u8; k];
    let mut rest = x;
    for slot in out.iter_mut().rev() {
        *slot = (rest % 3) as u8;
        rest /= 3;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbAssignment {
    k: usize,
    values: Vec<i64>,
}

impl LbAssignment {
    /// Checks `k` and that every value lies in `[0, k^3 - 2]`.
    pub fn new(k: usize, values: Vec<i64>) -> Result<Self> {
        let a = Self::unchecked(k, values)?;
        let top = (k as i64).pow(3) - 2;
        if let Some(v) = a.values.iter().find(|&&v| v < 0 || v > top) {
            return Err(Error::invalid(format!("assignment value {v} outside [0, {top}]")));
        }
        Ok(a)
    }

    /// Like `new` but allows the widened range `[-1, k^3]` of perturbed
    /// assignments.
    pub fn extended(k: usize, values: Vec<i64>) -> Result<Self> {
        let a = Self::unchecked(k, values)?;
        let top = (k as i64).pow(3);
        if let Some(v) = a.values.iter().find(|&&v| v < -1 || v > top) {
            return Err(Error::invalid(format!("assignment value {v} outside [-1, {top}]")));
        }
        Ok(a)
    }

    fn unchecked(k: usize, values: Vec<i64>) -> Result<Self> {
        if !(1..=MAX_DIGITS).contains(&k) {
            return Err(Error::invalid(format!("digit count k = {k} outside [1, {MAX_DIGITS}]")));
        }
        let expect = (3usize.pow(k as u32) - 1) / 2;
        if values.len() != expect {
            return Err(Error::invalid(format!("expected {expect} assignment values, got {}", values.len())));
        }
        Ok(LbAssignment { k, values })
    }

    /// Uniform over `[0, k^3 - 2]` independently for every string.
    pub fn sample(k: usize, rng: &mut Rng) -> Result<Self> {
        if !(2..=MAX_DIGITS).contains(&k) {
            return Err(Error::invalid(format!("digit count k = {k} outside [2, {MAX_DIGITS}]")));
        }
        let len = (3usize.pow(k as u32) - 1) / 2;
        let top = (k as i64).pow(3) - 2;
        let values = (0..len).map(|_| rng.uniform_inclusive(0, top)).collect();
        Self::new(k, values)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `m = 3k^3`
    pub fn m(&self) -> i64 {
        3 * (self.k as i64).pow(3)
    }

    /// Domain size `3^k`.
    pub fn points(&self) -> u64 {
        3u64.pow(self.k as u32)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, len: usize, prefix: u64) -> i64 {
        self.values[string_index(len, prefix)]
    }

    /// Copy with a single value replaced; the widened range applies.
    pub fn with_value(&self, len: usize, prefix: u64, value: i64) -> Result<Self> {
        let mut values = self.values.clone();
        values[string_index(len, prefix)] = value;
        Self::extended(self.k, values)
    }

    /// `a[j, delta]`: `delta` added to every value at level `j`.
    pub fn perturbed(&self, j: usize, delta: i64) -> Result<Self> {
        if j >= self.k {
            return Err(Error::invalid(format!("level {j} outside [0, {})", self.k)));
        }
        let mut values = self.values.clone();
        let lo = string_index(j, 0);
        let hi = string_index(j + 1, 0);
        for v in &mut values[lo..hi] {
            *v += delta;
        }
        Self::extended(self.k, values)
    }

    fn check_point(&self, x: u64) -> Result<()> {
        if x >= self.points() {
            return Err(Error::invalid(format!("point {x} outside [0, {})", self.points())));
        }
        Ok(())
    }
}

fn phi(a: &LbAssignment, prefix: u64, i: usize, digit: u8) -> i64 {
    let s = a.get(i, prefix);
    match digit {
        0 => s,
        1 => s + 1,
        _ => a.m() - 2 * s - 1,
    }
}

fn derivative_unchecked(a: &LbAssignment, x: u64) -> BigInt {
    let m = BigInt::from(a.m());
    let mut total = BigInt::zero();
    let mut prefix = 0u64;
    for (i, d) in digits(x, a.k).into_iter().enumerate() {
        // Horner over i: total = total * m + phi_i
        total = total * &m + phi(a, prefix, i, d);
        prefix = 3 * prefix + d as u64;
    }
    total
}

/// `df_a(x) = sum_i m^(k-1-i) phi(x, i)`.
pub fn lb1d_derivative(a: &LbAssignment, x: u64) -> Result<BigInt> {
    a.check_point(x)?;
    Ok(derivative_unchecked(a, x))
}

/// `f_a(x) = sum_{z < x} df_a(z)`, summed directly.
pub fn lb1d_value(a: &LbAssignment, x: u64) -> Result<BigInt> {
    a.check_point(x)?;
    Ok((0..x).map(|z| derivative_unchecked(a, z)).sum())
}

/// `f_a` at every point, by one pass of prefix sums.
pub fn lb1d_values(a: &LbAssignment) -> Vec<BigInt> {
    let n = a.points();
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = BigInt::zero();
    for z in 0..n {
        out.push(acc.clone());
        acc += derivative_unchecked(a, z);
    }
    out
}

/// `f_a(x)` in closed form, `O(k)` big-integer operations.
///
/// Points below `x` either differ from `x` first at digit `i` in the prefix
/// (a full block, whose digit-`i` terms sum to `m 3^(k-1-i)`), or share the
/// prefix and have a smaller digit `i`, or share prefix and digit and have a
/// smaller suffix.
pub fn lb1d_value_closed(a: &LbAssignment, x: u64) -> Result<BigInt> {
    a.check_point(x)?;
    let k = a.k;
    let m = BigInt::from(a.m());
    let three_m = BigInt::from(3) * &m;
    let ds = digits(x, k);
    let mut total = BigInt::zero();
    let mut prefix = 0u64;
    for (i, &d) in ds.iter().enumerate() {
        let rest = (k - 1 - i) as u32;
        let suffix = x % 3u64.pow(rest);
        let block = 3i64.pow(rest);
        let s = a.get(i, prefix);
        let within: BigInt = match d {
            0 => BigInt::from(suffix) * s,
            1 => BigInt::from(block) * s + BigInt::from(suffix) * (s + 1),
            _ => BigInt::from(block) * (2 * s + 1) + BigInt::from(suffix) * (a.m() - 2 * s - 1),
        };
        total += three_m.pow(rest) * &m * prefix + m.pow(rest) * within;
        prefix = 3 * prefix + d as u64;
    }
    Ok(total)
}

/// `g_{a,j}(x)`: `f_{a[j,+1]}`, `f_{a[j,-1]}` or `f_a` for digit `x_j = 0, 1, 2`.
///
/// Far from convex for `j < k - 1`. At `j = k - 1` the result is convex: the
/// slopes inside each last-digit triple move by `-1, +1, 0` and stay ordered.
pub fn lb1d_g(a: &LbAssignment, j: usize, x: u64) -> Result<BigInt> {
    a.check_point(x)?;
    if j >= a.k {
        return Err(Error::invalid(format!("level {j} outside [0, {})", a.k)));
    }
    match digits(x, a.k)[j] {
        0 => lb1d_value_closed(&a.perturbed(j, 1)?, x),
        1 => lb1d_value_closed(&a.perturbed(j, -1)?, x),
        _ => lb1d_value_closed(a, x),
    }
}

/// `g_{a,j}` at every point, from prefix-sum tables of the three assignments.
pub fn lb1d_g_values(a: &LbAssignment, j: usize) -> Result<Vec<BigInt>> {
    let plus = lb1d_values(&a.perturbed(j, 1)?);
    let minus = lb1d_values(&a.perturbed(j, -1)?);
    let base = lb1d_values(a);
    Ok((0..a.points())
        .map(|x| {
            let table = match digits(x, a.k)[j] {
                0 => &plus,
                1 => &minus,
                _ => &base,
            };
            table[x as usize].clone()
        })
        .collect())
}

fn to_line(values: Vec<BigInt>) -> Result<GridFunction> {
    GridFunction::line(values.into_iter().map(ExactScalar::from_bigint).collect())
}

/// `f_a` as a dense function on `[3^k]`.
pub fn lb1d_f_function(a: &LbAssignment) -> Result<GridFunction> {
    to_line(lb1d_values(a))
}

/// `g_{a,j}` as a dense function on `[3^k]`.
pub fn lb1d_g_function(a: &LbAssignment, j: usize) -> Result<GridFunction> {
    to_line(lb1d_g_values(a, j)?)
}

/// `l` independent blocks on `[l 3^k]`; block `t` uses assignment `a^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralEpsAssignment {
    blocks: Vec<LbAssignment>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneralMode {
    /// `f~_a`
    Convex,
    /// `g~_{a,t,j}`
    Perturbed { t: usize, j: usize },
}

impl GeneralEpsAssignment {
    pub fn new(blocks: Vec<LbAssignment>) -> Result<Self> {
        let k = blocks.first().ok_or_else(|| Error::invalid("need at least one block"))?.k;
        if blocks.iter().any(|b| b.k != k) {
            return Err(Error::invalid("all blocks need the same digit count"));
        }
        Ok(GeneralEpsAssignment { blocks })
    }

    /// `l = ceil(1 / (9 eps))` and the largest `k` with `l 3^k <= n`.
    pub fn parameters(eps: &ExactScalar, n: u64) -> Result<(usize, usize)> {
        let ninth = ExactScalar::ratio(1, 9)?;
        if !eps.is_positive() || eps > &ninth {
            return Err(Error::invalid(format!("eps = {eps} outside (0, 1/9]")));
        }
        if eps * &ExactScalar::from(n as i64) < ExactScalar::one() {
            return Err(Error::invalid(format!("eps = {eps} below 1/n for n = {n}")));
        }
        let l = (ExactScalar::one() / (ExactScalar::from(9) * eps))
            .ceil()
            .try_into()
            .map_err(|_| Error::invalid("block count overflows"))?;
        let mut k = 0usize;
        while (l as u64).saturating_mul(3u64.pow(k as u32 + 1)) <= n {
            k += 1;
        }
        if k < 2 {
            return Err(Error::invalid(format!("n = {n} too small for eps = {eps}: fewer than 9 points per block")));
        }
        Ok((l, k))
    }

    pub fn sample(l: usize, k: usize, rng: &mut Rng) -> Result<Self> {
        if l == 0 {
            return Err(Error::invalid("need at least one block"));
        }
        Self::new((0..l).map(|_| LbAssignment::sample(k, rng)).collect::<Result<_>>()?)
    }

    pub fn sample_for(eps: &ExactScalar, n: u64, rng: &mut Rng) -> Result<Self> {
        let (l, k) = Self::parameters(eps, n)?;
        Self::sample(l, k, rng)
    }

    pub fn blocks(&self) -> &[LbAssignment] {
        &self.blocks
    }

    pub fn l(&self) -> usize {
        self.blocks.len()
    }

    pub fn k(&self) -> usize {
        self.blocks[0].k
    }

    pub fn points(&self) -> u64 {
        self.l() as u64 * self.blocks[0].points()
    }

    fn check_mode(&self, mode: GeneralMode) -> Result<()> {
        if let GeneralMode::Perturbed { t, j } = mode {
            if t >= self.l() || j >= self.k() {
                return Err(Error::invalid(format!("(t, j) = ({t}, {j}) out of range")));
            }
        }
        Ok(())
    }

    /// The assignment whose prefix sums give the value at `x`.
    fn effective(&self, mode: GeneralMode, x: u64) -> Result<Vec<LbAssignment>> {
        let mut blocks = self.blocks.clone();
        if let GeneralMode::Perturbed { t, j } = mode {
            let size = self.blocks[0].points();
            if x / size == t as u64 {
                let delta = match digits(x % size, self.k())[j] {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                };
                blocks[t] = blocks[t].perturbed(j, delta)?;
            }
        }
        Ok(blocks)
    }
}

fn general_derivative(blocks: &[LbAssignment], z: u64) -> BigInt {
    let size = blocks[0].points();
    let t = z / size;
    let shift = BigInt::from(t) * BigInt::from(blocks[0].m()).pow(blocks[0].k as u32);
    shift + derivative_unchecked(&blocks[t as usize], z % size)
}

/// `f~_a` or `g~_{a,t,j}` at `x`, by prefix-summing the block-shifted
/// derivative `t m^k + df_{a^t}`. Points outside block `t` of a perturbed
/// instance take the value of `f~_a`.
pub fn lb1d_general(assign: &GeneralEpsAssignment, mode: GeneralMode, x: u64) -> Result<BigInt> {
    assign.check_mode(mode)?;
    if x >= assign.points() {
        return Err(Error::invalid(format!("point {x} outside [0, {})", assign.points())));
    }
    let blocks = assign.effective(mode, x)?;
    Ok((0..x).map(|z| general_derivative(&blocks, z)).sum())
}

/// All values of `lb1d_general`.
pub fn lb1d_general_values(assign: &GeneralEpsAssignment, mode: GeneralMode) -> Result<Vec<BigInt>> {
    assign.check_mode(mode)?;
    let mut out = Vec::with_capacity(assign.points() as usize);
    let mut acc = BigInt::zero();
    for z in 0..assign.points() {
        out.push(acc.clone());
        acc += general_derivative(&assign.blocks, z);
    }
    if let GeneralMode::Perturbed { t, j } = mode {
        let base = &assign.blocks[t];
        let size = base.points();
        let start = t as u64 * size;
        let before = out[start as usize].clone();
        let shift = BigInt::from(t) * BigInt::from(base.m()).pow(base.k as u32);
        let plus = lb1d_values(&base.perturbed(j, 1)?);
        let minus = lb1d_values(&base.perturbed(j, -1)?);
        for x in 0..size {
            let within = match digits(x, base.k)[j] {
                0 => &plus[x as usize],
                1 => &minus[x as usize],
                _ => continue,
            };
            out[(start + x) as usize] = &before + &shift * x + within;
        }
    }
    Ok(out)
}

pub fn lb1d_general_function(assign: &GeneralEpsAssignment, mode: GeneralMode) -> Result<GridFunction> {
    to_line(lb1d_general_values(assign, mode)?)
}

/// Upper bound `3^k m^k` on every value of `f_a`.
pub fn lb1d_value_bound(k: usize) -> BigInt {
    let m = BigInt::from(3 * (k as i64).pow(3));
    BigInt::from(3).pow(k as u32) * m.pow(k as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::line::{distance_to_convex_line, is_convex_line};

    fn random(k: usize, seed: u64) -> LbAssignment {
        LbAssignment::sample(k, &mut Rng::new(seed)).unwrap()
    }

    #[test]
    fn two_digit_conventions() {
        assert_eq!(digits(5, 2), vec![1, 2]);
        assert_eq!(digits(0, 3), vec![0, 0, 0]);
        assert_eq!(string_index(0, 0), 0);
        assert_eq!(string_index(1, 2), 3);
        assert_eq!(string_index(2, 0), 4);
    }

    #[test]
    fn hand_evaluation_k2() {
        // m = 24; phi is 1, 2, 21 for digits 0, 1, 2 when every a_s = 1
        let a = LbAssignment::new(2, vec![1; 4]).unwrap();
        assert_eq!(a.m(), 24);
        let d: Vec<BigInt> = (0..4).map(|x| lb1d_derivative(&a, x).unwrap()).collect();
        assert_eq!(d, vec![25.into(), 26.into(), 45.into(), 49.into()]);
        assert_eq!(lb1d_value(&a, 4).unwrap(), BigInt::from(145));
        assert_eq!(lb1d_value_closed(&a, 4).unwrap(), BigInt::from(145));
        assert_eq!(lb1d_value(&a, 0).unwrap(), BigInt::zero());
        assert_eq!(lb1d_value_closed(&a, 0).unwrap(), BigInt::zero());
    }

    #[test]
    fn derivative_is_monotone() {
        for seed in 0..100 {
            let a = random(4, seed);
            let d: Vec<BigInt> = (0..81).map(|x| lb1d_derivative(&a, x).unwrap()).collect();
            assert!(d.windows(2).all(|w| w[0] <= w[1]), "seed {seed}");
        }
    }

    #[test]
    fn closed_form_matches_prefix_sums() {
        for k in 2..=5 {
            for seed in 0..20 {
                let a = random(k, seed);
                let table = lb1d_values(&a);
                for x in 0..a.points() {
                    assert_eq!(lb1d_value_closed(&a, x).unwrap(), table[x as usize], "k {k} x {x}");
                }
                assert_eq!(lb1d_value(&a, a.points() - 1).unwrap(), table[table.len() - 1]);
            }
        }
    }

    #[test]
    fn closed_form_holds_on_perturbed_assignments() {
        let a = random(3, 4);
        for j in 0..3 {
            for delta in [-1, 1] {
                let b = a.perturbed(j, delta).unwrap();
                let table = lb1d_values(&b);
                for x in 0..27 {
                    assert_eq!(lb1d_value_closed(&b, x).unwrap(), table[x as usize]);
                }
            }
        }
    }

    #[test]
    fn values_depend_only_on_prefixes() {
        let a = random(4, 9);
        let mut rng = Rng::new(10);
        for _ in 0..200 {
            let x = rng.uniform(81);
            let len = rng.uniform(4) as usize;
            let prefix = rng.uniform(3u64.pow(len as u32));
            let is_prefix = x / 3u64.pow((4 - len) as u32) == prefix;
            let b = a.with_value(len, prefix, a.get(len, prefix) + 1).unwrap();
            let same = lb1d_value_closed(&a, x).unwrap() == lb1d_value_closed(&b, x).unwrap();
            if !is_prefix {
                assert!(same);
            }
        }
    }

    #[test]
    fn f_is_convex_and_bounded() {
        for k in 2..=5 {
            for seed in 0..5 {
                let a = random(k, 100 + seed);
                let f = lb1d_f_function(&a).unwrap();
                assert!(is_convex_line(&f).unwrap());
                let bound = ExactScalar::from_bigint(lb1d_value_bound(k));
                assert!(f.values().iter().all(|v| v <= &bound));
            }
        }
    }

    #[test]
    fn g_agrees_with_f_where_digit_is_two() {
        let a = random(3, 1);
        for j in 0..3 {
            for x in 0..27 {
                if digits(x, 3)[j] == 2 {
                    assert_eq!(lb1d_g(&a, j, x).unwrap(), lb1d_value(&a, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn g_routes_agree() {
        let a = random(4, 2);
        for j in 0..4 {
            let table = lb1d_g_values(&a, j).unwrap();
            for x in 0..81 {
                assert_eq!(lb1d_g(&a, j, x).unwrap(), table[x as usize]);
            }
        }
        assert!(lb1d_g(&a, 4, 0).is_err());
    }

    #[test]
    fn g_derivative_drops_inside_each_block() {
        let k = 4;
        for seed in 0..10 {
            let a = random(k, 200 + seed);
            for j in 0..k - 1 {
                let g = lb1d_g_values(&a, j).unwrap();
                let dg = |x: u64| &g[x as usize + 1] - &g[x as usize];
                for x in 0..a.points() {
                    let ds = digits(x, k);
                    if ds[j] == 0 && ds[k - 1] == 0 {
                        let y = x + 3u64.pow((k - 1 - j) as u32);
                        assert!(dg(y) < dg(x), "seed {seed} j {j} x {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn g_is_far_from_convex_below_the_last_level() {
        let ninth = ExactScalar::ratio(1, 9).unwrap();
        for seed in 0..20 {
            let a = random(3, 300 + seed);
            for j in 0..2 {
                let g = lb1d_g_function(&a, j).unwrap();
                assert!(distance_to_convex_line(&g).unwrap() >= ninth, "seed {seed} j {j}");
            }
        }
    }

    #[test]
    fn g_at_the_last_level_stays_convex() {
        // Over a full last-digit triple the shifts +1, +1, -2 cancel, and inside
        // a triple the slopes become a - 1, a + 2, m - 2a - 1: still increasing.
        for k in 2..=4 {
            for seed in 0..5 {
                let a = random(k, 400 + seed);
                let g = lb1d_g_function(&a, k - 1).unwrap();
                assert!(is_convex_line(&g).unwrap());
            }
        }
    }

    #[test]
    fn general_parameters() {
        let r = |a, b| ExactScalar::ratio(a, b).unwrap();
        assert_eq!(GeneralEpsAssignment::parameters(&r(1, 9), 243).unwrap(), (1, 5));
        assert_eq!(GeneralEpsAssignment::parameters(&r(1, 27), 81).unwrap(), (3, 3));
        assert_eq!(GeneralEpsAssignment::parameters(&r(1, 27), 80).unwrap(), (3, 2));
        assert!(GeneralEpsAssignment::parameters(&r(1, 2), 100).is_err());
        assert!(GeneralEpsAssignment::parameters(&r(1, 200), 100).is_err());
    }

    /// Block decomposition: earlier blocks contribute `3^k u m^k` plus a full
    /// sum of `df`, which is `3^(k-1) m sum_i m^(k-1-i)` for every assignment.
    fn decomposed(assign: &GeneralEpsAssignment, x: u64) -> BigInt {
        let k = assign.k();
        let m = BigInt::from(assign.blocks()[0].m());
        let size = 3u64.pow(k as u32);
        let full: BigInt = (0..k as u32).map(|i| m.pow(i)).sum::<BigInt>() * &m * 3u64.pow(k as u32 - 1);
        let (t, r) = (x / size, x % size);
        let mut total = BigInt::zero();
        for u in 0..t {
            total += BigInt::from(size * u) * m.pow(k as u32) + &full;
        }
        total + BigInt::from(t * r) * m.pow(k as u32) + lb1d_value_closed(&assign.blocks()[t as usize], r).unwrap()
    }

    #[test]
    fn general_convex_family() {
        let mut rng = Rng::new(31);
        for _ in 0..5 {
            let assign = GeneralEpsAssignment::sample(3, 3, &mut rng).unwrap();
            let values = lb1d_general_values(&assign, GeneralMode::Convex).unwrap();
            for x in 0..81 {
                assert_eq!(values[x as usize], decomposed(&assign, x));
            }
            assert_eq!(lb1d_general(&assign, GeneralMode::Convex, 50).unwrap(), values[50]);
            let f = lb1d_general_function(&assign, GeneralMode::Convex).unwrap();
            assert!(is_convex_line(&f).unwrap());
        }
    }

    #[test]
    fn general_perturbed_family() {
        let mut rng = Rng::new(32);
        let target = ExactScalar::ratio(1, 27).unwrap();
        for _ in 0..5 {
            let assign = GeneralEpsAssignment::sample(3, 3, &mut rng).unwrap();
            for t in 0..3 {
                for j in 0..3 {
                    let mode = GeneralMode::Perturbed { t, j };
                    let values = lb1d_general_values(&assign, mode).unwrap();
                    for x in (0..81).step_by(7) {
                        assert_eq!(lb1d_general(&assign, mode, x).unwrap(), values[x as usize]);
                    }
                    let g = lb1d_general_function(&assign, mode).unwrap();
                    if j < 2 {
                        assert!(distance_to_convex_line(&g).unwrap() >= target);
                    } else {
                        assert!(is_convex_line(&g).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn general_block_locality() {
        let mut rng = Rng::new(33);
        let assign = GeneralEpsAssignment::sample(3, 3, &mut rng).unwrap();
        let mut blocks = assign.blocks().to_vec();
        blocks[1] = LbAssignment::sample(3, &mut rng).unwrap();
        let other = GeneralEpsAssignment::new(blocks).unwrap();
        let a = lb1d_general_values(&assign, GeneralMode::Convex).unwrap();
        let b = lb1d_general_values(&other, GeneralMode::Convex).unwrap();
        // a full block sums to the same total for every assignment
        for x in (0..=27).chain(54..81) {
            assert_eq!(a[x], b[x]);
        }
        assert_ne!(a[40], b[40]);
    }
}
