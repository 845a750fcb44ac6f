//! Exact rational scalars.
//!
//! [`ExactScalar`] keeps values that fit in a pair of `i64` words in an inline
//! representation and computes with 128-bit intermediates; anything larger is
//! promoted to a [`BigRational`]. Results are always normalised (positive
//! denominator, reduced, demoted back to the inline form when they fit), so
//! two equal values always share one representation.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone)]
enum Repr {
    /// `den > 0`, `gcd(|num|, den) == 1`.
    Small { num: i64, den: i64 },
    /// Only used when the value does not fit `Small`.
    Big(Box<BigRational>),
}

/// An exact rational number.
#[derive(Clone)]
pub struct ExactScalar(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        ExactScalar(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_integer(value: i64) -> Self {
        ExactScalar(Repr::Small { num: value, den: 1 })
    }

    /// Builds `numer / denom`; fails on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Self::from_i128_pair(numer as i128, denom as i128))
    }

    pub fn from_bigint(value: BigInt) -> Self {
        match value.to_i64() {
            Some(v) => Self::from_integer(v),
            None => ExactScalar(Repr::Big(Box::new(BigRational::from_integer(value)))),
        }
    }

    pub fn from_bigrational(value: BigRational) -> Self {
        // BigRational is kept reduced with a positive denominator.
        if let (Some(num), Some(den)) = (value.numer().to_i64(), value.denom().to_i64()) {
            return ExactScalar(Repr::Small { num, den });
        }
        ExactScalar(Repr::Big(Box::new(value)))
    }

    /// Exact conversion of a finite binary float (every such float is dyadic).
    pub fn from_f64(value: f64) -> Result<Self> {
        BigRational::from_float(value)
            .map(Self::from_bigrational)
            .ok_or_else(|| Error::Parse(format!("non-finite float {value}")))
    }

    fn from_i128_pair(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        if den != 1 {
            let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
            if g > 1 {
                num /= g;
                den /= g;
            }
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => ExactScalar(Repr::Small { num, den }),
            _ => ExactScalar(Repr::Big(Box::new(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            )))),
        }
    }

    pub fn to_bigrational(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small { num, den: 1 } => Some(*num),
            _ => None,
        }
    }

    /// Nearest float; for reporting only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(b) => match b.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("reciprocal of zero".into()));
        }
        Ok(match &self.0 {
            Repr::Small { num, den } => Self::from_i128_pair(*den as i128, *num as i128),
            Repr::Big(b) => Self::from_bigrational(b.recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        Ok(self / rhs)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, den } => BigInt::from(num.div_floor(den)),
            Repr::Big(b) => b.floor().to_integer(),
        }
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, den } => BigInt::from(num.div_ceil(den)),
            Repr::Big(b) => b.ceil().to_integer(),
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if *b == 1 && *d == 1 {
                    let s = *a as i128 + *c as i128;
                    return match i64::try_from(s) {
                        Ok(num) => ExactScalar(Repr::Small { num, den: 1 }),
                        Err(_) => Self::from_i128_pair(s, 1),
                    };
                }
                let num = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                let den = *b as i128 * *d as i128;
                Self::from_i128_pair(num, den)
            }
            _ => Self::from_bigrational(self.to_bigrational() + rhs.to_bigrational()),
        }
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if *b == 1 && *d == 1 {
                    let s = *a as i128 - *c as i128;
                    return match i64::try_from(s) {
                        Ok(num) => ExactScalar(Repr::Small { num, den: 1 }),
                        Err(_) => Self::from_i128_pair(s, 1),
                    };
                }
                let num = *a as i128 * *d as i128 - *c as i128 * *b as i128;
                let den = *b as i128 * *d as i128;
                Self::from_i128_pair(num, den)
            }
            _ => Self::from_bigrational(self.to_bigrational() - rhs.to_bigrational()),
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let num = *a as i128 * *c as i128;
                if *b == 1 && *d == 1 {
                    return match i64::try_from(num) {
                        Ok(num) => ExactScalar(Repr::Small { num, den: 1 }),
                        Err(_) => Self::from_i128_pair(num, 1),
                    };
                }
                Self::from_i128_pair(num, *b as i128 * *d as i128)
            }
            _ => Self::from_bigrational(self.to_bigrational() * rhs.to_bigrational()),
        }
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "ExactScalar division by zero");
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Self::from_i128_pair(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Self::from_bigrational(self.to_bigrational() / rhs.to_bigrational()),
        }
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // canonical representation: a Big never equals a Small
            _ => false,
        }
    }
}

impl Eq for ExactScalar {}

impl Hash for ExactScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    a.cmp(c)
                } else {
                    (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
                }
            }
            _ => self.to_bigrational().cmp(&other.to_bigrational()),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$imp(rhs)
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$imp(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$imp(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = self.add_ref(rhs);
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        *self = self.add_ref(&rhs);
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = self.sub_ref(rhs);
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = self.mul_ref(rhs);
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match &self.0 {
            Repr::Small { num, den } => ExactScalar::from_i128_pair(-(*num as i128), *den as i128),
            Repr::Big(b) => ExactScalar::from_bigrational(-(**b).clone()),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactScalar> for ExactScalar {
    fn sum<I: Iterator<Item = &'a ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<i32> for ExactScalar {
    fn from(v: i32) -> Self {
        Self::from_integer(v as i64)
    }
}

impl From<i128> for ExactScalar {
    fn from(v: i128) -> Self {
        Self::from_i128_pair(v, 1)
    }
}

impl From<usize> for ExactScalar {
    fn from(v: usize) -> Self {
        Self::from_i128_pair(v as i128, 1)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(v: BigInt) -> Self {
        Self::from_bigint(v)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        Self::from_bigrational(v)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() || !s.trim_start_matches('-').bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid integer `{s}`")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("invalid integer `{s}`: {e}")))
}

/// Accepts `12`, `-3/4`, and exact decimals such as `0.125` or `-2.5e-3`.
impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_bigint(p.trim())?;
            let q = parse_bigint(q.trim())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok(Self::from_bigrational(BigRational::new(p, q)));
        }
        if s.contains(['.', 'e', 'E']) {
            return parse_decimal(s);
        }
        parse_bigint(s).map(Self::from_bigint)
    }
}

fn parse_decimal(s: &str) -> Result<ExactScalar> {
    let bad = || Error::Parse(format!("invalid decimal `{s}`"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(ExactScalar::from_bigrational(value))
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }
}
