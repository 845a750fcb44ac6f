//! Text descriptors that name a reproducible instance.
//!
//! A descriptor is a list of `key=value` pairs separated by `;` or
//! whitespace, for example `family=lb1d_g; k=5; j=2; seed=7`. The same
//! descriptor always builds the same function.
//!
//! | family | keys |
//! |---|---|
//! | `dy`, `dn` | `n`, `d` (default 2), `seed` |
//! | `dy_stripe`, `dn_stripe` | `n`, `seed` |
//! | `lb1d_f` | `k`, `seed` |
//! | `lb1d_g` | `k`, `j`, `seed` |
//! | `lb1d_gen` | `l` and `k`, or `eps` and `n`; optional `t` with `j`; `seed` |
//! | `appendixA` | none |
//! | `convex_line`, `convex_stripe` | `n`, `seed` |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{FunctionSource, GridDomain, GridFunction};
use crate::hard_instances::{
    appendix_counterexample, lb1d_f_function, lb1d_g_function, lb1d_general_function, random_convex_line,
    random_convex_stripe, sample_dn, sample_dn_stripe, sample_dy, sample_dy_stripe, BasisCompletion,
    BasisInstance, GeneralEpsAssignment, GeneralMode, LbAssignment,
};
use crate::rng::Rng;
use crate::scalar::ExactScalar;

/// Largest digit count for the dense line families.
pub const MAX_LB1D_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Dy,
    Dn,
    DyStripe,
    DnStripe,
    Lb1dF,
    Lb1dG,
    Lb1dGen,
    AppendixA,
    ConvexLine,
    ConvexStripe,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Dy,
        Family::Dn,
        Family::DyStripe,
        Family::DnStripe,
        Family::Lb1dF,
        Family::Lb1dG,
        Family::Lb1dGen,
        Family::AppendixA,
        Family::ConvexLine,
        Family::ConvexStripe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dy => "dy",
            Family::Dn => "dn",
            Family::DyStripe => "dy_stripe",
            Family::DnStripe => "dn_stripe",
            Family::Lb1dF => "lb1d_f",
            Family::Lb1dG => "lb1d_g",
            Family::Lb1dGen => "lb1d_gen",
            Family::AppendixA => "appendixA",
            Family::ConvexLine => "convex_line",
            Family::ConvexStripe => "convex_stripe",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Family::Dy | Family::Dn => &["n", "d", "seed"],
            Family::DyStripe | Family::DnStripe | Family::ConvexLine | Family::ConvexStripe => &["n", "seed"],
            Family::Lb1dF => &["k", "seed"],
            Family::Lb1dG => &["k", "j", "seed"],
            Family::Lb1dGen => &["l", "k", "eps", "n", "t", "j", "seed"],
            Family::AppendixA => &[],
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family `{s}`")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDescriptor {
    family: Family,
    params: BTreeMap<String, String>,
}

impl FromStr for InstanceDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut family = None;
        let mut params = BTreeMap::new();
        for pair in s.split(|c: char| c == ';' || c.is_whitespace()).filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{pair}`")))?;
            if key == "family" {
                family = Some(value.parse::<Family>()?);
            } else if params.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::Parse(format!("key `{key}` given twice")));
            }
        }
        let family = family.ok_or_else(|| Error::Parse("descriptor has no family".into()))?;
        if let Some(key) = params.keys().find(|k| !family.keys().contains(&k.as_str())) {
            return Err(Error::Parse(format!("family {family} does not take `{key}`")));
        }
        Ok(InstanceDescriptor { family, params })
    }
}

impl fmt::Display for InstanceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.family)?;
        for (k, v) in &self.params {
            write!(f, ";{k}={v}")?;
        }
        Ok(())
    }
}

/// A built instance: stored values, or a lazily evaluated hidden-basis family.
#[derive(Clone, Debug)]
pub enum Instance {
    Dense(GridFunction),
    Basis(BasisInstance),
}

impl Instance {
    /// The hidden basis, for the `dy`/`dn` families.
    pub fn basis(&self) -> Option<&BasisCompletion> {
        match self {
            Instance::Basis(b) => Some(b.basis()),
            Instance::Dense(_) => None,
        }
    }
}

impl FunctionSource for Instance {
    fn domain(&self) -> &GridDomain {
        match self {
            Instance::Dense(f) => f.domain(),
            Instance::Basis(b) => b.domain(),
        }
    }

    fn value_at(&self, point: &[i64]) -> ExactScalar {
        match self {
            Instance::Dense(f) => f.value_at(point),
            Instance::Basis(b) => b.value_at(point),
        }
    }

    fn materialize(&self) -> GridFunction {
        match self {
            Instance::Dense(f) => f.clone(),
            Instance::Basis(b) => b.materialize(),
        }
    }
}

impl InstanceDescriptor {
    pub fn new(family: Family) -> Self {
        InstanceDescriptor { family, params: BTreeMap::new() }
    }

    /// Adds or replaces a parameter.
    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::Parse(format!("bad value `{v}` for `{key}`"))))
            .transpose()
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        self.parse(key)?
            .ok_or_else(|| Error::Parse(format!("family {} needs `{key}`", self.family)))
    }

    fn rng(&self) -> Result<Rng> {
        Ok(Rng::new(self.parse::<u64>("seed")?.unwrap_or(0)))
    }

    fn digits(&self) -> Result<usize> {
        let k: usize = self.required("k")?;
        if !(2..=MAX_LB1D_DIGITS).contains(&k) {
            return Err(Error::invalid(format!("k = {k} outside [2, {MAX_LB1D_DIGITS}]")));
        }
        Ok(k)
    }

    pub fn build(&self) -> Result<Instance> {
        let mut rng = self.rng()?;
        Ok(match self.family {
            Family::Dy => Instance::Basis(sample_dy(self.parse("d")?.unwrap_or(2), self.required("n")?, &mut rng)?),
            Family::Dn => Instance::Basis(sample_dn(self.parse("d")?.unwrap_or(2), self.required("n")?, &mut rng)?),
            Family::DyStripe => Instance::Basis(sample_dy_stripe(self.required("n")?, &mut rng)?),
            Family::DnStripe => Instance::Basis(sample_dn_stripe(self.required("n")?, &mut rng)?),
            Family::Lb1dF => {
                let a = LbAssignment::sample(self.digits()?, &mut rng)?;
                Instance::Dense(lb1d_f_function(&a)?)
            }
            Family::Lb1dG => {
                let a = LbAssignment::sample(self.digits()?, &mut rng)?;
                Instance::Dense(lb1d_g_function(&a, self.required("j")?)?)
            }
            Family::Lb1dGen => {
                let (l, k) = match (self.parse::<usize>("l")?, self.parse::<ExactScalar>("eps")?) {
                    (Some(l), None) => (l, self.digits()?),
                    (None, Some(eps)) => GeneralEpsAssignment::parameters(&eps, self.required("n")?)?,
                    _ => return Err(Error::Parse("lb1d_gen needs either `l` and `k` or `eps` and `n`".into())),
                };
                if k > MAX_LB1D_DIGITS || l.saturating_mul(3usize.pow(k as u32)) > 1 << 24 {
                    return Err(Error::invalid(format!("lb1d_gen with l = {l}, k = {k} is too large")));
                }
                let assign = GeneralEpsAssignment::sample(l, k, &mut rng)?;
                let mode = match (self.parse::<usize>("t")?, self.parse::<usize>("j")?) {
                    (None, None) => GeneralMode::Convex,
                    (Some(t), Some(j)) => GeneralMode::Perturbed { t, j },
                    _ => return Err(Error::Parse("lb1d_gen needs both `t` and `j` or neither".into())),
                };
                Instance::Dense(lb1d_general_function(&assign, mode)?)
            }
            Family::AppendixA => Instance::Dense(appendix_counterexample()),
            Family::ConvexLine => Instance::Dense(random_convex_line(self.required("n")?, &mut rng)?),
            Family::ConvexStripe => Instance::Dense(random_convex_stripe(self.required("n")?, &mut rng)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::line::is_convex_line;

    fn build(s: &str) -> Instance {
        s.parse::<InstanceDescriptor>().unwrap().build().unwrap()
    }

    #[test]
    fn parses_both_separators() {
        let a: InstanceDescriptor = "family=lb1d_g; k=3; j=1; seed=4".parse().unwrap();
        let b: InstanceDescriptor = "family=lb1d_g k=3 j=1 seed=4".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "family=lb1d_g;j=1;k=3;seed=4");
        assert_eq!(a.to_string().parse::<InstanceDescriptor>().unwrap(), a);
    }

    #[test]
    fn rejects_bad_descriptors() {
        for s in ["k=3", "family=nope", "family=lb1d_f k=3 k=4", "family=lb1d_f x=1", "family=lb1d_f k"] {
            assert!(s.parse::<InstanceDescriptor>().is_err(), "{s}");
        }
        for s in ["family=lb1d_f", "family=lb1d_f k=40", "family=dn n=3", "family=lb1d_gen l=3", "family=lb1d_gen l=3 k=3 t=1"] {
            assert!(s.parse::<InstanceDescriptor>().unwrap().build().is_err(), "{s}");
        }
    }

    #[test]
    fn builds_are_deterministic() {
        for s in ["family=lb1d_f k=3 seed=1", "family=dn d=2 n=16 seed=7", "family=convex_stripe n=20 seed=2"] {
            assert_eq!(build(s).materialize(), build(s).materialize());
        }
        assert_ne!(build("family=lb1d_f k=3 seed=1").materialize(), build("family=lb1d_f k=3 seed=2").materialize());
    }

    #[test]
    fn shapes() {
        assert_eq!(build("family=appendixA").domain().dims(), &[3, 3]);
        assert_eq!(build("family=lb1d_f k=3 seed=1").domain().len(), 27);
        assert_eq!(build("family=lb1d_gen eps=1/27 n=81 seed=1").domain().len(), 81);
        assert_eq!(build("family=dn_stripe n=300").domain().dims(), &[3, 300]);
        assert!(build("family=dy n=16").basis().is_some());
        let f = build("family=convex_line n=50 seed=3").materialize();
        assert!(is_convex_line(&f).unwrap());
    }
}
