//! Quadratics with a hidden flat direction, perturbed by random signs.
//!
//! For a basis `B` with hidden first column `a`, both families start from
//! `g_B` and add `sigma(x^B_2, .., x^B_d)`. The yes family adds it as is, which
//! keeps every function convex. The no family multiplies it by
//! `(-1)^(x^B_1)`, which breaks convexity on every line in direction `a`.

use std::collections::HashMap;

use rand::RngCore;

use super::basis::{canonical_g, sample_direction, sample_stripe_direction, BasisCompletion};
use super::signs::SignField;
use crate::error::{Error, Result};
use crate::grid::{FunctionSource, GridDomain, GridPoint};
use crate::report::TripleWitness;
use crate::rng::Rng;
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// `h = g_B + sigma`
    Yes,
    /// `h = g_B + sigma * (-1)^(x^B_1)`
    No,
}

/// A lazily evaluated member of the yes or no family.
#[derive(Clone, Debug)]
pub struct BasisInstance {
    domain: GridDomain,
    basis: BasisCompletion,
    signs: SignField,
    kind: InstanceKind,
}

impl BasisInstance {
    pub fn new(domain: GridDomain, basis: BasisCompletion, signs: SignField, kind: InstanceKind) -> Result<Self> {
        if domain.dimension() != basis.dimension() {
            return Err(Error::invalid(format!(
                "domain has dimension {} but the basis has {}",
                domain.dimension(),
                basis.dimension()
            )));
        }
        Ok(BasisInstance { domain, basis, signs, kind })
    }

    /// The same function restricted to (or extended over) another box.
    pub fn with_domain(&self, domain: GridDomain) -> Result<Self> {
        Self::new(domain, self.basis.clone(), self.signs, self.kind)
    }

    pub fn basis(&self) -> &BasisCompletion {
        &self.basis
    }

    pub fn signs(&self) -> &SignField {
        &self.signs
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    /// Value at any point of `Z^d`.
    pub fn value(&self, x: &[i64]) -> i128 {
        let y = self.basis.coords(x);
        let sigma = self.signs.sign(&y[1..]) as i128;
        let g = canonical_g(&self.basis, x);
        match self.kind {
            InstanceKind::Yes => g + sigma,
            InstanceKind::No => {
                if y[0].rem_euclid(2) == 0 {
                    g + sigma
                } else {
                    g - sigma
                }
            }
        }
    }
}

impl FunctionSource for BasisInstance {
    fn domain(&self) -> &GridDomain {
        &self.domain
    }

    fn value_at(&self, point: &[i64]) -> ExactScalar {
        ExactScalar::from(self.value(point))
    }
}

fn sample_cube(d: usize, n: usize, kind: InstanceKind, rng: &mut Rng) -> Result<BasisInstance> {
    let a = sample_direction(d, n, rng)?;
    let basis = BasisCompletion::new(&a)?;
    let signs = SignField::new(rng.next_u64());
    BasisInstance::new(GridDomain::cube(n, d)?, basis, signs, kind)
}

fn sample_stripe(n: usize, kind: InstanceKind, rng: &mut Rng) -> Result<BasisInstance> {
    let a = sample_stripe_direction(n, rng);
    let basis = BasisCompletion::new(&a)?;
    let signs = SignField::new(rng.next_u64());
    BasisInstance::new(GridDomain::stripe(n)?, basis, signs, kind)
}

/// A convex function on `[n]^d` from the yes family.
pub fn sample_dy(d: usize, n: usize, rng: &mut Rng) -> Result<BasisInstance> {
    sample_cube(d, n, InstanceKind::Yes, rng)
}

/// A function on `[n]^d` from the no family.
pub fn sample_dn(d: usize, n: usize, rng: &mut Rng) -> Result<BasisInstance> {
    sample_cube(d, n, InstanceKind::No, rng)
}

/// Yes family on the stripe `[3] x [n]`, with direction `(1, a2)`.
pub fn sample_dy_stripe(n: usize, rng: &mut Rng) -> Result<BasisInstance> {
    sample_stripe(n, InstanceKind::Yes, rng)
}

/// No family on the stripe `[3] x [n]`, with direction `(1, a2)`.
pub fn sample_dn_stripe(n: usize, rng: &mut Rng) -> Result<BasisInstance> {
    sample_stripe(n, InstanceKind::No, rng)
}

/// Disjoint non-convex triples and the distance bound they certify.
#[derive(Clone, Debug)]
pub struct FarnessCertificate {
    pub witnesses: Vec<TripleWitness>,
    /// `witnesses.len() / |domain|`. Each disjoint witness forces at least
    /// one change, so this is a lower bound on the distance to convexity.
    pub bound: ExactScalar,
}

impl FarnessCertificate {
    pub fn count(&self) -> usize {
        self.witnesses.len()
    }
}

/// Walks every line of the domain in direction `a = b_1` and greedily packs
/// disjoint consecutive triples `x, x + a, x + 2a` on which `h` is not convex.
pub fn verify_dn_far(h: &dyn FunctionSource, basis: &BasisCompletion) -> Result<FarnessCertificate> {
    let domain = h.domain();
    if domain.dimension() != basis.dimension() {
        return Err(Error::invalid("basis and domain dimensions differ"));
    }
    let mut lines: HashMap<Vec<i64>, Vec<(i64, GridPoint)>> = HashMap::new();
    for p in domain.points() {
        let y = basis.coords(p.coords());
        lines.entry(y[1..].to_vec()).or_default().push((y[0], p));
    }
    let mut keys: Vec<_> = lines.keys().cloned().collect();
    keys.sort();

    let mut witnesses = Vec::new();
    for key in keys {
        let mut line = lines.remove(&key).expect("key present");
        line.sort_by_key(|(t, _)| *t);
        let values: Vec<ExactScalar> = line.iter().map(|(_, p)| h.value_at(p.coords())).collect();
        let mut i = 0;
        while i + 2 < line.len() {
            let consecutive = line[i + 1].0 == line[i].0 + 1 && line[i + 2].0 == line[i].0 + 2;
            let mid = ExactScalar::from(2) * &values[i + 1];
            if consecutive && mid > &values[i] + &values[i + 2] {
                witnesses.push(TripleWitness {
                    points: [line[i].1.clone(), line[i + 1].1.clone(), line[i + 2].1.clone()],
                    values: [values[i].clone(), values[i + 1].clone(), values[i + 2].clone()],
                });
                i += 3;
            } else {
                i += 1;
            }
        }
    }
    let bound = ExactScalar::ratio(witnesses.len() as i64, domain.len() as i64)?;
    Ok(FarnessCertificate { witnesses, bound })
}
