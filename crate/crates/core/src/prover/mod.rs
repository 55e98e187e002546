//! Exact verification of the algebraic identities behind the pointwise operators.
//!
//! Each identity is expanded over [`MultiPoly`] and the difference of its two
//! sides is reduced to canonical form; an identity holds iff every component
//! cancels to the zero polynomial.

mod catalog;
mod coeff;
mod poly;
mod suites;

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use catalog::{build, canonical_mutation, describe, mutate, sites, IdentitySpec, Site, IDENTITY_IDS};
pub use poly::{fmt_rational, Monomial, MultiPoly, Var, MAX_DEGREE, VAR_COUNT};
pub use suites::{float_suite, pairing_suite, FloatCheck, FloatSuiteReport, PairingReport};

use crate::exalg::Scalar;
use crate::Result;

/// A surviving monomial after cancellation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Index into the flattened coefficient list of the identity.
    pub component: usize,
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mutation {
    pub site: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
    pub reduced_to_zero: bool,
    pub witness: Option<Witness>,
    pub monomial_count_before_cancellation: usize,
    /// Wall time; excluded from serialized reports unless explicitly kept.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

/// Expand both sides of an identity and reduce their difference.
pub fn verify(spec: &IdentitySpec) -> Result<IdentityReport> {
    let start = Instant::now();
    let pairs = build::<MultiPoly>(spec, &|v| MultiPoly::var(v))?;
    let mut count = 0;
    let mut witness = None;
    let mut component = 0;
    for (lhs, rhs) in &pairs {
        for (l, r) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            count += l.len() + r.len();
            let diff = l.minus(r);
            if witness.is_none() {
                if let Some((m, c)) = diff.leading() {
                    witness = Some(Witness { component, monomial: m.to_string(), coefficient: fmt_rational(&c) });
                }
            }
            component += 1;
        }
    }
    Ok(IdentityReport {
        id: spec.id.to_string(),
        statement: describe(spec.id).to_string(),
        mutation: spec
            .overrides
            .first()
            .map(|(site, value)| Mutation { site: site.to_string(), value: fmt_rational(value) }),
        reduced_to_zero: witness.is_none(),
        witness,
        monomial_count_before_cancellation: count,
        elapsed_seconds: Some(start.elapsed().as_secs_f64()),
    })
}

/// Verify the whole catalog, with any listed identities replaced by mutated variants.
pub fn verify_all(mutations: &[IdentitySpec]) -> Result<Vec<IdentityReport>> {
    let specs: Vec<IdentitySpec> = IDENTITY_IDS
        .iter()
        .map(|id| match mutations.iter().find(|m| m.id == *id) {
            Some(m) => Ok(m.clone()),
            None => IdentitySpec::new(id),
        })
        .collect::<Result<_>>()?;
    specs.par_iter().map(verify).collect()
}

/// Whether every component of the identity vanishes at a rational point.
pub fn holds_at(spec: &IdentitySpec, point: &dyn Fn(Var) -> BigRational) -> Result<bool> {
    let pairs = build::<BigRational>(spec, point)?;
    Ok(pairs.iter().all(|(l, r)| l == r))
}

/// Evaluate an identity at `trials` random rational points; returns how many
/// points violate it.
pub fn schwartz_zippel(spec: &IdentitySpec, trials: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let values: Vec<BigRational> = (0..VAR_COUNT)
            .map(|_| {
                let num: i64 = rng.gen_range(-20..=20);
                let den: i64 = rng.gen_range(1..=9);
                BigRational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect();
        if !holds_at(spec, &|v| values[v.index()].clone())? {
            failures += 1;
        }
    }
    Ok(failures)
}
