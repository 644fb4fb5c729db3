// SPDX-License-Identifier: Apache-2.0

//! Chains modulo p: select and positive representatives, p-mass and
//! certified congruence.
//!
//! For polyhedral chains on a shared complex, equivalence modulo p is plain
//! divisibility of the coefficient difference, so no flat-norm computation
//! is involved here.

use num_rational::BigRational;

use crate::chain::IntegerChain;
use crate::error::{Error, Result};

/// The modulus p ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(i64);

impl Modulus {
    pub fn new(p: i64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Modulus(p))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// The unique integer in (−p/2, p/2] congruent to `theta`.
    pub fn select(self, theta: i64) -> i64 {
        let r = theta.rem_euclid(self.0);
        if 2 * r > self.0 {
            r - self.0
        } else {
            r
        }
    }

    /// `theta` mod p in {0, …, p−1}.
    pub fn positive(self, theta: i64) -> i64 {
        theta.rem_euclid(self.0)
    }

    pub fn divides(self, theta: i64) -> bool {
        theta.rem_euclid(self.0) == 0
    }
}

impl TryFrom<i64> for Modulus {
    type Error = Error;

    fn try_from(p: i64) -> Result<Self> {
        Modulus::new(p)
    }
}

fn map_coeffs(t: &IntegerChain, f: impl Fn(i64) -> i64) -> IntegerChain {
    let mut out = IntegerChain::zero(t.complex().clone(), t.degree());
    for (c, v) in t.iter() {
        out.set(c, f(v));
    }
    out
}

/// Cellwise select residue; cells congruent to 0 are dropped.
pub fn select_representative(t: &IntegerChain, p: Modulus) -> IntegerChain {
    map_coeffs(t, |v| p.select(v))
}

/// Cellwise residue in {1, …, p−1} on the canonical orientation.
pub fn positive_representative(t: &IntegerChain, p: Modulus) -> IntegerChain {
    map_coeffs(t, |v| p.positive(v))
}

/// Mass of the select representative.
pub fn pmass(t: &IntegerChain, p: Modulus) -> f64 {
    select_representative(t, p).mass()
}

/// Σ|select(θ)|; for 0-chains this is the exact p-mass.
pub fn integer_pmass(t: &IntegerChain, p: Modulus) -> u64 {
    t.iter().map(|(_, v)| p.select(v).unsigned_abs()).sum()
}

pub fn exact_pmass(t: &IntegerChain, p: Modulus) -> Option<BigRational> {
    select_representative(t, p).exact_mass()
}

/// Support of the class of `t` modulo p.
pub fn support_mod_p(t: &IntegerChain, p: Modulus) -> std::collections::BTreeSet<usize> {
    select_representative(t, p).support()
}

/// Witness that `a − b = p·quotient`.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceCertificate {
    pub quotient: IntegerChain,
    pub checked: bool,
}

impl CongruenceCertificate {
    /// Recomputes `a − b − p·quotient` and checks it vanishes.
    pub fn verify(&self, a: &IntegerChain, b: &IntegerChain, p: Modulus) -> bool {
        let Ok(diff) = a.minus(b) else { return false };
        match diff.minus(&self.quotient.scaled(p.get())) {
            Ok(rest) => rest.is_zero(),
            Err(_) => false,
        }
    }
}

/// `Some(certificate)` iff p divides every coefficient of `a − b`.
pub fn equiv_mod_p(
    a: &IntegerChain,
    b: &IntegerChain,
    p: Modulus,
) -> Result<Option<CongruenceCertificate>> {
    let diff = a.minus(b)?;
    if !diff.iter().all(|(_, v)| p.divides(v)) {
        return Ok(None);
    }
    let mut cert = CongruenceCertificate {
        quotient: map_coeffs(&diff, |v| v / p.get()),
        checked: false,
    };
    cert.checked = cert.verify(a, b, p);
    if !cert.checked {
        return Err(Error::Internal(
            "congruence certificate failed to verify".into(),
        ));
    }
    Ok(Some(cert))
}
