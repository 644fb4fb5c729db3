// SPDX-License-Identifier: Apache-2.0

//! Sparse integer chains over a [`GeometricComplex`] and the linear calculus
//! on them: boundary, mass, support.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::complex::GeometricComplex;
use crate::error::{Error, Result};
use crate::rational::int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    /// Coefficients on vertices.
    Zero,
    /// Coefficients on oriented edges.
    One,
}

impl Degree {
    pub fn as_u8(self) -> u8 {
        match self {
            Degree::Zero => 0,
            Degree::One => 1,
        }
    }

    pub fn from_u8(d: u8) -> Result<Self> {
        match d {
            0 => Ok(Degree::Zero),
            1 => Ok(Degree::One),
            other => Err(Error::ParamOutOfRange(format!(
                "chain degree {other} (only 0 and 1)"
            ))),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A finite integer combination of vertices (degree 0) or oriented edges
/// (degree 1). Only nonzero coefficients are stored; a negative coefficient
/// on an edge is the same chain as the positive one on the reversed edge.
#[derive(Clone, PartialEq)]
pub struct IntegerChain {
    complex: Arc<GeometricComplex>,
    degree: Degree,
    coeffs: BTreeMap<usize, i64>,
}

impl fmt::Debug for IntegerChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerChain")
            .field("degree", &self.degree)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl IntegerChain {
    pub fn zero(complex: Arc<GeometricComplex>, degree: Degree) -> Self {
        IntegerChain {
            complex,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Collects `(cell, coefficient)` pairs, summing repeats and dropping zeros.
    pub fn from_coeffs<I>(complex: Arc<GeometricComplex>, degree: Degree, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let len = cell_count(&complex, degree);
        let mut chain = IntegerChain::zero(complex, degree);
        for (cell, value) in coeffs {
            if cell >= len {
                return Err(Error::IndexOutOfRange {
                    what: cell_name(degree),
                    index: cell,
                    len,
                });
            }
            chain.add_to(cell, value);
        }
        Ok(chain)
    }

    pub fn complex(&self) -> &Arc<GeometricComplex> {
        &self.complex
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// Coefficient at `cell` (0 when absent).
    pub fn coeff(&self, cell: usize) -> i64 {
        self.coeffs.get(&cell).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, i64> {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&c, &v)| (c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of cells of the matching dimension in the underlying complex.
    pub fn cell_count(&self) -> usize {
        cell_count(&self.complex, self.degree)
    }

    pub(crate) fn add_to(&mut self, cell: usize, value: i64) {
        if value == 0 {
            return;
        }
        let entry = self.coeffs.entry(cell).or_insert(0);
        *entry += value;
        if *entry == 0 {
            self.coeffs.remove(&cell);
        }
    }

    pub(crate) fn set(&mut self, cell: usize, value: i64) {
        if value == 0 {
            self.coeffs.remove(&cell);
        } else {
            self.coeffs.insert(cell, value);
        }
    }

    /// Chains on the same complex (by identity or by value).
    pub fn same_complex(&self, other: &IntegerChain) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex
    }

    fn check_compatible(&self, other: &IntegerChain) -> Result<()> {
        if !self.same_complex(other) {
            return Err(Error::ComplexMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree.as_u8(),
                found: other.degree.as_u8(),
            });
        }
        Ok(())
    }

    pub fn plus(&self, other: &IntegerChain) -> Result<IntegerChain> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (c, v) in other.iter() {
            out.add_to(c, v);
        }
        Ok(out)
    }

    pub fn minus(&self, other: &IntegerChain) -> Result<IntegerChain> {
        self.plus(&other.scaled(-1))
    }

    pub fn scaled(&self, k: i64) -> IntegerChain {
        let mut out = IntegerChain::zero(self.complex.clone(), self.degree);
        if k != 0 {
            out.coeffs = self.coeffs.iter().map(|(&c, &v)| (c, v * k)).collect();
        }
        out
    }

    pub fn negated(&self) -> IntegerChain {
        self.scaled(-1)
    }

    /// Re-homes the chain on `complex`, which must extend the current one.
    pub fn transfer(&self, complex: Arc<GeometricComplex>) -> Result<IntegerChain> {
        if !self.complex.is_prefix_of(&complex) {
            return Err(Error::ComplexMismatch);
        }
        Ok(IntegerChain {
            complex,
            degree: self.degree,
            coeffs: self.coeffs.clone(),
        })
    }

    /// Signed incidence: head minus tail, weighted by the coefficients.
    pub fn boundary(&self) -> Result<IntegerChain> {
        if self.degree != Degree::One {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: self.degree.as_u8(),
            });
        }
        let mut out = IntegerChain::zero(self.complex.clone(), Degree::Zero);
        for (e, theta) in self.iter() {
            let (tail, head) = self.complex.edge(e);
            out.add_to(head, theta);
            out.add_to(tail, -theta);
        }
        Ok(out)
    }

    /// Σ|θ| for 0-chains (exact), Σ|θ|·length for 1-chains.
    pub fn mass(&self) -> f64 {
        match self.degree {
            Degree::Zero => self.integer_mass() as f64,
            Degree::One => self
                .iter()
                .map(|(e, v)| v.unsigned_abs() as f64 * self.complex.length(e))
                .sum(),
        }
    }

    /// Σ|θ| regardless of cell volumes; the exact mass of a 0-chain.
    pub fn integer_mass(&self) -> u64 {
        self.coeffs.values().map(|v| v.unsigned_abs()).sum()
    }

    /// Exact mass when every supported edge has a rational length.
    pub fn exact_mass(&self) -> Option<BigRational> {
        match self.degree {
            Degree::Zero => Some(int(self.integer_mass() as i64)),
            Degree::One => self.iter().try_fold(BigRational::zero(), |acc, (e, v)| {
                let len = self.complex.exact_length(e)?;
                Some(acc + len * int(v.abs()))
            }),
        }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.coeffs.values().map(|v| v.abs()).max().unwrap_or(0)
    }
}

fn cell_count(complex: &GeometricComplex, degree: Degree) -> usize {
    match degree {
        Degree::Zero => complex.num_vertices(),
        Degree::One => complex.num_edges(),
    }
}

fn cell_name(degree: Degree) -> &'static str {
    match degree {
        Degree::Zero => "vertex",
        Degree::One => "edge",
    }
}

pub fn boundary(chain: &IntegerChain) -> Result<IntegerChain> {
    chain.boundary()
}

pub fn mass(chain: &IntegerChain) -> f64 {
    chain.mass()
}

pub fn support(chain: &IntegerChain) -> BTreeSet<usize> {
    chain.support()
}
