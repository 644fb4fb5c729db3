// SPDX-License-Identifier: Apache-2.0

//! Zero-sum test for 0-chains modulo p and the cone over a 0-chain.

use std::sync::Arc;

use crate::chain::{Degree, IntegerChain};
use crate::complex::{GeometricComplex, Point};
use crate::error::{Error, Result};
use crate::modp::Modulus;

/// True when the coefficients of the 0-chain sum to 0 mod p.
pub fn zero_sum_check(r: &IntegerChain, p: Modulus) -> Result<bool> {
    if r.degree() != Degree::Zero {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: r.degree().as_u8(),
        });
    }
    Ok(r.iter()
        .fold(0, |acc, (_, v)| (acc + p.positive(v)) % p.get())
        == 0)
}

/// Cone over a 0-chain with a given apex.
#[derive(Debug, Clone)]
pub struct Cone {
    /// The input complex with the apex (when new) and one edge per support
    /// atom appended.
    pub complex: Arc<GeometricComplex>,
    pub apex: usize,
    /// Σ θᵢ·[xᵢ → apex].
    pub chain: IntegerChain,
}

/// Builds C = Σ θᵢ·[xᵢ → x₀]; then ∂C = (Σθᵢ)·δ_{x₀} − R exactly.
pub fn cone(r: &IntegerChain, apex: &Point) -> Result<Cone> {
    if r.degree() != Degree::Zero {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: r.degree().as_u8(),
        });
    }
    let k = r.complex();
    if apex.len() != k.ambient_dim() {
        return Err(Error::DimensionMismatch {
            index: k.num_vertices(),
            expected: k.ambient_dim(),
            found: apex.len(),
        });
    }
    if let Some(v) = r.support().into_iter().find(|&v| k.vertex(v) == apex) {
        return Err(Error::ApexCollision(v));
    }
    let (apex_index, extra_vertices) = match k.find_vertex(apex) {
        Some(v) => (v, vec![]),
        None => (k.num_vertices(), vec![apex.clone()]),
    };
    let first_edge = k.num_edges();
    let new_edges: Vec<(usize, usize)> = r.iter().map(|(v, _)| (v, apex_index)).collect();
    let complex = Arc::new(k.extended(extra_vertices, new_edges)?);
    let chain = IntegerChain::from_coeffs(
        complex.clone(),
        Degree::One,
        r.iter()
            .enumerate()
            .map(|(i, (_, theta))| (first_edge + i, theta)),
    )?;
    Ok(Cone {
        complex,
        apex: apex_index,
        chain,
    })
}
