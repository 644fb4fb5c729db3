// SPDX-License-Identifier: Apache-2.0

//! Independent oracles shared by the integration tests. Nothing here calls
//! the repair or search code paths it is used to check.

#![allow(dead_code)]

use polychain::IntegerChain;

/// Signed boundary multiplicities computed straight from the edge list.
pub fn boundary_by_hand(p: &IntegerChain, coeffs: &[i64]) -> Vec<i64> {
    let k = p.complex();
    let mut out = vec![0; k.num_vertices()];
    for (e, &(t, h)) in k.edges().iter().enumerate() {
        out[h] += coeffs[e];
        out[t] -= coeffs[e];
    }
    out
}

/// Minimum boundary mass over every representative of `chain` mod p whose
/// nonzero coefficients have absolute value in 1..=p−1. Each edge with
/// residue r ≠ 0 carries either r or r − p; residue-0 edges are empty.
pub fn min_boundary_mass_over_representatives(chain: &IntegerChain, p: i64) -> u64 {
    let k = chain.complex();
    let residues: Vec<i64> = (0..k.num_edges())
        .map(|e| chain.coeff(e).rem_euclid(p))
        .collect();
    let free: Vec<usize> = (0..residues.len()).filter(|&e| residues[e] != 0).collect();
    assert!(
        free.len() <= 20,
        "exhaustive oracle limited to 20 supported edges"
    );
    let mut best = u64::MAX;
    for mask in 0u64..(1 << free.len()) {
        let mut coeffs = residues.clone();
        for (bit, &e) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                coeffs[e] -= p;
            }
        }
        let mass: u64 = boundary_by_hand(chain, &coeffs)
            .iter()
            .map(|v| v.unsigned_abs())
            .sum();
        best = best.min(mass);
    }
    best
}

/// Σ over vertices of |select(∂θ)|, from the raw coefficients.
pub fn boundary_pmass_by_hand(chain: &IntegerChain, p: i64) -> u64 {
    let k = chain.complex();
    let coeffs: Vec<i64> = (0..k.num_edges()).map(|e| chain.coeff(e)).collect();
    boundary_by_hand(chain, &coeffs)
        .iter()
        .map(|&v| {
            let r = v.rem_euclid(p);
            r.min(p - r) as u64
        })
        .sum()
}
