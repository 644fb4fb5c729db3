// SPDX-License-Identifier: Apache-2.0

//! Reproducible fixtures.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64`, and integers in a
//! range are drawn by rejection: with `n` values, draw `x = next_u64()`
//! until `x < n·⌊2⁶⁴/n⌋`, then take `x mod n`. Both steps are fixed here
//! rather than delegated to a distribution implementation, so fixtures are
//! stable across library versions; `reference_outputs` in the tests pins
//! the stream.

use std::sync::Arc;

use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::chain::{Degree, IntegerChain};
use crate::complex::{GeometricComplex, Point};
use crate::error::{Error, Result};
use crate::grid::GridChain;
use crate::rational::int;

pub struct FixtureRng(ChaCha8Rng);

impl FixtureRng {
    pub fn new(seed: u64) -> Self {
        FixtureRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`, `n > 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = n * (u64::MAX / n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo) as u64 + 1) as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomChainParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Coefficients are uniform in [−range, range].
    pub range: i64,
    pub dim: usize,
}

impl Default for RandomChainParams {
    fn default() -> Self {
        RandomChainParams {
            max_vertices: 10,
            max_edges: 20,
            range: 50,
            dim: 2,
        }
    }
}

impl RandomChainParams {
    fn validate(&self) -> Result<()> {
        if self.max_vertices < 2 || self.max_vertices > 1000 {
            return Err(Error::ParamOutOfRange(format!(
                "vertices {} not in 2..=1000",
                self.max_vertices
            )));
        }
        if self.max_edges == 0 || self.max_edges > 10_000 {
            return Err(Error::ParamOutOfRange(format!(
                "edges {} not in 1..=10000",
                self.max_edges
            )));
        }
        if !(1..=1_000_000).contains(&self.range) {
            return Err(Error::ParamOutOfRange(format!(
                "range {} not in 1..=1000000",
                self.range
            )));
        }
        if !(1..=8).contains(&self.dim) {
            return Err(Error::ParamOutOfRange(format!(
                "dim {} not in 1..=8",
                self.dim
            )));
        }
        Ok(())
    }
}

fn distinct_points(rng: &mut FixtureRng, count: usize, dim: usize) -> Vec<Point> {
    let side = 2 * count as i64 + 2;
    let mut points: Vec<Point> = Vec::with_capacity(count);
    while points.len() < count {
        let p: Point = (0..dim).map(|_| int(rng.between(0, side))).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    points
}

/// Random multigraph with 2..=max_vertices vertices at distinct lattice
/// points and 1..=max_edges edges (parallel edges allowed), carrying a
/// chain with uniform coefficients.
pub fn random_one_chain(rng: &mut FixtureRng, params: RandomChainParams) -> Result<IntegerChain> {
    params.validate()?;
    let nv = rng.between(2, params.max_vertices as i64) as usize;
    let ne = rng.between(1, params.max_edges as i64) as usize;
    let points = distinct_points(rng, nv, params.dim);
    let edges: Vec<(usize, usize)> = (0..ne)
        .map(|_| {
            let t = rng.below(nv as u64) as usize;
            let h = (t + 1 + rng.below(nv as u64 - 1) as usize) % nv;
            (t, h)
        })
        .collect();
    let k = Arc::new(GeometricComplex::new(params.dim, points, edges)?);
    let coeffs: Vec<(usize, i64)> = (0..ne)
        .map(|e| (e, rng.between(-params.range, params.range)))
        .collect();
    IntegerChain::from_coeffs(k, Degree::One, coeffs)
}

/// Random 0-chain with coefficients in [−range, range] on a complex whose
/// edge lengths are all rational: vertices on a lattice, edges only between
/// points at integer (Pythagorean) distance, scaled by 1/scale.
pub fn random_rational_complex(
    rng: &mut FixtureRng,
    max_vertices: usize,
    max_edges: usize,
    scale: i64,
) -> Result<Arc<GeometricComplex>> {
    if max_vertices < 2 || max_edges == 0 || scale < 1 {
        return Err(Error::ParamOutOfRange(
            "rational complex needs 2 vertices, 1 edge, scale >= 1".into(),
        ));
    }
    let nv = rng.between(2, max_vertices as i64) as usize;
    let raw: Vec<(i64, i64)> = {
        let mut pts = Vec::new();
        while pts.len() < nv {
            let p = (rng.between(0, 8), rng.between(0, 8));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        pts
    };
    let mut candidates = Vec::new();
    for a in 0..nv {
        for b in 0..nv {
            let (dx, dy) = (raw[a].0 - raw[b].0, raw[a].1 - raw[b].1);
            let d2 = dx * dx + dy * dy;
            let d = (d2 as f64).sqrt().round() as i64;
            if a != b && d * d == d2 {
                candidates.push((a, b));
            }
        }
    }
    let points: Vec<Point> = raw
        .iter()
        .map(|&(x, y)| {
            vec![
                BigRational::new(x.into(), scale.into()),
                BigRational::new(y.into(), scale.into()),
            ]
        })
        .collect();
    if candidates.is_empty() {
        // No pair at integer distance: use a unit path along the x-axis.
        let pts = (0..nv).map(|i| vec![int(i as i64), int(0)]).collect();
        let edges = (1..nv).map(|i| (i - 1, i)).take(max_edges).collect();
        return Ok(Arc::new(GeometricComplex::new(2, pts, edges)?));
    }
    let ne = rng.between(1, max_edges as i64) as usize;
    let edges = (0..ne)
        .map(|_| candidates[rng.below(candidates.len() as u64) as usize])
        .collect();
    Ok(Arc::new(GeometricComplex::new(2, points, edges)?))
}

pub fn random_zero_chain(
    rng: &mut FixtureRng,
    complex: Arc<GeometricComplex>,
    range: i64,
) -> Result<IntegerChain> {
    let coeffs: Vec<(usize, i64)> = (0..complex.num_vertices())
        .map(|v| (v, rng.between(-range, range)))
        .collect();
    IntegerChain::from_coeffs(complex, Degree::Zero, coeffs)
}

pub fn random_grid(rng: &mut FixtureRng, dims: &[usize], range: i64) -> Result<GridChain> {
    if range < 0 {
        return Err(Error::ParamOutOfRange(format!("range {range} is negative")));
    }
    let cells: usize = dims.iter().product();
    if cells > 1 << 24 {
        return Err(Error::ParamOutOfRange(format!("{cells} cells is too many")));
    }
    let theta = (0..cells).map(|_| rng.between(-range, range)).collect();
    GridChain::new(dims.to_vec(), theta)
}

/// Two vertices at 0 and 1 on the line joined by `k` parallel unit edges,
/// each with multiplicity 1.
pub fn parallel_bundle(k: usize) -> Result<IntegerChain> {
    if k == 0 || k > 10_000 {
        return Err(Error::ParamOutOfRange(format!(
            "bundle size {k} not in 1..=10000"
        )));
    }
    let complex = Arc::new(GeometricComplex::new(
        1,
        vec![vec![int(0)], vec![int(1)]],
        vec![(0, 1); k],
    )?);
    IntegerChain::from_coeffs(complex, Degree::One, (0..k).map(|e| (e, 1)))
}

/// `n` unit edges 0→1→…→n on the line, each with multiplicity 1.
pub fn path_graph(n: usize) -> Result<IntegerChain> {
    if n == 0 || n > 10_000 {
        return Err(Error::ParamOutOfRange(format!(
            "path length {n} not in 1..=10000"
        )));
    }
    let points = (0..=n).map(|i| vec![int(i as i64)]).collect();
    let complex = Arc::new(GeometricComplex::new(
        1,
        points,
        (0..n).map(|i| (i, i + 1)).collect(),
    )?);
    IntegerChain::from_coeffs(complex, Degree::One, (0..n).map(|e| (e, 1)))
}
