// SPDX-License-Identifier: Apache-2.0

//! The demo operations, callable natively for tests.

use std::sync::Arc;

use polychain::flatnorm::{flat_norm, flat_norm_mod_p, SearchOptions};
use polychain::generate::{parallel_bundle, random_one_chain, FixtureRng, RandomChainParams};
use polychain::io::{parse_grid_values, to_json};
use polychain::rational::{format_rational, int, parse_rational, to_f64};
use polychain::{
    check_prop_sn, grid_select, repair, verify_repair, Degree, GeometricComplex, IntegerChain,
    Modulus,
};
use serde::Serialize;

type DemoResult = Result<String, String>;

fn modulus(p: i64) -> Result<Modulus, String> {
    Modulus::new(p).map_err(|e| e.to_string())
}

fn parse_dims(dims: &str) -> Result<Option<Vec<usize>>, String> {
    let dims = dims.trim();
    if dims.is_empty() {
        return Ok(None);
    }
    dims.split(',')
        .map(|d| {
            d.trim()
                .parse::<usize>()
                .map_err(|e| format!("dims {dims:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

#[derive(Serialize)]
struct GridView {
    dims: Vec<usize>,
    theta: Vec<i64>,
    select: Vec<i64>,
    jumps: Vec<i64>,
    select_jumps: Vec<i64>,
    lhs: String,
    rhs: String,
    passed: bool,
    ratio: Option<String>,
    limit: i64,
}

pub fn grid_check(p: i64, dims: &str, theta: &str) -> DemoResult {
    let p = modulus(p)?;
    let dims = parse_dims(dims)?;
    let grid = parse_grid_values(theta, dims.as_deref()).map_err(|e| e.to_string())?;
    if grid.theta().len() > 4096 {
        return Err("grids above 4096 cells are not shown".into());
    }
    let select = grid_select(&grid, p);
    let report = check_prop_sn(&grid, p);
    Ok(to_json(&GridView {
        dims: grid.dims().to_vec(),
        theta: grid.theta().to_vec(),
        select: select.theta().to_vec(),
        jumps: grid.jumps(),
        select_jumps: select.jumps(),
        lhs: format_rational(&report.lhs),
        rhs: format_rational(&report.rhs),
        passed: report.passed,
        ratio: report.pmass_ratio_exact,
        limit: p.get() - 1,
    }))
}

#[derive(Serialize)]
struct ChainView {
    coeffs: Vec<(usize, i64)>,
    boundary: Vec<(usize, i64)>,
    boundary_mass: u64,
}

impl ChainView {
    fn of(chain: &IntegerChain) -> Result<Self, String> {
        let bd = chain.boundary().map_err(|e| e.to_string())?;
        Ok(ChainView {
            coeffs: chain.iter().collect(),
            boundary: bd.iter().collect(),
            boundary_mass: bd.integer_mass(),
        })
    }
}

#[derive(Serialize)]
struct RepairView {
    p: i64,
    vertices: Vec<Vec<f64>>,
    edges: Vec<(usize, usize)>,
    input: ChainView,
    output: ChainView,
    /// (p−1)·Mᵖ(∂P).
    bound: u64,
    /// Boundary mass after each flip, starting from the positive
    /// representative.
    descent: Vec<u64>,
    /// Edges of each flipped path.
    paths: Vec<Vec<usize>>,
    verified: bool,
}

pub fn repair_demo(p: i64, seed: f64, k: usize, max_edges: usize) -> DemoResult {
    let p = modulus(p)?;
    if p.get() > 1000 {
        return Err("p above 1000 is not shown".into());
    }
    let chain = if seed < 0.0 {
        if !(1..=50).contains(&k) {
            return Err("bundle size must be in 1..=50".into());
        }
        parallel_bundle(k)
    } else {
        if !(1..=60).contains(&max_edges) {
            return Err("edge count must be in 1..=60".into());
        }
        let params = RandomChainParams {
            max_vertices: 10,
            max_edges,
            range: 50,
            dim: 2,
        };
        random_one_chain(&mut FixtureRng::new(seed as u64), params)
    }
    .map_err(|e| e.to_string())?;
    let (out, cert) = repair(&chain, p).map_err(|e| e.to_string())?;
    let report = verify_repair(&chain, &out, p, Some(&cert)).map_err(|e| e.to_string())?;
    let k = chain.complex();
    let bound = (p.get() as u64 - 1)
        * polychain::modp::integer_pmass(&chain.boundary().map_err(|e| e.to_string())?, p);
    let mut descent: Vec<u64> = cert
        .trace
        .first()
        .map(|s| s.boundary_mass_before)
        .into_iter()
        .collect();
    descent.extend(cert.trace.iter().map(|s| s.boundary_mass_after));
    Ok(to_json(&RepairView {
        p: p.get(),
        vertices: k
            .vertices()
            .iter()
            .map(|v| v.iter().map(to_f64).collect())
            .collect(),
        edges: k.edges().to_vec(),
        input: ChainView::of(&chain)?,
        output: ChainView::of(&out)?,
        bound,
        descent,
        paths: cert
            .trace
            .iter()
            .map(|s| s.path.steps.iter().map(|st| st.edge).collect())
            .collect(),
        verified: report.all_pass(),
    }))
}

#[derive(Serialize)]
struct DipoleView {
    length: String,
    weight: i64,
    p: i64,
    mass: String,
    flat: String,
    flat_mod_p: String,
    /// Coefficient of S on the edge in the classical optimum.
    filled: i64,
    filled_mod_p: i64,
}

/// w·(δ_b − δ_a) with |b − a| = `length`.
pub fn dipole_flat_norm(length: &str, weight: i64, p: i64) -> DemoResult {
    let p = modulus(p)?;
    let len = parse_rational(length.trim()).map_err(|e| e.to_string())?;
    if len <= int(0) {
        return Err("length must be positive".into());
    }
    if !(1..=10).contains(&weight) || p.get() > 10 {
        return Err("weight and p must be at most 10".into());
    }
    let complex = GeometricComplex::new(1, vec![vec![int(0)], vec![len.clone()]], vec![(0, 1)])
        .map_err(|e| e.to_string())?;
    let t = IntegerChain::from_coeffs(Arc::new(complex), Degree::Zero, [(0, -weight), (1, weight)])
        .map_err(|e| e.to_string())?;
    let bound = SearchOptions::bound(2 * weight + p.get());
    let f = flat_norm(&t, bound).map_err(|e| e.to_string())?;
    let fp = flat_norm_mod_p(&t, p, bound).map_err(|e| e.to_string())?;
    let exact = |d: &polychain::FlatNormDecomposition| {
        d.exact_value
            .as_ref()
            .map(format_rational)
            .unwrap_or_default()
    };
    let s_on_edge = |d: &polychain::FlatNormDecomposition| d.s.as_ref().map_or(0, |s| s.coeff(0));
    Ok(to_json(&DipoleView {
        length: format_rational(&len),
        weight,
        p: p.get(),
        mass: format_rational(&int(2 * weight)),
        flat: exact(&f),
        flat_mod_p: exact(&fp),
        filled: s_on_edge(&f),
        filled_mod_p: s_on_edge(&fp),
    }))
}
