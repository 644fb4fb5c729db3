// SPDX-License-Identifier: Apache-2.0

//! Top-dimensional chains on axis-aligned cube grids, stored as integer cell
//! functions. Boundary multiplicity across a face is the jump of the
//! function there, so boundary mass is total variation with face areas.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modp::Modulus;
use crate::rational::{format_rational, int, to_f64};

/// Integer-valued function on a `dims[0] × … × dims[n−1]` grid of cubes with
/// side `cell_edge`, row-major (last axis fastest). Cells outside the grid
/// carry multiplicity 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridChain {
    dims: Vec<usize>,
    theta: Vec<i64>,
    cell_edge: BigRational,
}

impl GridChain {
    pub fn new(dims: Vec<usize>, theta: Vec<i64>) -> Result<Self> {
        Self::with_cell_edge(dims, theta, BigRational::one())
    }

    pub fn with_cell_edge(
        dims: Vec<usize>,
        theta: Vec<i64>,
        cell_edge: BigRational,
    ) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::ParamOutOfRange(format!(
                "grid dims must be positive, got {dims:?}"
            )));
        }
        if !cell_edge.is_positive() {
            return Err(Error::ParamOutOfRange("cell edge must be positive".into()));
        }
        let cells: usize = dims.iter().product();
        if theta.len() != cells {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: cells,
                found: theta.len(),
            });
        }
        Ok(GridChain {
            dims,
            theta,
            cell_edge,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    pub fn cell_edge(&self) -> &BigRational {
        &self.cell_edge
    }

    pub fn ambient_dim(&self) -> usize {
        self.dims.len()
    }

    /// cell_edge^(n−1).
    pub fn face_area(&self) -> BigRational {
        (1..self.dims.len()).fold(BigRational::one(), |acc, _| acc * &self.cell_edge)
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> GridChain {
        GridChain {
            dims: self.dims.clone(),
            theta: self.theta.iter().map(|&v| f(v)).collect(),
            cell_edge: self.cell_edge.clone(),
        }
    }

    /// Boundary multiplicity on every face, `θ(after) − θ(before)` along
    /// each axis, including the outer faces against the zero exterior.
    pub fn jumps(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut stride = 1;
        let strides: Vec<usize> = self
            .dims
            .iter()
            .rev()
            .map(|&d| {
                let s = stride;
                stride *= d;
                s
            })
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        for (axis, &len) in self.dims.iter().enumerate() {
            let s = strides[axis];
            for start in (0..self.theta.len()).filter(|i| (i / s).is_multiple_of(len)) {
                let mut prev = 0;
                for k in 0..len {
                    let v = self.theta[start + k * s];
                    out.push(v - prev);
                    prev = v;
                }
                out.push(-prev);
            }
        }
        out
    }
}

pub fn grid_select(t: &GridChain, p: Modulus) -> GridChain {
    t.map(|v| p.select(v))
}

pub fn grid_boundary_mass(t: &GridChain) -> BigRational {
    let total: i64 = t.jumps().iter().map(|j| j.abs()).sum();
    int(total) * t.face_area()
}

/// p-mass of the boundary: each face jump reduced to its select residue.
pub fn grid_pmass_boundary(t: &GridChain, p: Modulus) -> BigRational {
    let total: i64 = t.jumps().iter().map(|&j| p.select(j).abs()).sum();
    int(total) * t.face_area()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnReport {
    pub p: i64,
    /// M(∂T′) for the select representative T′.
    #[serde(with = "crate::rational::serde_rational")]
    pub lhs: BigRational,
    /// (p−1)·Mᵖ(∂T).
    #[serde(with = "crate::rational::serde_rational")]
    pub rhs: BigRational,
    pub passed: bool,
    /// lhs / rhs; at most 1 when the inequality holds. Absent when rhs = 0.
    pub ratio: Option<f64>,
    pub ratio_exact: Option<String>,
    /// lhs / Mᵖ(∂T); at most p−1 when the inequality holds.
    pub pmass_ratio: Option<f64>,
    pub pmass_ratio_exact: Option<String>,
    /// Largest |jump| of the select representative; at most p−1.
    pub max_select_jump: i64,
}

pub fn check_prop_sn(t: &GridChain, p: Modulus) -> SnReport {
    let select = grid_select(t, p);
    let lhs = grid_boundary_mass(&select);
    let pm = grid_pmass_boundary(t, p);
    let rhs = &pm * int(p.get() - 1);
    let ratio = (!rhs.is_zero()).then(|| &lhs / &rhs);
    let pmass_ratio = (!pm.is_zero()).then(|| &lhs / &pm);
    SnReport {
        p: p.get(),
        passed: lhs <= rhs,
        ratio: ratio.as_ref().map(to_f64),
        ratio_exact: ratio.as_ref().map(format_rational),
        pmass_ratio: pmass_ratio.as_ref().map(to_f64),
        pmass_ratio_exact: pmass_ratio.as_ref().map(format_rational),
        max_select_jump: select.jumps().iter().map(|j| j.abs()).max().unwrap_or(0),
        lhs,
        rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: i64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn g(dims: &[usize], theta: &[i64]) -> GridChain {
        GridChain::new(dims.to_vec(), theta.to_vec()).unwrap()
    }

    #[test]
    fn select_examples() {
        assert_eq!(grid_select(&g(&[3], &[1, 2, 1]), m(3)).theta(), &[1, -1, 1]);
        assert_eq!(grid_select(&g(&[2], &[5, 10]), m(5)).theta(), &[0, 0]);
        assert_eq!(grid_select(&g(&[1], &[2]), m(4)).theta(), &[2]);
    }

    #[test]
    fn boundary_mass_examples() {
        assert_eq!(grid_boundary_mass(&g(&[1], &[1])), int(2));
        assert_eq!(grid_boundary_mass(&g(&[3], &[1, 2, 1])), int(4));
        assert_eq!(grid_boundary_mass(&g(&[1, 1], &[3])), int(12));
        let half = BigRational::new(1.into(), 2.into());
        let t = GridChain::with_cell_edge(vec![1, 1, 1], vec![1], half).unwrap();
        assert_eq!(
            grid_boundary_mass(&t),
            int(6) * BigRational::new(1.into(), 4.into())
        );
    }

    #[test]
    fn jumps_in_2d() {
        // [[1, 2], [0, 3]]: down each column, then along each row.
        let t = g(&[2, 2], &[1, 2, 0, 3]);
        assert_eq!(t.jumps(), vec![1, -1, 0, 2, 1, -3, 1, 1, -2, 0, 3, -3]);
    }

    #[test]
    fn pmass_boundary_examples() {
        assert_eq!(grid_pmass_boundary(&g(&[3], &[1, 2, 1]), m(3)), int(4));
        assert_eq!(grid_pmass_boundary(&g(&[2], &[3, 6]), m(3)), int(0));
        assert_eq!(grid_pmass_boundary(&g(&[2], &[0, 2]), m(3)), int(2));
    }

    #[test]
    fn sn_examples() {
        let r = check_prop_sn(&g(&[3], &[1, 2, 1]), m(3));
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(6), int(8)));
        assert!(r.passed);
        assert_eq!(r.ratio, Some(0.75));
        assert_eq!(r.pmass_ratio_exact.as_deref(), Some("3/2"));
        let r = check_prop_sn(&g(&[2, 2], &[4, 4, 4, 4]), m(3));
        assert!(r.passed);
        let r = check_prop_sn(&g(&[1], &[0]), m(2));
        assert!(r.passed && r.lhs.is_zero() && r.rhs.is_zero() && r.ratio.is_none());
    }

    #[test]
    fn shape_errors() {
        assert!(GridChain::new(vec![2, 2], vec![1, 2, 3]).is_err());
        assert!(GridChain::new(vec![0], vec![]).is_err());
        assert!(GridChain::new(vec![], vec![]).is_err());
    }

    proptest! {
        #[test]
        fn sn_inequality_holds(
            (dims, theta) in (1usize..=3).prop_flat_map(|n| proptest::collection::vec(1usize..=4, n))
                .prop_flat_map(|dims| {
                    let cells: usize = dims.iter().product();
                    (Just(dims), proptest::collection::vec(-15i64..=15, cells))
                }),
            p in 2i64..=6,
        ) {
            let t = GridChain::new(dims, theta).unwrap();
            let r = check_prop_sn(&t, m(p));
            prop_assert!(r.passed);
            prop_assert!(r.max_select_jump < p);
            prop_assert!(grid_pmass_boundary(&t, m(p)) <= grid_boundary_mass(&t));
            let s = grid_select(&t, m(p));
            prop_assert_eq!(grid_select(&s, m(p)), s.clone());
            let shifted = t.map(|v| v + 3 * p);
            prop_assert_eq!(grid_boundary_mass(&grid_select(&shifted, m(p))), grid_boundary_mass(&s));
        }
    }
}
