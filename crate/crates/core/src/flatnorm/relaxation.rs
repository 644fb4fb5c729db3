// SPDX-License-Identifier: Apache-2.0

//! Exact rational simplex (two-phase, Bland's rule) and the linear relaxation
//! of the classical 0-chain flat norm over the incidence matrix.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chain::{Degree, IntegerChain};
use crate::error::{Error, Result};
use crate::rational::int;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        x: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    /// Reduced costs followed by −z.
    obj: Vec<BigRational>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let a = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &a;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(BigRational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.width] / &row[c];
                    let better = match &leave {
                        None => true,
                        Some((best, _, bi)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < *bi)
                        }
                    };
                    if better {
                        leave = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match leave {
                Some((_, r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Minimizes `c·x` subject to `a x = b`, `x ≥ 0`.
pub fn minimize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut t = vec![BigRational::zero(); width + 1];
        for (j, v) in row.iter().enumerate() {
            t[j] = if flip { -v } else { v.clone() };
        }
        t[n + i] = BigRational::one();
        t[width] = if flip { -rhs } else { rhs.clone() };
        rows.push(t);
    }
    let mut obj = vec![BigRational::zero(); width + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width] -= &row[width];
    }
    let mut tab = Tableau {
        rows,
        basis: (n..n + m).collect(),
        obj,
        width,
    };
    tab.optimize(width);
    if !tab.obj[width].is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive artificial variables out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut obj = vec![BigRational::zero(); width + 1];
    obj[..n].clone_from_slice(c);
    for (row, &bv) in tab.rows.iter().zip(&tab.basis) {
        if c[bv].is_zero() {
            continue;
        }
        for (v, rv) in obj.iter_mut().zip(row) {
            *v -= &c[bv] * rv;
        }
    }
    tab.obj = obj;
    if !tab.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &bv) in tab.rows.iter().zip(&tab.basis) {
        x[bv] = row[width].clone();
    }
    LpOutcome::Optimal {
        value: -tab.obj[width].clone(),
        x,
    }
}

/// Optimum of the linear relaxation of the classical flat norm of a 0-chain:
/// minimize Σ|R_v| + Σ length_e·|S_e| subject to T = R + ∂S with real R, S.
pub fn flat_norm_relaxation(t: &IntegerChain) -> Result<BigRational> {
    if t.degree() != Degree::Zero {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: t.degree().as_u8(),
        });
    }
    let k = t.complex();
    let lengths = k.exact_lengths()?;
    let (nv, ne) = (k.num_vertices(), k.num_edges());
    // Columns: S⁺_e, S⁻_e, then R⁺_v, R⁻_v.
    let cols = 2 * ne + 2 * nv;
    let mut cost = Vec::with_capacity(cols);
    for len in &lengths {
        cost.push(len.clone());
        cost.push(len.clone());
    }
    cost.extend(std::iter::repeat_n(BigRational::one(), 2 * nv));
    let mut a = vec![vec![BigRational::zero(); cols]; nv];
    for (e, &(tail, head)) in k.edges().iter().enumerate() {
        a[head][2 * e] += int(1);
        a[head][2 * e + 1] -= int(1);
        a[tail][2 * e] -= int(1);
        a[tail][2 * e + 1] += int(1);
    }
    for (v, row) in a.iter_mut().enumerate() {
        row[2 * ne + 2 * v] = int(1);
        row[2 * ne + 2 * v + 1] = int(-1);
    }
    let b: Vec<BigRational> = (0..nv).map(|v| int(t.coeff(v))).collect();
    match minimize(&cost, &a, &b) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::Internal(format!(
            "flat-norm relaxation is always feasible and bounded, got {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn small_lp() {
        // min x + 2y  s.t. x + y = 3, x − y = 1  → x = 2, y = 1, value 4
        let out = minimize(
            &[q("1"), q("2")],
            &[vec![q("1"), q("1")], vec![q("1"), q("-1")]],
            &[q("3"), q("1")],
        );
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: q("4"),
                x: vec![q("2"), q("1")]
            }
        );
    }

    #[test]
    fn fractional_optimum_and_negative_rhs() {
        // min x + y  s.t. −2x − 2y = −3
        let out = minimize(&[q("1"), q("1")], &[vec![q("-2"), q("-2")]], &[q("-3")]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q("3/2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        assert_eq!(
            minimize(&[q("1")], &[vec![q("1")]], &[q("-1")]),
            LpOutcome::Infeasible
        );
        assert_eq!(
            minimize(&[q("-1"), q("0")], &[vec![q("1"), q("-1")]], &[q("0")]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn redundant_rows() {
        let out = minimize(
            &[q("1"), q("1")],
            &[vec![q("1"), q("1")], vec![q("2"), q("2")]],
            &[q("1"), q("2")],
        );
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == q("1")));
    }
}
