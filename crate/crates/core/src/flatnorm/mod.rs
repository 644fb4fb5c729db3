// SPDX-License-Identifier: Apache-2.0

//! Exact oracle for the flat norm and the flat norm modulo p of chains on a
//! finite complex, with every coefficient restricted to [−B, B].
//!
//! For a 0-chain T the oracle minimizes M(R) + M(S) over T = R + ∂S (+ pQ).
//! A 1-complex has no 2-cells, so for a 1-chain S vanishes and only the pQ
//! term can reduce the mass. The search is exponential; it is meant for
//! small instances and refuses more than [`MAX_EDGES`] edges or a bound
//! above [`MAX_BOUND`] unless forced.

mod cone;
mod relaxation;
mod search;

pub use cone::{cone, zero_sum_check, Cone};
pub use relaxation::{flat_norm_relaxation, minimize, LpOutcome};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::chain::{Degree, IntegerChain};
use crate::error::{Error, Result};
use crate::modp::Modulus;
use crate::rational::{int, to_f64};
use search::{solve, vertex_choice, Problem, Weight};

pub const MAX_EDGES: usize = 12;
pub const MAX_BOUND: i64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    /// Coefficient bound B; defaults to 2·max|θ| + p (p = 1 classically).
    pub bound: Option<i64>,
    /// Skip the instance-size guardrail.
    pub force: bool,
}

impl SearchOptions {
    pub fn bound(bound: i64) -> Self {
        SearchOptions {
            bound: Some(bound),
            force: false,
        }
    }
}

/// Witness T = R + ∂S + pQ for the optimal value.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatNormDecomposition {
    pub value: f64,
    /// Present when every edge length is rational.
    pub exact_value: Option<BigRational>,
    pub r: IntegerChain,
    /// Degree-1 witness for 0-chains; absent for 1-chains.
    pub s: Option<IntegerChain>,
    /// Zero in the classical case.
    pub q: IntegerChain,
    pub modulus: Option<i64>,
    pub bound_used: i64,
    /// Some coefficient of the witness sits at ±B, so the value is only an
    /// upper bound for larger B.
    pub saturated: bool,
    pub nodes: u64,
}

impl FlatNormDecomposition {
    /// Recomputes R + ∂S + pQ and compares with `t`.
    pub fn reconstructs(&self, t: &IntegerChain) -> bool {
        let mut sum = self.r.clone();
        if let Some(s) = &self.s {
            match s.boundary().and_then(|b| sum.plus(&b)) {
                Ok(next) => sum = next,
                Err(_) => return false,
            }
        }
        if let Some(p) = self.modulus {
            match sum.plus(&self.q.scaled(p)) {
                Ok(next) => sum = next,
                Err(_) => return false,
            }
        }
        sum == *t
    }
}

pub fn flat_norm(t: &IntegerChain, options: SearchOptions) -> Result<FlatNormDecomposition> {
    compute(t, None, options)
}

pub fn flat_norm_mod_p(
    t: &IntegerChain,
    p: Modulus,
    options: SearchOptions,
) -> Result<FlatNormDecomposition> {
    compute(t, Some(p.get()), options)
}

pub fn default_bound(t: &IntegerChain, modulus: Option<i64>) -> i64 {
    2 * t.max_abs_coeff() + modulus.unwrap_or(1)
}

fn compute(
    t: &IntegerChain,
    modulus: Option<i64>,
    options: SearchOptions,
) -> Result<FlatNormDecomposition> {
    let bound = options.bound.unwrap_or_else(|| default_bound(t, modulus));
    if bound < t.max_abs_coeff() {
        return Err(Error::ParamOutOfRange(format!(
            "bound {bound} is below the largest coefficient {}",
            t.max_abs_coeff()
        )));
    }
    let k = t.complex();
    if !options.force && t.degree() == Degree::Zero {
        if k.num_edges() > MAX_EDGES {
            return Err(Error::Guardrail(format!(
                "{} edges > {MAX_EDGES}",
                k.num_edges()
            )));
        }
        if bound > MAX_BOUND {
            return Err(Error::Guardrail(format!("bound {bound} > {MAX_BOUND}")));
        }
    }
    let Ok(lengths) = k.exact_lengths() else {
        let lengths = (0..k.num_edges()).map(|e| k.length(e)).collect();
        return run(t, modulus, bound, lengths, 1.0, |c| (*c, None));
    };
    // Exact costs in integer units of 1/(2D), D the common denominator, so
    // that the search never allocates. Falls back to big rationals.
    let denom = lengths
        .iter()
        .fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
    let unit = BigInt::from(2) * &denom;
    let scaled: Option<Vec<i128>> = lengths
        .iter()
        .map(|l| i128::try_from(l.numer() * (&unit / l.denom())).ok())
        .collect();
    let fits = |x: &i128| x.unsigned_abs() < 1 << 80;
    match (scaled, i128::try_from(&unit)) {
        (Some(scaled), Ok(u)) if fits(&u) && scaled.iter().all(fits) => {
            run(t, modulus, bound, scaled, u, |c| {
                let exact = BigRational::new(BigInt::from(*c), unit.clone());
                (to_f64(&exact), Some(exact))
            })
        }
        _ => run(t, modulus, bound, lengths, BigRational::one(), |c| {
            (to_f64(c), Some(c.clone()))
        }),
    }
}

fn run<W: Weight>(
    t: &IntegerChain,
    modulus: Option<i64>,
    bound: i64,
    lengths: Vec<W>,
    unit: W,
    report: impl Fn(&W) -> (f64, Option<BigRational>),
) -> Result<FlatNormDecomposition> {
    let k = t.complex().clone();
    let dense = |chain: &[i64], degree| {
        IntegerChain::from_coeffs(k.clone(), degree, chain.iter().copied().enumerate())
    };
    let (cost, r, s, q, nodes) = match t.degree() {
        Degree::Zero => {
            let problem = Problem {
                target: (0..k.num_vertices()).map(|v| t.coeff(v)).collect(),
                edges: k.edges(),
                lengths,
                unit: unit.clone(),
                modulus,
                bound,
            };
            let sol = solve(&problem)
                .ok_or_else(|| Error::Internal("no feasible decomposition".into()))?;
            let s = dense(&sol.s, Degree::One)?;
            (
                sol.cost,
                dense(&sol.r, Degree::Zero)?,
                Some(s),
                dense(&sol.q, Degree::Zero)?,
                sol.nodes,
            )
        }
        Degree::One => {
            // No 2-cells: each edge independently keeps R_e = T_e − pQ_e.
            let mut cost = W::zero();
            let mut r = Vec::with_capacity(k.num_edges());
            let mut q = Vec::with_capacity(k.num_edges());
            for (e, len) in lengths.iter().enumerate() {
                let (re, qe) = vertex_choice(t.coeff(e), modulus, bound)
                    .ok_or_else(|| Error::Internal("no feasible decomposition".into()))?;
                cost = cost + len.times(re.unsigned_abs());
                r.push(re);
                q.push(qe);
            }
            (
                cost,
                dense(&r, Degree::One)?,
                None,
                dense(&q, Degree::One)?,
                k.num_edges() as u64,
            )
        }
    };
    let saturated = [&r, &q]
        .into_iter()
        .chain(s.as_ref())
        .any(|c| c.max_abs_coeff() >= bound);
    let (value, exact_value) = report(&cost);
    let decomposition = FlatNormDecomposition {
        value,
        exact_value,
        r,
        s,
        q,
        modulus,
        bound_used: bound,
        saturated,
        nodes,
    };
    if !decomposition.reconstructs(t) {
        return Err(Error::Internal(
            "flat-norm witness does not reconstruct the input".into(),
        ));
    }
    Ok(decomposition)
}

/// M(R) + M(S) recomputed from the witness, exactly when lengths allow.
pub fn witness_cost(d: &FlatNormDecomposition) -> Option<BigRational> {
    let r = d.r.exact_mass()?;
    let s = match &d.s {
        Some(s) => s.exact_mass()?,
        None => int(0),
    };
    Some(r + s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, GeometricComplex};
    use crate::modp::equiv_mod_p;
    use crate::rational::parse_rational;
    use std::sync::Arc;

    fn segment(len: &str) -> Arc<GeometricComplex> {
        let pts = vec![vec![int(0)], vec![parse_rational(len).unwrap()]];
        Arc::new(build_complex(pts, vec![(0, 1)]).unwrap())
    }

    fn dipole(k: &Arc<GeometricComplex>) -> IntegerChain {
        IntegerChain::from_coeffs(k.clone(), Degree::Zero, [(1, 1), (0, -1)]).unwrap()
    }

    #[test]
    fn long_edge_keeps_the_atoms() {
        let k = segment("3");
        let d = flat_norm(&dipole(&k), SearchOptions::bound(3)).unwrap();
        assert_eq!(d.exact_value, Some(int(2)));
        assert_eq!(d.r, dipole(&k));
        assert!(d.s.unwrap().is_zero());
    }

    #[test]
    fn short_edge_fills_in() {
        let k = segment("1/2");
        let d = flat_norm(&dipole(&k), SearchOptions::bound(3)).unwrap();
        assert_eq!(d.exact_value, parse_rational("1/2").ok());
        assert!(d.r.is_zero());
        assert_eq!(d.s.unwrap().iter().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn zero_chain() {
        let k = segment("1");
        let d = flat_norm(
            &IntegerChain::zero(k, Degree::Zero),
            SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn multiples_of_p_vanish() {
        let k = segment("1");
        let p = Modulus::new(3).unwrap();
        let t = IntegerChain::from_coeffs(k.clone(), Degree::Zero, [(0, 3)]).unwrap();
        let d = flat_norm_mod_p(&t, p, SearchOptions::default()).unwrap();
        assert_eq!(d.value, 0.0);
        assert_eq!(d.q.iter().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn dipole_mod_two() {
        let k = segment("3");
        let p = Modulus::new(2).unwrap();
        let d = flat_norm_mod_p(&dipole(&k), p, SearchOptions::bound(3)).unwrap();
        assert_eq!(d.exact_value, Some(int(2)));
    }

    #[test]
    fn vanishes_iff_congruent_to_zero() {
        let k = segment("1");
        let p = Modulus::new(3).unwrap();
        for a in -4..=4 {
            for b in -4..=4 {
                let t =
                    IntegerChain::from_coeffs(k.clone(), Degree::Zero, [(0, a), (1, b)]).unwrap();
                let zero = IntegerChain::zero(k.clone(), Degree::Zero);
                let d = flat_norm_mod_p(&t, p, SearchOptions::bound(4)).unwrap();
                let congruent = equiv_mod_p(&t, &zero, p).unwrap().is_some();
                assert_eq!(d.value == 0.0, congruent, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn one_chains_only_shed_multiples_of_p() {
        let k = segment("2");
        let t = IntegerChain::from_coeffs(k.clone(), Degree::One, [(0, 7)]).unwrap();
        let d = flat_norm(&t, SearchOptions::default()).unwrap();
        assert_eq!(d.exact_value, Some(int(14)));
        let d = flat_norm_mod_p(&t, Modulus::new(3).unwrap(), SearchOptions::bound(7)).unwrap();
        assert_eq!(d.exact_value, Some(int(2)));
        assert_eq!(d.q.coeff(0), 2);
        assert!(d.s.is_none());
    }

    #[test]
    fn guardrail_and_bound_checks() {
        let k = segment("1");
        let t = IntegerChain::from_coeffs(k.clone(), Degree::Zero, [(0, 5)]).unwrap();
        assert!(matches!(
            flat_norm(&t, SearchOptions::bound(4)),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            flat_norm(&t, SearchOptions::bound(51)),
            Err(Error::Guardrail(_))
        ));
        let forced = SearchOptions {
            bound: Some(51),
            force: true,
        };
        assert!(flat_norm(&t, forced).is_ok());
    }

    #[test]
    fn saturation_is_flagged() {
        let k = segment("1");
        let t = IntegerChain::from_coeffs(k.clone(), Degree::Zero, [(0, 2)]).unwrap();
        assert!(flat_norm(&t, SearchOptions::bound(2)).unwrap().saturated);
        assert!(!flat_norm(&t, SearchOptions::bound(3)).unwrap().saturated);
    }

    #[test]
    fn irrational_lengths_fall_back_to_floats() {
        let pts = vec![vec![int(0), int(0)], vec![int(1), int(1)]];
        let k = Arc::new(build_complex(pts, vec![(0, 1)]).unwrap());
        let d = flat_norm(&dipole(&k), SearchOptions::bound(2)).unwrap();
        assert!(d.exact_value.is_none());
        assert!((d.value - 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            flat_norm_relaxation(&dipole(&k)),
            Err(Error::IrrationalLength(0))
        ));
    }
}
