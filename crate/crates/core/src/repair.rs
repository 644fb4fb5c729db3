// SPDX-License-Identifier: Apache-2.0

//! Boundary-mass repair of 1-chains modulo p.
//!
//! Starting from the positive representative (multiplicities in 1..p−1), the
//! loop picks a vertex whose boundary multiplicity has absolute value at
//! least p, walks a chain of segments from it to a boundary vertex of the
//! opposite sign, and replaces every multiplicity θ on the walk by p − θ with
//! the orientation reversed. Each round lowers the boundary mass by at least
//! 2, and the result satisfies
//!
//! * M(P̃) ≤ (p−1)·Mᵖ(P)
//! * M(∂P̃) ≤ (p−1)·Mᵖ(∂P)
//!
//! with P̃ − P = p·Q for an explicit integer chain Q.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::chain::{Degree, IntegerChain};
use crate::error::{Error, Result};
use crate::modp::{equiv_mod_p, integer_pmass, positive_representative, Modulus};

/// One oriented segment of a path: `dir = +1` follows the edge's stored
/// orientation, `dir = −1` runs it backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub edge: usize,
    pub dir: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentPath {
    pub steps: Vec<Step>,
    pub start: usize,
    pub end: usize,
}

impl SegmentPath {
    fn step_ends(q: &IntegerChain, step: Step) -> (usize, usize) {
        let (tail, head) = q.complex().edge(step.edge);
        if step.dir > 0 {
            (tail, head)
        } else {
            (head, tail)
        }
    }

    /// The path as a 1-chain (±1 per step).
    pub fn to_chain(&self, like: &IntegerChain) -> IntegerChain {
        let mut out = IntegerChain::zero(like.complex().clone(), Degree::One);
        for s in &self.steps {
            out.add_to(s.edge, s.dir as i64);
        }
        out
    }

    /// Checks consecutiveness, endpoints, agreement with the orientation of
    /// `q`, and that no segment repeats.
    pub fn validate(&self, q: &IntegerChain) -> Result<()> {
        let mut at = self.start;
        let mut seen = std::collections::HashSet::new();
        for (i, &step) in self.steps.iter().enumerate() {
            if step.edge >= q.complex().num_edges() || (step.dir != 1 && step.dir != -1) {
                return Err(Error::BrokenPath(i));
            }
            let (from, to) = Self::step_ends(q, step);
            if from != at || !seen.insert(step.edge) {
                return Err(Error::BrokenPath(i));
            }
            if step.dir as i64 * q.coeff(step.edge) <= 0 {
                return Err(Error::CoefficientOutOfRange {
                    edge: step.edge,
                    value: step.dir as i64 * q.coeff(step.edge),
                    max: i64::MAX,
                });
            }
            at = to;
        }
        if at != self.end {
            return Err(Error::BrokenPath(self.steps.len()));
        }
        Ok(())
    }
}

/// Walks from `z` along segments agreeing with the orientation of `q` until
/// reaching a vertex of positive boundary multiplicity. Requires ∂q(z) < 0.
fn walk_from_source(q: &IntegerChain, z: usize, bd: &IntegerChain) -> Result<SegmentPath> {
    let k = q.complex();
    // Outgoing admissible steps per vertex, in edge-index order.
    let mut out: BTreeMap<usize, Vec<Step>> = BTreeMap::new();
    let mut residual: HashMap<usize, u64> = HashMap::new();
    for (e, theta) in q.iter() {
        let (tail, head) = k.edge(e);
        let (dir, from) = if theta > 0 { (1, tail) } else { (-1, head) };
        out.entry(from).or_default().push(Step { edge: e, dir });
        residual.insert(e, theta.unsigned_abs());
    }

    let mut steps: Vec<Step> = Vec::new();
    let mut visited: Vec<usize> = vec![z];
    let mut position: HashMap<usize, usize> = HashMap::from([(z, 0)]);
    let mut at = z;
    // Every step consumes one unit of residual multiplicity.
    let budget: u64 = residual.values().sum();
    for _ in 0..budget {
        let step = out
            .get(&at)
            .and_then(|cands| cands.iter().find(|s| residual[&s.edge] > 0).copied())
            .ok_or_else(|| Error::Internal(format!("walk stuck at vertex {at}")))?;
        *residual.get_mut(&step.edge).expect("edge in support") -= 1;
        let next = SegmentPath::step_ends(q, step).1;
        if let Some(&i) = position.get(&next) {
            // Back at a vertex of the path: drop the loop.
            steps.truncate(i);
            for v in visited.drain(i + 1..) {
                position.remove(&v);
            }
        } else {
            steps.push(step);
            position.insert(next, visited.len());
            visited.push(next);
        }
        at = next;
        if at != z && bd.coeff(at) > 0 {
            return Ok(SegmentPath {
                steps,
                start: z,
                end: at,
            });
        }
    }
    Err(Error::Internal(
        "walk exhausted the chain without reaching a sink".into(),
    ))
}

/// Extracts a simple chain of oriented segments of `q` through `z`.
///
/// If ∂q(z) < 0 the path starts at `z` and ends at a vertex of positive
/// boundary multiplicity; if ∂q(z) > 0 it starts at a vertex of negative
/// multiplicity and ends at `z`. Ties go to the lowest edge index.
pub fn extract_chain(q: &IntegerChain, z: usize) -> Result<SegmentPath> {
    if q.degree() != Degree::One {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: q.degree().as_u8(),
        });
    }
    if let Some((e, _)) = q.iter().find(|&(_, v)| v == 0) {
        return Err(Error::MalformedChain(e));
    }
    let bd = q.boundary()?;
    let bz = bd.coeff(z);
    if bz == 0 {
        return Err(Error::NotInBoundarySupport(z));
    }
    if bz < 0 {
        return walk_from_source(q, z, &bd);
    }
    let reversed = q.negated();
    let path = walk_from_source(&reversed, z, &bd.negated())?;
    Ok(SegmentPath {
        steps: path
            .steps
            .iter()
            .rev()
            .map(|s| Step {
                edge: s.edge,
                dir: -s.dir,
            })
            .collect(),
        start: path.end,
        end: path.start,
    })
}

/// Replaces the multiplicity θ on every path segment by p − θ with the
/// orientation reversed, i.e. subtracts p times the path.
pub fn flip_along_path(q: &IntegerChain, path: &SegmentPath, p: Modulus) -> Result<IntegerChain> {
    path.validate(q).map_err(|err| match err {
        Error::CoefficientOutOfRange { edge, value, .. } => Error::CoefficientOutOfRange {
            edge,
            value,
            max: p.get() - 1,
        },
        other => other,
    })?;
    let mut out = q.clone();
    for s in &path.steps {
        let theta = s.dir as i64 * q.coeff(s.edge);
        if !(1..p.get()).contains(&theta) {
            return Err(Error::CoefficientOutOfRange {
                edge: s.edge,
                value: theta,
                max: p.get() - 1,
            });
        }
        out.set(s.edge, q.coeff(s.edge) - s.dir as i64 * p.get());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceStep {
    pub vertex: usize,
    pub path: SegmentPath,
    pub boundary_mass_before: u64,
    pub boundary_mass_after: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairCertificate {
    pub p: Modulus,
    pub input: IntegerChain,
    pub output: IntegerChain,
    /// `output − input = p · quotient`.
    pub quotient: IntegerChain,
    pub trace: Vec<TraceStep>,
}

/// Runs the repair loop. Vertices are processed lowest index first.
pub fn repair(chain: &IntegerChain, p: Modulus) -> Result<(IntegerChain, RepairCertificate)> {
    if chain.degree() != Degree::One {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: chain.degree().as_u8(),
        });
    }
    let mut q = positive_representative(chain, p);
    let start_mass = q.boundary()?.integer_mass();
    let cap = start_mass.div_ceil(2);
    let mut trace = Vec::new();
    loop {
        let bd = q.boundary()?;
        let Some((z, _)) = bd.iter().find(|&(_, v)| v.abs() >= p.get()) else {
            break;
        };
        if trace.len() as u64 >= cap {
            return Err(Error::Internal(format!(
                "repair exceeded its iteration cap of {cap}"
            )));
        }
        let path = extract_chain(&q, z)?;
        let next = flip_along_path(&q, &path, p)?;
        let before = bd.integer_mass();
        let after = next.boundary()?.integer_mass();
        if after + 2 > before {
            return Err(Error::Internal(format!(
                "boundary mass went from {before} to {after} at vertex {z}"
            )));
        }
        trace.push(TraceStep {
            vertex: z,
            path,
            boundary_mass_before: before,
            boundary_mass_after: after,
        });
        q = next;
    }
    let cert = equiv_mod_p(&q, chain, p)?
        .ok_or_else(|| Error::Internal("repaired chain left its class".into()))?;
    let certificate = RepairCertificate {
        p,
        input: chain.clone(),
        output: q.clone(),
        quotient: cert.quotient,
        trace,
    };
    Ok((q, certificate))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Integer witnesses: left- and right-hand side of the checked inequality,
    /// or the offending cell.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

/// Re-derives the postconditions of [`repair`] from `input` and `output`
/// alone, in integer arithmetic. When a certificate is supplied its quotient
/// and trace are checked as well.
pub fn verify_repair(
    input: &IntegerChain,
    output: &IntegerChain,
    p: Modulus,
    certificate: Option<&RepairCertificate>,
) -> Result<VerifyReport> {
    let diff = output.minus(input)?;
    let pv = p.get();
    let mut checks = Vec::new();

    let bad = diff.iter().find(|&(_, v)| !p.divides(v));
    let mut detail = match bad {
        Some((e, v)) => format!("edge {e}: difference {v} not divisible by {pv}"),
        None => "output - input divisible by p".to_string(),
    };
    let mut ok = bad.is_none();
    if let Some(cert) = certificate {
        let quotient_ok = cert.p == p
            && cert.input == *input
            && cert.output == *output
            && diff
                .minus(&cert.quotient.scaled(pv))
                .map(|r| r.is_zero())
                .unwrap_or(false);
        if !quotient_ok {
            detail = "certificate quotient does not satisfy output - input = p*Q".into();
        }
        ok &= quotient_ok;
    }
    checks.push(check("divisibility", ok, detail));

    let bad = output.iter().find(|&(_, v)| !(1..pv).contains(&v.abs()));
    checks.push(check(
        "multiplicity_range",
        bad.is_none(),
        match bad {
            Some((e, v)) => format!("edge {e}: |{v}| not in 1..={}", pv - 1),
            None => format!("all |coefficients| in 1..={}", pv - 1),
        },
    ));

    let out_bd = output.boundary()?;
    let bad = out_bd.iter().find(|&(_, v)| v.abs() > pv - 1);
    checks.push(check(
        "boundary_range",
        bad.is_none(),
        match bad {
            Some((v, m)) => format!("vertex {v}: |{m}| > {}", pv - 1),
            None => format!("all boundary multiplicities within {}", pv - 1),
        },
    ));

    // Per edge: |θ̃| ≤ (p−1)·|select(θ)|, which sums to M(P̃) ≤ (p−1)·Mᵖ(P).
    let mut bad = None;
    for (e, v) in output.iter() {
        let allowed = (pv - 1) * p.select(input.coeff(e)).abs();
        if v.abs() > allowed {
            bad = Some((e, v, allowed));
            break;
        }
    }
    let lhs = output.mass();
    let rhs = (pv - 1) as f64 * crate::modp::pmass(input, p);
    checks.push(check(
        "mass_bound",
        bad.is_none(),
        match bad {
            Some((e, v, allowed)) => format!("edge {e}: |{v}| > {allowed}"),
            None => format!("M = {lhs} <= (p-1)*M^p = {rhs} (edgewise)"),
        },
    ));

    let lhs = out_bd.integer_mass();
    let rhs = (pv as u64 - 1) * integer_pmass(&input.boundary()?, p);
    checks.push(check(
        "boundary_mass_bound",
        lhs <= rhs,
        format!("M(bd) = {lhs}, (p-1)*M^p(bd) = {rhs}"),
    ));

    if let Some(cert) = certificate {
        checks.push(check_trace(input, output, p, &cert.trace)?);
    }
    Ok(VerifyReport { checks })
}

fn check_trace(
    input: &IntegerChain,
    output: &IntegerChain,
    p: Modulus,
    trace: &[TraceStep],
) -> Result<Check> {
    let mut q = positive_representative(input, p);
    for (i, step) in trace.iter().enumerate() {
        let fail = |why: String| Ok(check("trace_descent", false, format!("step {i}: {why}")));
        let before = q.boundary()?.integer_mass();
        if before != step.boundary_mass_before {
            return fail(format!(
                "recorded {} before, recomputed {before}",
                step.boundary_mass_before
            ));
        }
        let next = match flip_along_path(&q, &step.path, p) {
            Ok(next) => next,
            Err(err) => return fail(err.to_string()),
        };
        let after = next.boundary()?.integer_mass();
        if after != step.boundary_mass_after || after + 2 > before {
            return fail(format!("boundary mass {before} -> {after}"));
        }
        q = next;
    }
    if q != *output {
        return Ok(check(
            "trace_descent",
            false,
            "replayed trace does not reach output".into(),
        ));
    }
    Ok(check(
        "trace_descent",
        true,
        format!("{} steps, each dropping boundary mass by >= 2", trace.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, GeometricComplex};
    use crate::rational::int;
    use std::sync::Arc;

    fn complex(n: usize, edges: &[(usize, usize)]) -> Arc<GeometricComplex> {
        let pts = (0..n)
            .map(|i| vec![int(i as i64), int((i * i) as i64)])
            .collect();
        Arc::new(build_complex(pts, edges.to_vec()).unwrap())
    }

    fn chain(k: &Arc<GeometricComplex>, c: &[(usize, i64)]) -> IntegerChain {
        IntegerChain::from_coeffs(k.clone(), Degree::One, c.iter().copied()).unwrap()
    }

    fn m(p: i64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn fwd(edge: usize) -> Step {
        Step { edge, dir: 1 }
    }

    #[test]
    fn extract_parallel_pair() {
        let k = complex(2, &[(0, 1), (0, 1)]);
        let q = chain(&k, &[(0, 1), (1, 1)]);
        let path = extract_chain(&q, 0).unwrap();
        assert_eq!(
            path,
            SegmentPath {
                steps: vec![fwd(0)],
                start: 0,
                end: 1
            }
        );
    }

    #[test]
    fn extract_path_graph() {
        let k = complex(3, &[(0, 1), (1, 2)]);
        let q = chain(&k, &[(0, 1), (1, 1)]);
        let path = extract_chain(&q, 0).unwrap();
        assert_eq!(path.steps, vec![fwd(0), fwd(1)]);
        assert_eq!(path.end, 2);
    }

    #[test]
    fn extract_drops_loops() {
        // a=0, b=1, c=2, d=3: a->b, b->c, c->b, b->d
        let k = complex(4, &[(0, 1), (1, 2), (2, 1), (1, 3)]);
        let q = chain(&k, &[(0, 1), (1, 1), (2, 1), (3, 1)]);
        let path = extract_chain(&q, 0).unwrap();
        assert_eq!(
            path,
            SegmentPath {
                steps: vec![fwd(0), fwd(3)],
                start: 0,
                end: 3
            }
        );
        path.validate(&q).unwrap();
    }

    #[test]
    fn extract_from_positive_end() {
        let k = complex(3, &[(0, 1), (1, 2)]);
        let q = chain(&k, &[(0, 1), (1, 1)]);
        let path = extract_chain(&q, 2).unwrap();
        assert_eq!(
            path,
            SegmentPath {
                steps: vec![fwd(0), fwd(1)],
                start: 0,
                end: 2
            }
        );
        // negative orientation is followed backwards
        let q = chain(&k, &[(0, -1), (1, -1)]);
        let path = extract_chain(&q, 0).unwrap();
        assert_eq!(
            path.steps,
            vec![Step { edge: 1, dir: -1 }, Step { edge: 0, dir: -1 }]
        );
        assert_eq!((path.start, path.end), (2, 0));
    }

    #[test]
    fn extract_errors() {
        let k = complex(3, &[(0, 1), (1, 2)]);
        let q = chain(&k, &[(0, 1), (1, 1)]);
        assert_eq!(extract_chain(&q, 1), Err(Error::NotInBoundarySupport(1)));
    }

    #[test]
    fn flip_examples() {
        let k = complex(2, &[(0, 1), (0, 1), (0, 1)]);
        let q = chain(&k, &[(0, 1), (1, 1)]);
        let path = SegmentPath {
            steps: vec![fwd(0)],
            start: 0,
            end: 1,
        };
        let q1 = flip_along_path(&q, &path, m(2)).unwrap();
        assert_eq!(q1, chain(&k, &[(0, -1), (1, 1)]));
        assert_eq!(q.boundary().unwrap().integer_mass(), 4);
        assert!(q1.boundary().unwrap().is_zero());

        let q = chain(&k, &[(0, 1), (1, 1), (2, 1)]);
        let q1 = flip_along_path(&q, &path, m(3)).unwrap();
        assert_eq!(q1, chain(&k, &[(0, -2), (1, 1), (2, 1)]));
        assert_eq!(q.boundary().unwrap().integer_mass(), 6);
        assert!(q1.boundary().unwrap().is_zero());

        let single = chain(&k, &[(0, 1)]);
        let flipped = flip_along_path(&single, &path, m(2)).unwrap();
        assert_eq!(
            flipped.boundary().unwrap(),
            single.boundary().unwrap().negated()
        );
    }

    #[test]
    fn flip_rejects_out_of_range() {
        let k = complex(2, &[(0, 1)]);
        let path = SegmentPath {
            steps: vec![fwd(0)],
            start: 0,
            end: 1,
        };
        let err = flip_along_path(&chain(&k, &[(0, 3)]), &path, m(3)).unwrap_err();
        assert_eq!(
            err,
            Error::CoefficientOutOfRange {
                edge: 0,
                value: 3,
                max: 2
            }
        );
        let err = flip_along_path(&chain(&k, &[(0, -1)]), &path, m(3)).unwrap_err();
        assert!(matches!(
            err,
            Error::CoefficientOutOfRange { value: -1, .. }
        ));
    }

    #[test]
    fn repair_fixed_point() {
        let k = complex(3, &[(0, 1), (1, 2)]);
        let p = chain(&k, &[(0, 1), (1, 4)]);
        let (out, cert) = repair(&p, m(3)).unwrap();
        assert_eq!(out, positive_representative(&p, m(3)));
        assert!(cert.trace.is_empty());
    }

    #[test]
    fn repair_parallel_pair() {
        let k = complex(2, &[(0, 1), (0, 1)]);
        let p = chain(&k, &[(0, 1), (1, 1)]);
        let (out, cert) = repair(&p, m(2)).unwrap();
        assert!(out.boundary().unwrap().is_zero());
        assert_eq!(cert.trace.len(), 1);
        assert_eq!(
            (
                cert.trace[0].boundary_mass_before,
                cert.trace[0].boundary_mass_after
            ),
            (4, 0)
        );
        assert!(verify_repair(&p, &out, m(2), Some(&cert))
            .unwrap()
            .all_pass());
    }

    #[test]
    fn repair_null_class() {
        let k = complex(3, &[(0, 1), (1, 2)]);
        let p = chain(&k, &[(0, 6), (1, -9)]);
        let (out, cert) = repair(&p, m(3)).unwrap();
        assert!(out.is_zero());
        assert_eq!(cert.quotient, chain(&k, &[(0, -2), (1, 3)]));
    }

    #[test]
    fn verify_catches_mutations() {
        let k = complex(2, &[(0, 1), (0, 1)]);
        let p = chain(&k, &[(0, 1), (1, 1)]);
        let (out, cert) = repair(&p, m(2)).unwrap();

        let mut bumped = cert.clone();
        bumped.quotient.add_to(0, 1);
        let report = verify_repair(&p, &out, m(2), Some(&bumped)).unwrap();
        assert_eq!(report.failed(), vec!["divisibility"]);

        let big = chain(&k, &[(0, 3), (1, 1)]);
        let report = verify_repair(&chain(&k, &[(0, 1), (1, 1)]), &big, m(3), None).unwrap();
        assert!(report.failed().contains(&"multiplicity_range"));
        assert!(report.failed().contains(&"divisibility"));
    }

    #[test]
    fn repair_rejects_zero_chains_of_wrong_degree() {
        let k = complex(2, &[(0, 1)]);
        let v = IntegerChain::zero(k, Degree::Zero);
        assert!(matches!(
            repair(&v, m(2)),
            Err(Error::DegreeMismatch { .. })
        ));
    }
}
