// SPDX-License-Identifier: Apache-2.0

//! Depth-first branch and bound over the coefficients of S in edge order.
//!
//! Values are tried from −B upwards and an incumbent is only replaced by a
//! strictly cheaper one, so the witness returned is the lexicographically
//! smallest optimal S (and, per vertex, the smallest optimal Q).

use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Scalar type for costs: floats, exact rationals, or integers counting a
/// fixed fraction of a unit.
pub(crate) trait Weight: Clone + PartialOrd + Add<Output = Self> + Zero {
    fn times(&self, n: u64) -> Self;
    fn half(&self) -> Self;
}

impl Weight for i128 {
    fn times(&self, n: u64) -> Self {
        self * n as i128
    }
    /// Callers scale lengths so that halves stay integral.
    fn half(&self) -> Self {
        self / 2
    }
}

impl Weight for f64 {
    fn times(&self, n: u64) -> Self {
        self * n as f64
    }
    fn half(&self) -> Self {
        self / 2.0
    }
}

impl Weight for BigRational {
    fn times(&self, n: u64) -> Self {
        self * BigInt::from(n)
    }
    fn half(&self) -> Self {
        self / BigInt::from(2)
    }
}

pub(crate) struct Problem<'a, W> {
    /// Dense coefficients of the 0-chain T.
    pub target: Vec<i64>,
    pub edges: &'a [(usize, usize)],
    pub lengths: Vec<W>,
    /// Cost of one unit of |R|.
    pub unit: W,
    pub modulus: Option<i64>,
    pub bound: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution<W> {
    pub cost: W,
    pub s: Vec<i64>,
    pub r: Vec<i64>,
    pub q: Vec<i64>,
    pub nodes: u64,
}

/// Cheapest admissible (R, Q) at a vertex with residual `d = R + pQ`,
/// smallest Q first among ties. None when every choice breaks the bound.
pub(crate) fn vertex_choice(d: i64, modulus: Option<i64>, bound: i64) -> Option<(i64, i64)> {
    let Some(p) = modulus else {
        return (d.abs() <= bound).then_some((d, 0));
    };
    let r = d.rem_euclid(p);
    let r = if 2 * r > p { r - p } else { r };
    let q0 = (d - r) / p;
    let mut best: Option<(i64, i64)> = None;
    for q in [q0 - 1, q0, q0 + 1, q0.clamp(-bound, bound)] {
        if q.abs() > bound {
            continue;
        }
        let rr = d - p * q;
        if rr.abs() > bound {
            continue;
        }
        let better = match best {
            None => true,
            Some((br, bq)) => (rr.abs(), q) < (br.abs(), bq),
        };
        if better {
            best = Some((rr, q));
        }
    }
    best
}

/// Lower bound on |R| at an open vertex, before the remaining edges move d.
fn open_residue(d: i64, modulus: Option<i64>) -> u64 {
    match modulus {
        None => d.unsigned_abs(),
        Some(p) => {
            let r = d.rem_euclid(p);
            r.min(p - r).unsigned_abs()
        }
    }
}

struct Search<'a, W> {
    problem: &'a Problem<'a, W>,
    /// For each vertex and depth, the minimum length of incident edges with
    /// index ≥ depth (None when all incident edges are assigned).
    suffix_min: Vec<Vec<Option<W>>>,
    /// Depth after which each vertex has no unassigned edges.
    closes_at: Vec<usize>,
    d: Vec<i64>,
    s: Vec<i64>,
    upper: W,
    best: Option<Solution<W>>,
    nodes: u64,
}

impl<'a, W: Weight> Search<'a, W> {
    fn new(problem: &'a Problem<'a, W>) -> Self {
        let n = problem.target.len();
        let m = problem.edges.len();
        let mut suffix_min = vec![vec![None; m + 1]; n];
        let mut closes_at = vec![0; n];
        for (e, &(t, h)) in problem.edges.iter().enumerate() {
            closes_at[t] = e + 1;
            closes_at[h] = e + 1;
        }
        for (v, mins) in suffix_min.iter_mut().enumerate() {
            for depth in (0..m).rev() {
                let (t, h) = problem.edges[depth];
                let here = (t == v || h == v).then(|| problem.lengths[depth].clone());
                mins[depth] = match (here, mins[depth + 1].clone()) {
                    (Some(a), Some(b)) => Some(if a < b { a } else { b }),
                    (a, b) => a.or(b),
                };
            }
        }
        // S = 0 is feasible when B ≥ max|T|.
        let upper = problem
            .target
            .iter()
            .filter_map(|&d| vertex_choice(d, problem.modulus, problem.bound))
            .fold(W::zero(), |acc, (r, _)| {
                acc + problem.unit.times(r.unsigned_abs())
            });
        Search {
            problem,
            suffix_min,
            closes_at,
            d: problem.target.clone(),
            s: vec![0; m],
            upper,
            best: None,
            nodes: 0,
        }
    }

    /// None when some closed vertex cannot meet the bound.
    fn lower_bound(&self, depth: usize, edge_cost: &W) -> Option<W> {
        let unit = &self.problem.unit;
        let mut lb = edge_cost.clone();
        for (v, &d) in self.d.iter().enumerate() {
            if self.closes_at[v] <= depth {
                let (r, _) = vertex_choice(d, self.problem.modulus, self.problem.bound)?;
                lb = lb + unit.times(r.unsigned_abs());
            } else {
                let residue = open_residue(d, self.problem.modulus);
                if residue == 0 {
                    continue;
                }
                let factor = match &self.suffix_min[v][depth] {
                    Some(len) => {
                        let h = len.half();
                        if h < *unit {
                            h
                        } else {
                            unit.clone()
                        }
                    }
                    None => unit.clone(),
                };
                lb = lb + factor.times(residue);
            }
        }
        Some(lb)
    }

    fn prunes(&self, lb: &W) -> bool {
        match &self.best {
            Some(best) => *lb >= best.cost,
            None => *lb > self.upper,
        }
    }

    fn descend(&mut self, depth: usize, edge_cost: W) {
        self.nodes += 1;
        let Some(lb) = self.lower_bound(depth, &edge_cost) else {
            return;
        };
        if self.prunes(&lb) {
            return;
        }
        if depth == self.problem.edges.len() {
            self.record(lb);
            return;
        }
        let (tail, head) = self.problem.edges[depth];
        let len = self.problem.lengths[depth].clone();
        let b = self.problem.bound;
        for value in -b..=b {
            let cost = edge_cost.clone() + len.times(value.unsigned_abs());
            if self.prunes(&cost) {
                if value > 0 {
                    break;
                }
                continue;
            }
            self.s[depth] = value;
            self.d[head] -= value;
            self.d[tail] += value;
            self.descend(depth + 1, cost);
            self.d[head] += value;
            self.d[tail] -= value;
        }
        self.s[depth] = 0;
    }

    fn record(&mut self, cost: W) {
        let (r, q) = self
            .d
            .iter()
            .map(|&d| {
                vertex_choice(d, self.problem.modulus, self.problem.bound)
                    .expect("closed vertices are feasible")
            })
            .unzip();
        self.best = Some(Solution {
            cost,
            s: self.s.clone(),
            r,
            q,
            nodes: 0,
        });
    }
}

pub(crate) fn solve<W: Weight>(problem: &Problem<'_, W>) -> Option<Solution<W>> {
    let mut search = Search::new(problem);
    search.descend(0, W::zero());
    let nodes = search.nodes;
    search.best.map(|mut s| {
        s.nodes = nodes;
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_choices() {
        assert_eq!(vertex_choice(3, None, 3), Some((3, 0)));
        assert_eq!(vertex_choice(4, None, 3), None);
        assert_eq!(vertex_choice(5, Some(3), 4), Some((-1, 2)));
        // even p: the residue p/2 wins over −p/2 (smaller Q)
        assert_eq!(vertex_choice(2, Some(4), 4), Some((2, 0)));
        assert_eq!(vertex_choice(-2, Some(4), 4), Some((2, -1)));
        // Q is clamped by the bound
        assert_eq!(vertex_choice(9, Some(2), 2), None);
        assert_eq!(vertex_choice(9, Some(3), 3), Some((0, 3)));
    }

    /// Plain enumeration of every S in [−B, B]^m.
    fn brute(problem: &Problem<'_, f64>) -> f64 {
        let m = problem.edges.len();
        let b = problem.bound;
        let mut best = f64::INFINITY;
        let width = (2 * b + 1) as usize;
        for code in 0..width.pow(m as u32) {
            let mut d = problem.target.clone();
            let mut c = 0.0;
            let mut x = code;
            for (e, &(t, h)) in problem.edges.iter().enumerate() {
                let s = (x % width) as i64 - b;
                x /= width;
                d[h] -= s;
                d[t] += s;
                c += problem.lengths[e] * s.abs() as f64;
            }
            let mut ok = true;
            for &dv in &d {
                match vertex_choice(dv, problem.modulus, b) {
                    Some((r, _)) => c += r.abs() as f64,
                    None => ok = false,
                }
            }
            if ok && c < best {
                best = c;
            }
        }
        best
    }

    #[test]
    fn matches_plain_enumeration() {
        let edges = [(0, 1), (1, 2), (0, 2), (2, 3)];
        let lengths = vec![0.5, 1.5, 0.75, 3.0];
        for (target, modulus) in [
            (vec![1, -1, 0, 0], None),
            (vec![2, 0, -1, -1], None),
            (vec![1, 1, 1, 0], Some(3)),
            (vec![2, -1, 0, 1], Some(2)),
            (vec![0, 0, 0, 3], Some(4)),
        ] {
            let problem = Problem {
                target,
                edges: &edges,
                lengths: lengths.clone(),
                unit: 1.0,
                modulus,
                bound: 3,
            };
            let sol = solve(&problem).unwrap();
            assert_eq!(sol.cost, brute(&problem));
        }
    }
}
