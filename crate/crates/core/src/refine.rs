// SPDX-License-Identifier: Apache-2.0

//! Puts arbitrary rational segments into shared-complex form: coincident
//! points are merged and collinear overlaps are split at every breakpoint.
//! Transversal crossings are left alone; they do not affect boundaries.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::chain::{Degree, IntegerChain};
use crate::complex::{GeometricComplex, Point};
use crate::error::{Error, Result};

/// Output of [`refine_overlaps`].
#[derive(Debug, Clone)]
pub struct Refinement {
    pub complex: GeometricComplex,
    /// Input point index to output vertex index.
    pub vertex_map: Vec<usize>,
    /// Each input segment as a signed sum of output edges, in traversal order.
    pub segment_map: Vec<Vec<(usize, i64)>>,
}

impl Refinement {
    /// Pushes a chain given by coefficients on the input segments onto the
    /// refined complex.
    pub fn remap_edges(
        &self,
        complex: Arc<GeometricComplex>,
        coeffs: &[(usize, i64)],
    ) -> Result<IntegerChain> {
        let mut out = Vec::new();
        for &(segment, theta) in coeffs {
            let pieces = self
                .segment_map
                .get(segment)
                .ok_or(Error::IndexOutOfRange {
                    what: "segment",
                    index: segment,
                    len: self.segment_map.len(),
                })?;
            out.extend(pieces.iter().map(|&(e, s)| (e, s * theta)));
        }
        IntegerChain::from_coeffs(complex, Degree::One, out)
    }

    pub fn remap_vertices(
        &self,
        complex: Arc<GeometricComplex>,
        coeffs: &[(usize, i64)],
    ) -> Result<IntegerChain> {
        let mut out = Vec::new();
        for &(point, theta) in coeffs {
            let v = *self.vertex_map.get(point).ok_or(Error::IndexOutOfRange {
                what: "point",
                index: point,
                len: self.vertex_map.len(),
            })?;
            out.push((v, theta));
        }
        IntegerChain::from_coeffs(complex, Degree::Zero, out)
    }
}

fn sub(a: &Point, b: &Point) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &Point, b: &Point) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn parallel(u: &Point, d: &Point) -> bool {
    (0..d.len()).all(|i| (i + 1..d.len()).all(|j| &u[i] * &d[j] == &u[j] * &d[i]))
}

struct Line {
    origin: Point,
    direction: Point,
    norm2: BigRational,
}

impl Line {
    fn contains(&self, x: &Point) -> bool {
        parallel(&sub(x, &self.origin), &self.direction)
    }

    fn param(&self, x: &Point) -> BigRational {
        dot(&sub(x, &self.origin), &self.direction) / &self.norm2
    }
}

pub fn refine_overlaps(points: Vec<Point>, segments: Vec<(usize, usize)>) -> Result<Refinement> {
    let dim = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::ParamOutOfRange("at least one point is required".into()))?;
    let mut vertices: Vec<Point> = Vec::new();
    let mut vertex_map = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                found: p.len(),
            });
        }
        let v = match vertices.iter().position(|q| q == p) {
            Some(v) => v,
            None => {
                vertices.push(p.clone());
                vertices.len() - 1
            }
        };
        vertex_map.push(v);
    }

    let mut ends = Vec::with_capacity(segments.len());
    for &(a, b) in &segments {
        for index in [a, b] {
            if index >= points.len() {
                return Err(Error::IndexOutOfRange {
                    what: "point",
                    index,
                    len: points.len(),
                });
            }
        }
        ends.push((vertex_map[a], vertex_map[b]));
    }

    // Group nondegenerate segments by supporting line.
    let mut lines: Vec<Line> = Vec::new();
    let mut line_of = vec![None; segments.len()];
    for (s, &(a, b)) in ends.iter().enumerate() {
        if a == b {
            continue;
        }
        let found = lines
            .iter()
            .position(|l| l.contains(&vertices[a]) && l.contains(&vertices[b]));
        line_of[s] = Some(found.unwrap_or_else(|| {
            let direction = sub(&vertices[b], &vertices[a]);
            let norm2 = dot(&direction, &direction);
            lines.push(Line {
                origin: vertices[a].clone(),
                direction,
                norm2,
            });
            lines.len() - 1
        }));
    }

    // Breakpoints per line: every segment endpoint lying on it, sorted by parameter.
    let endpoint_vertices: Vec<usize> = {
        let mut vs: Vec<usize> = ends.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    let breakpoints: Vec<Vec<(BigRational, usize)>> = lines
        .iter()
        .map(|line| {
            let mut bps: Vec<(BigRational, usize)> = endpoint_vertices
                .iter()
                .filter(|&&v| line.contains(&vertices[v]))
                .map(|&v| (line.param(&vertices[v]), v))
                .collect();
            bps.sort();
            bps
        })
        .collect();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut piece_edge: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut segment_map = Vec::with_capacity(segments.len());
    for (s, &(a, b)) in ends.iter().enumerate() {
        let Some(l) = line_of[s] else {
            segment_map.push(Vec::new());
            continue;
        };
        let bps = &breakpoints[l];
        let ia = bps
            .iter()
            .position(|&(_, v)| v == a)
            .expect("endpoint is a breakpoint");
        let ib = bps
            .iter()
            .position(|&(_, v)| v == b)
            .expect("endpoint is a breakpoint");
        let steps: Vec<usize> = if ia < ib {
            (ia..ib).collect()
        } else {
            (ib..ia).rev().collect()
        };
        let forward = ia < ib;
        let mut pieces = Vec::with_capacity(steps.len());
        for k in steps {
            let edge = *piece_edge.entry((l, k)).or_insert_with(|| {
                let (lo, hi) = (bps[k].1, bps[k + 1].1);
                edges.push(if forward { (lo, hi) } else { (hi, lo) });
                edges.len() - 1
            });
            let (tail, _) = edges[edge];
            let agrees = (tail == bps[k].1) == forward;
            pieces.push((edge, if agrees { 1 } else { -1 }));
        }
        segment_map.push(pieces);
    }

    let complex = GeometricComplex::new(dim, vertices, edges)?;
    Ok(Refinement {
        complex,
        vertex_map,
        segment_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn line_points(xs: &[i64]) -> Vec<Point> {
        xs.iter().map(|&x| vec![int(x)]).collect()
    }

    #[test]
    fn collinear_split() {
        let r = refine_overlaps(line_points(&[0, 2, 1, 3]), vec![(0, 1), (2, 3)]).unwrap();
        let k = &r.complex;
        let coords: Vec<(i64, i64)> = k
            .edges()
            .iter()
            .map(|&(t, h)| {
                let c = |v: usize| k.vertex(v)[0].to_integer().try_into().unwrap();
                (c(t), c(h))
            })
            .collect();
        assert_eq!(coords, vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(
            r.segment_map,
            vec![vec![(0, 1), (1, 1)], vec![(1, 1), (2, 1)]]
        );
    }

    #[test]
    fn disjoint_is_identity() {
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(2)],
        ];
        let r = refine_overlaps(pts, vec![(0, 1), (3, 2)]).unwrap();
        assert_eq!(r.complex.edges(), &[(0, 1), (3, 2)]);
        assert_eq!(r.segment_map, vec![vec![(0, 1)], vec![(1, 1)]]);
    }

    #[test]
    fn reversed_overlap_gets_negative_sign() {
        // [0,2] and [2,1] (reversed)
        let r = refine_overlaps(line_points(&[0, 2, 1]), vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(r.complex.num_edges(), 2);
        // Oracle: edge 1 runs 1 -> 2 as the first segment does, so [2,1] is its negative.
        let (t, h) = r.complex.edge(1);
        assert_eq!(
            (
                r.complex.vertex(t)[0].clone(),
                r.complex.vertex(h)[0].clone()
            ),
            (int(1), int(2))
        );
        assert_eq!(r.segment_map[1], vec![(1, -1)]);
    }

    #[test]
    fn coincident_points_merge_and_degenerate_segments_vanish() {
        let r = refine_overlaps(line_points(&[0, 1, 1]), vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(r.vertex_map, vec![0, 1, 1]);
        assert!(r.segment_map[1].is_empty());
        assert_eq!(r.segment_map[2], vec![(0, 1)]);
    }

    proptest! {
        // Segments on three lines through the plane with half-integer
        // parameters. Every single segment keeps its boundary and mass; sums
        // keep their boundary and can only lose mass to cancellation.
        #[test]
        fn remap_preserves_boundary_and_mass(
            raw in proptest::collection::vec((0usize..3, -4i64..=4, -4i64..=4, -6i64..=6), 1..7)
        ) {
            let dirs = [(1i64, 0i64), (1, 1), (2, 1)];
            let mut points = Vec::new();
            let mut segments = Vec::new();
            for (i, &(line, a, b, _)) in raw.iter().enumerate() {
                let (dx, dy) = dirs[line];
                let pt = |t: i64| {
                    let t = BigRational::new(t.into(), 2.into());
                    vec![&t * int(dx), &t * int(dy) + int(line as i64)]
                };
                points.push(pt(a));
                points.push(pt(b));
                segments.push((2 * i, 2 * i + 1));
            }
            let r = refine_overlaps(points, segments.clone()).unwrap();
            let k = Arc::new(r.complex.clone());
            let seg_len = |i: usize| {
                let (line, a, b, _) = raw[i];
                let (dx, dy) = dirs[line];
                ((dx * dx + dy * dy) as f64).sqrt() * (a - b).abs() as f64 / 2.0
            };
            let mut all = Vec::new();
            let mut atoms = Vec::new();
            let mut input_mass = 0.0;
            for (i, &(a, b)) in segments.iter().enumerate() {
                let theta = raw[i].3;
                let single = r.remap_edges(k.clone(), &[(i, theta)]).unwrap();
                let expected = r.remap_vertices(k.clone(), &[(b, theta), (a, -theta)]).unwrap();
                prop_assert_eq!(single.boundary().unwrap(), expected);
                let m = seg_len(i) * theta.abs() as f64;
                prop_assert!((single.mass() - m).abs() <= 1e-12 * m.max(1.0));
                all.push((i, theta));
                atoms.push((b, theta));
                atoms.push((a, -theta));
                input_mass += m;
            }
            let chain = r.remap_edges(k.clone(), &all).unwrap();
            prop_assert_eq!(chain.boundary().unwrap(), r.remap_vertices(k.clone(), &atoms).unwrap());
            prop_assert!(chain.mass() <= input_mass * (1.0 + 1e-12) + 1e-12);
        }
    }
}
