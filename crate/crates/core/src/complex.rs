// SPDX-License-Identifier: Apache-2.0

//! Embedded 1-complexes: vertices at exact rational points, oriented straight
//! segments between them.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{exact_sqrt, to_f64};

pub type Point = Vec<BigRational>;

/// Length of one edge. The squared length is exact; the length itself is
/// exact only when the squared length is a rational square.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLength {
    pub squared: BigRational,
    pub exact: Option<BigRational>,
    pub approx: f64,
}

impl EdgeLength {
    fn between(a: &Point, b: &Point) -> Self {
        let squared = a
            .iter()
            .zip(b)
            .map(|(x, y)| {
                let d = x - y;
                &d * &d
            })
            .fold(BigRational::zero(), |acc, t| acc + t);
        let exact = exact_sqrt(&squared);
        let approx = match &exact {
            Some(len) => to_f64(len),
            None => to_f64(&squared).sqrt(),
        };
        EdgeLength {
            squared,
            exact,
            approx,
        }
    }
}

/// An immutable embedded multigraph. Edge order is the construction order
/// and every edge's canonical orientation is the stored `(tail, head)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricComplex {
    ambient_dim: usize,
    vertices: Vec<Point>,
    edges: Vec<(usize, usize)>,
    lengths: Vec<EdgeLength>,
}

impl GeometricComplex {
    /// Builds a complex allowing parallel edges.
    pub fn new(
        ambient_dim: usize,
        vertices: Vec<Point>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        Self::with_parallel(ambient_dim, vertices, edges, true)
    }

    pub fn with_parallel(
        ambient_dim: usize,
        vertices: Vec<Point>,
        edges: Vec<(usize, usize)>,
        allow_parallel: bool,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::ParamOutOfRange(
                "ambient dimension must be positive".into(),
            ));
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        let mut lengths = Vec::with_capacity(edges.len());
        for (segment, &(tail, head)) in edges.iter().enumerate() {
            for index in [tail, head] {
                if index >= vertices.len() {
                    return Err(Error::IndexOutOfRange {
                        what: "vertex",
                        index,
                        len: vertices.len(),
                    });
                }
            }
            if tail == head || vertices[tail] == vertices[head] {
                return Err(Error::DegenerateSegment {
                    segment,
                    tail,
                    head,
                });
            }
            lengths.push(EdgeLength::between(&vertices[tail], &vertices[head]));
        }
        if !allow_parallel {
            for second in 0..edges.len() {
                for first in 0..second {
                    if same_carrier(&vertices, edges[first], edges[second]) {
                        return Err(Error::ParallelEdge { first, second });
                    }
                }
            }
        }
        Ok(GeometricComplex {
            ambient_dim,
            vertices,
            edges,
            lengths,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Point {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(tail, head)` of edge `e`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn length(&self, e: usize) -> f64 {
        self.lengths[e].approx
    }

    pub fn edge_length(&self, e: usize) -> &EdgeLength {
        &self.lengths[e]
    }

    pub fn exact_length(&self, e: usize) -> Option<&BigRational> {
        self.lengths[e].exact.as_ref()
    }

    /// All edge lengths as exact rationals, or the first edge whose length is irrational.
    pub fn exact_lengths(&self) -> Result<Vec<BigRational>> {
        self.lengths
            .iter()
            .enumerate()
            .map(|(e, l)| l.exact.clone().ok_or(Error::IrrationalLength(e)))
            .collect()
    }

    pub fn find_vertex(&self, point: &[BigRational]) -> Option<usize> {
        self.vertices.iter().position(|v| v.as_slice() == point)
    }

    /// A new complex with `extra_vertices` and `extra_edges` appended. Existing
    /// indices are unchanged, so chains on `self` remain valid on the result.
    pub fn extended(
        &self,
        extra_vertices: Vec<Point>,
        extra_edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        vertices.extend(extra_vertices);
        let mut edges = self.edges.clone();
        edges.extend(extra_edges);
        GeometricComplex::new(self.ambient_dim, vertices, edges)
    }

    /// True when `other` was obtained from `self` by appending cells.
    pub fn is_prefix_of(&self, other: &GeometricComplex) -> bool {
        self.ambient_dim == other.ambient_dim
            && other.vertices.starts_with(&self.vertices)
            && other.edges.starts_with(&self.edges)
    }
}

fn same_carrier(vertices: &[Point], a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (&vertices[a.0], &vertices[a.1]);
    let (b0, b1) = (&vertices[b.0], &vertices[b.1]);
    (a0 == b0 && a1 == b1) || (a0 == b1 && a1 == b0)
}

/// Builds a complex from points and index pairs, inferring the ambient
/// dimension from the first point.
pub fn build_complex(
    points: Vec<Point>,
    segments: Vec<(usize, usize)>,
) -> Result<GeometricComplex> {
    let dim = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::ParamOutOfRange("at least one point is required".into()))?;
    GeometricComplex::new(dim, points, segments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pt(xs: &[i64]) -> Point {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn unit_segment() {
        let k = build_complex(vec![pt(&[0]), pt(&[1])], vec![(0, 1)]).unwrap();
        assert_eq!(k.num_edges(), 1);
        assert_eq!(k.length(0), 1.0);
        assert_eq!(k.exact_length(0), Some(&int(1)));
    }

    #[test]
    fn three_four_five() {
        let k = build_complex(vec![pt(&[0, 0]), pt(&[3, 4])], vec![(0, 1)]).unwrap();
        assert_eq!(k.length(0), 5.0);
    }

    #[test]
    fn irrational_length_within_an_ulp() {
        let k = build_complex(vec![pt(&[0, 0]), pt(&[1, 1])], vec![(0, 1)]).unwrap();
        assert!(k.exact_length(0).is_none());
        let l = k.length(0);
        assert!((l * l - 2.0).abs() <= 4.0 * f64::EPSILON);
        assert_eq!(k.exact_lengths(), Err(Error::IrrationalLength(0)));
    }

    #[test]
    fn rejects_loops_and_coincident_points() {
        let err = build_complex(vec![pt(&[0]), pt(&[1])], vec![(0, 0)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSegment { .. }));
        let err = build_complex(vec![pt(&[2]), pt(&[2])], vec![(0, 1)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSegment { .. }));
    }

    #[test]
    fn rejects_ragged_points_and_bad_indices() {
        let err = build_complex(vec![pt(&[0]), pt(&[1, 2])], vec![]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { index: 1, .. }));
        let err = build_complex(vec![pt(&[0])], vec![(0, 3)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 3, .. }));
    }

    #[test]
    fn parallel_edges_are_optional() {
        let pts = vec![pt(&[0]), pt(&[1])];
        assert!(GeometricComplex::new(1, pts.clone(), vec![(0, 1), (1, 0)]).is_ok());
        let err = GeometricComplex::with_parallel(1, pts, vec![(0, 1), (1, 0)], false).unwrap_err();
        assert_eq!(
            err,
            Error::ParallelEdge {
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn extension_keeps_prefix() {
        let k = build_complex(vec![pt(&[0]), pt(&[1])], vec![(0, 1)]).unwrap();
        let k2 = k.extended(vec![pt(&[5])], vec![(1, 2)]).unwrap();
        assert!(k.is_prefix_of(&k2));
        assert!(!k2.is_prefix_of(&k));
    }
}
