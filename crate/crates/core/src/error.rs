// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("segment {segment} is degenerate: endpoints {tail} and {head} coincide")]
    DegenerateSegment {
        segment: usize,
        tail: usize,
        head: usize,
    },
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("edges {first} and {second} share the same carrier and parallel edges are disabled")]
    ParallelEdge { first: usize, second: usize },
    #[error("chains live on different complexes")]
    ComplexMismatch,
    #[error("expected a degree-{expected} chain, got degree {found}")]
    DegreeMismatch { expected: u8, found: u8 },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(i64),
    #[error("vertex {0} is not in the support of the boundary")]
    NotInBoundarySupport(usize),
    #[error("edge {0} has a zero coefficient")]
    MalformedChain(usize),
    #[error("edge {edge} has multiplicity {value} in traversal direction, outside 1..={max}")]
    CoefficientOutOfRange { edge: usize, value: i64, max: i64 },
    #[error("path is not a consecutive chain of segments at step {0}")]
    BrokenPath(usize),
    #[error("apex coincides with support vertex {0}")]
    ApexCollision(usize),
    #[error("edge {0} has an irrational length; exact arithmetic unavailable")]
    IrrationalLength(usize),
    #[error("instance too large for the exhaustive oracle: {0} (pass force to override)")]
    Guardrail(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
