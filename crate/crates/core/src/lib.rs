// SPDX-License-Identifier: Apache-2.0

//! Integral polyhedral 1-chains and their classes modulo p.
//!
//! * [`complex`], [`chain`], [`refine`]: embedded 1-complexes with exact
//!   rational vertices, sparse integer chains, boundary, mass, support.
//! * [`modp`]: select and positive representatives, p-mass, congruence with
//!   certificates.
//! * [`repair`]: a representative whose mass and boundary mass are both
//!   within a factor p−1 of the p-masses, with a checkable certificate.
//! * [`grid`]: codimension-0 chains on cube grids and the boundary-mass
//!   inequality for select representatives.
//! * [`flatnorm`]: exact small-instance oracle for the flat norm (mod p),
//!   its linear relaxation, zero-sum test and cones.

pub mod chain;
pub mod complex;
pub mod error;
pub mod flatnorm;
pub mod generate;
pub mod grid;
pub mod io;
pub mod modp;
pub mod rational;
pub mod refine;
pub mod repair;

pub use chain::{boundary, mass, support, Degree, IntegerChain};
pub use complex::{build_complex, EdgeLength, GeometricComplex, Point};
pub use error::{Error, Result};
pub use flatnorm::{
    cone, flat_norm, flat_norm_mod_p, flat_norm_relaxation, zero_sum_check, Cone,
    FlatNormDecomposition, SearchOptions,
};
pub use grid::{
    check_prop_sn, grid_boundary_mass, grid_pmass_boundary, grid_select, GridChain, SnReport,
};
pub use modp::{
    equiv_mod_p, pmass, positive_representative, select_representative, CongruenceCertificate,
    Modulus,
};
pub use refine::{refine_overlaps, Refinement};
pub use repair::{
    extract_chain, flip_along_path, repair, verify_repair, RepairCertificate, SegmentPath, Step,
    TraceStep, VerifyReport,
};
