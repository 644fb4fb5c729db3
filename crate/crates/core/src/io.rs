// SPDX-License-Identifier: Apache-2.0

//! JSON documents exchanged with the command line: complexes with named
//! chains, grid chains, repair certificates and flat-norm results.
//!
//! Every document carries `"version": 1`; unknown fields are rejected.
//! Coordinates are JSON integers or `"p/q"` strings, never floats.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{Degree, IntegerChain};
use crate::complex::GeometricComplex;
use crate::error::{Error, Result};
use crate::flatnorm::FlatNormDecomposition;
use crate::grid::GridChain;
use crate::modp::Modulus;
use crate::rational::{format_rational, int, parse_rational};
use crate::repair::{RepairCertificate, TraceStep};

pub const FORMAT_VERSION: u32 = 1;

fn current_version() -> u32 {
    FORMAT_VERSION
}

fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported document version {found} (expected {FORMAT_VERSION})"
        )));
    }
    Ok(())
}

/// An exact coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coord(pub BigRational);

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct CoordVisitor;

        impl Visitor<'_> for CoordVisitor {
            type Value = Coord;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Coord, E> {
                Ok(Coord(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Coord, E> {
                let v = i64::try_from(v).map_err(E::custom)?;
                Ok(Coord(int(v)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Coord, E> {
                Err(E::custom(format!(
                    "float coordinate {v} rejected; write it as \"p/q\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Coord, E> {
                parse_rational(v).map(Coord).map_err(E::custom)
            }
        }

        d.deserialize_any(CoordVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainEntry {
    pub degree: u8,
    pub coeffs: BTreeMap<usize, i64>,
}

impl ChainEntry {
    pub fn from_chain(chain: &IntegerChain) -> Self {
        ChainEntry {
            degree: chain.degree().as_u8(),
            coeffs: chain.coeffs().clone(),
        }
    }

    pub fn to_chain(&self, complex: Arc<GeometricComplex>) -> Result<IntegerChain> {
        IntegerChain::from_coeffs(
            complex,
            Degree::from_u8(self.degree)?,
            self.coeffs.iter().map(|(&c, &v)| (c, v)),
        )
    }
}

/// A complex together with named chains on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    #[serde(default = "current_version")]
    pub version: u32,
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<Coord>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub chains: BTreeMap<String, ChainEntry>,
}

impl ChainDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ChainDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_version(doc.version)?;
        Ok(doc)
    }

    pub fn from_complex(complex: &GeometricComplex) -> Self {
        ChainDocument {
            version: FORMAT_VERSION,
            ambient_dim: complex.ambient_dim(),
            vertices: complex
                .vertices()
                .iter()
                .map(|v| v.iter().cloned().map(Coord).collect())
                .collect(),
            edges: complex.edges().iter().map(|&(t, h)| [t, h]).collect(),
            chains: BTreeMap::new(),
        }
    }

    pub fn with_chain(mut self, name: &str, chain: &IntegerChain) -> Self {
        self.chains
            .insert(name.to_string(), ChainEntry::from_chain(chain));
        self
    }

    pub fn complex(&self) -> Result<GeometricComplex> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|c| c.0.clone()).collect())
            .collect();
        let edges = self.edges.iter().map(|&[t, h]| (t, h)).collect();
        GeometricComplex::new(self.ambient_dim, vertices, edges)
    }

    /// The chain called `name`, or the only chain when `name` is None.
    pub fn chain(
        &self,
        name: Option<&str>,
        complex: Arc<GeometricComplex>,
    ) -> Result<IntegerChain> {
        let entry = match name {
            Some(name) => self
                .chains
                .get(name)
                .ok_or_else(|| Error::Parse(format!("no chain named {name:?}")))?,
            None => {
                let mut it = self.chains.values();
                match (it.next(), it.next()) {
                    (Some(entry), None) => entry,
                    (None, _) => return Err(Error::Parse("document holds no chains".into())),
                    _ => {
                        return Err(Error::Parse(format!(
                            "document holds {} chains; pick one by name",
                            self.chains.len()
                        )))
                    }
                }
            }
        };
        entry.to_chain(complex)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pretty JSON with a trailing newline. Maps are ordered, so output is
/// byte-stable.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDocument {
    #[serde(default = "current_version")]
    pub version: u32,
    pub dims: Vec<usize>,
    /// Row-major, last axis fastest.
    pub theta: Vec<i64>,
    #[serde(default = "unit_edge")]
    pub cell_edge: Coord,
}

fn unit_edge() -> Coord {
    Coord(int(1))
}

impl GridDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: GridDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_version(doc.version)?;
        Ok(doc)
    }

    pub fn from_grid(grid: &GridChain) -> Self {
        GridDocument {
            version: FORMAT_VERSION,
            dims: grid.dims().to_vec(),
            theta: grid.theta().to_vec(),
            cell_edge: Coord(grid.cell_edge().clone()),
        }
    }

    pub fn grid(&self) -> Result<GridChain> {
        GridChain::with_cell_edge(
            self.dims.clone(),
            self.theta.clone(),
            self.cell_edge.0.clone(),
        )
    }
}

/// Reads grid values given as a flat row-major array, a nested array, or a
/// full [`GridDocument`].
pub fn parse_grid_values(text: &str, dims: Option<&[usize]>) -> Result<GridChain> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.is_object() {
        let grid = GridDocument::parse(text)?.grid()?;
        if let Some(dims) = dims {
            if dims != grid.dims() {
                return Err(Error::Parse(format!(
                    "document dims {:?} differ from {dims:?}",
                    grid.dims()
                )));
            }
        }
        return Ok(grid);
    }
    fn flatten(
        v: &serde_json::Value,
        out: &mut Vec<i64>,
        shape: &mut Vec<usize>,
        depth: usize,
    ) -> Result<()> {
        match v {
            serde_json::Value::Array(items) => {
                if shape.len() == depth {
                    shape.push(items.len());
                } else if shape[depth] != items.len() {
                    return Err(Error::Parse("ragged nested array".into()));
                }
                items
                    .iter()
                    .try_for_each(|item| flatten(item, out, shape, depth + 1))
            }
            serde_json::Value::Number(n) => {
                out.push(
                    n.as_i64()
                        .ok_or_else(|| Error::Parse(format!("{n} is not an integer")))?,
                );
                Ok(())
            }
            other => Err(Error::Parse(format!("unexpected value {other}"))),
        }
    }
    let mut theta = Vec::new();
    let mut shape = Vec::new();
    flatten(&value, &mut theta, &mut shape, 0)?;
    let dims = match dims {
        Some(d) => d.to_vec(),
        None if shape.len() > 1 => shape,
        None => {
            return Err(Error::Parse(
                "grid dims are required for a flat array".into(),
            ))
        }
    };
    GridChain::new(dims, theta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    #[serde(default = "current_version")]
    pub version: u32,
    pub p: i64,
    pub input: ChainEntry,
    pub output: ChainEntry,
    /// `output − input = p · quotient`.
    pub quotient: ChainEntry,
    pub iterations: usize,
    pub trace: Vec<TraceStep>,
    /// M(∂P̃), integer.
    pub boundary_mass: u64,
    /// (p−1)·Mᵖ(∂P), integer.
    pub boundary_mass_bound: u64,
}

impl CertificateDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: CertificateDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_version(doc.version)?;
        Ok(doc)
    }

    pub fn from_certificate(cert: &RepairCertificate) -> Result<Self> {
        let p = cert.p;
        Ok(CertificateDocument {
            version: FORMAT_VERSION,
            p: p.get(),
            input: ChainEntry::from_chain(&cert.input),
            output: ChainEntry::from_chain(&cert.output),
            quotient: ChainEntry::from_chain(&cert.quotient),
            iterations: cert.trace.len(),
            trace: cert.trace.clone(),
            boundary_mass: cert.output.boundary()?.integer_mass(),
            boundary_mass_bound: (p.get() as u64 - 1)
                * crate::modp::integer_pmass(&cert.input.boundary()?, p),
        })
    }

    pub fn certificate(&self, complex: Arc<GeometricComplex>) -> Result<RepairCertificate> {
        Ok(RepairCertificate {
            p: Modulus::new(self.p)?,
            input: self.input.to_chain(complex.clone())?,
            output: self.output.to_chain(complex.clone())?,
            quotient: self.quotient.to_chain(complex)?,
            trace: self.trace.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatNormDocument {
    pub version: u32,
    pub degree: u8,
    pub p: Option<i64>,
    pub bound: i64,
    pub value: f64,
    /// `"p/q"` when every edge length is rational.
    pub value_exact: Option<String>,
    pub saturated: bool,
    pub r: ChainEntry,
    pub s: Option<ChainEntry>,
    pub q: ChainEntry,
    pub nodes: u64,
}

impl FlatNormDocument {
    pub fn from_decomposition(t: &IntegerChain, d: &FlatNormDecomposition) -> Self {
        FlatNormDocument {
            version: FORMAT_VERSION,
            degree: t.degree().as_u8(),
            p: d.modulus,
            bound: d.bound_used,
            value: d.value,
            value_exact: d.exact_value.as_ref().map(format_rational),
            saturated: d.saturated,
            r: ChainEntry::from_chain(&d.r),
            s: d.s.as_ref().map(ChainEntry::from_chain),
            q: ChainEntry::from_chain(&d.q),
            nodes: d.nodes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
        "ambient_dim": 2,
        "vertices": [[0, 0], ["3", "1/2"], [-1, "4"]],
        "edges": [[0, 1], [1, 2]],
        "chains": {"P": {"degree": 1, "coeffs": {"0": 2, "1": -3}}}
    }"#;

    #[test]
    fn parses_a_chain_document() {
        let doc = ChainDocument::parse(DOC).unwrap();
        let k = Arc::new(doc.complex().unwrap());
        assert_eq!(k.vertex(1)[1], BigRational::new(1.into(), 2.into()));
        let p = doc.chain(None, k.clone()).unwrap();
        assert_eq!(p.coeff(1), -3);
        let back = ChainDocument::from_complex(&k).with_chain("P", &p);
        assert_eq!(ChainDocument::parse(&back.to_json()).unwrap(), back);
    }

    #[test]
    fn rejects_floats_unknown_fields_and_versions() {
        let floaty = DOC.replace("[0, 0]", "[0.5, 0]");
        assert!(ChainDocument::parse(&floaty)
            .unwrap_err()
            .to_string()
            .contains("float"));
        let extra = DOC.replace("\"ambient_dim\"", "\"colour\": 1, \"ambient_dim\"");
        assert!(ChainDocument::parse(&extra).is_err());
        let v2 = DOC.replace("\"ambient_dim\"", "\"version\": 2, \"ambient_dim\"");
        assert!(ChainDocument::parse(&v2).is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = ChainDocument::parse("{\n  \"ambient_dim\": 2,\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn grid_values_in_several_shapes() {
        assert_eq!(
            parse_grid_values("[1,2,3,4]", Some(&[2, 2]))
                .unwrap()
                .theta(),
            &[1, 2, 3, 4]
        );
        assert_eq!(
            parse_grid_values("[[1,2],[3,4]]", None).unwrap().dims(),
            &[2, 2]
        );
        assert!(parse_grid_values("[[1,2],[3]]", None).is_err());
        let doc = r#"{"version": 1, "dims": [3], "theta": [1, 2, 1]}"#;
        assert_eq!(
            parse_grid_values(doc, Some(&[3])).unwrap().theta(),
            &[1, 2, 1]
        );
        assert!(parse_grid_values(doc, Some(&[1, 3])).is_err());
    }
}
