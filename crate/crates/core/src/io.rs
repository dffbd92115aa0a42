//! JSON file formats. Rationals are written as strings `"p/q"` or `"p"`;
//! integers given as JSON numbers are accepted on input.

use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::colorful::{ColorfulConfiguration, ColorfulSimplex};
use crate::complexes::SimplicialComplexGF2;
use crate::error::{Error, Result};
use crate::flips::{FlipCertificate, FlipMode, FlipPath};
use crate::gale::PointConfiguration;
use crate::kernel::{format_rat, parse_rat, QVec, Rat};
use crate::minkowski::SimplexV;
use crate::ptransform::HPolytope;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatText {
    Text(String),
    Int(i64),
}

impl RatText {
    fn value(&self) -> Result<Rat> {
        match self {
            RatText::Text(s) => parse_rat(s),
            RatText::Int(n) => Ok(crate::kernel::rat(*n)),
        }
    }
}

fn write_vec(v: &[Rat]) -> Vec<RatText> {
    v.iter().map(|x| RatText::Text(format_rat(x))).collect()
}

fn read_vec(v: &[RatText], dim: usize) -> Result<QVec> {
    if v.len() != dim {
        return Err(Error::InvalidInput(format!(
            "expected {dim} coordinates, got {}",
            v.len()
        )));
    }
    v.iter().map(RatText::value).collect()
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub dimension: usize,
    pub classes: Vec<Vec<Vec<RatText>>>,
}

impl ConfigFile {
    pub fn from_config(c: &ColorfulConfiguration) -> Self {
        Self {
            dimension: c.dim(),
            classes: c
                .classes()
                .iter()
                .map(|cl| cl.iter().map(|p| write_vec(p)).collect())
                .collect(),
        }
    }

    pub fn to_config(&self) -> Result<ColorfulConfiguration> {
        let classes = self
            .classes
            .iter()
            .map(|cl| cl.iter().map(|p| read_vec(p, self.dimension)).collect())
            .collect::<Result<_>>()?;
        ColorfulConfiguration::new(self.dimension, classes)
    }
}

pub fn read_config(s: &str) -> Result<ColorfulConfiguration> {
    from_json::<ConfigFile>(s)?.to_config()
}

pub fn write_config(c: &ColorfulConfiguration) -> String {
    to_json(&ConfigFile::from_config(c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

impl ComplexFile {
    pub fn to_complex(&self) -> Result<SimplicialComplexGF2> {
        SimplicialComplexGF2::from_facets(self.vertices, &self.facets)
    }

    pub fn from_complex(k: &SimplicialComplexGF2) -> Self {
        Self {
            vertices: k.vertex_count(),
            facets: k.maximal_faces(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfigFile {
    pub dimension: usize,
    pub points: Vec<Vec<RatText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
}

impl PointConfigFile {
    pub fn from_points(a: &PointConfiguration) -> Self {
        Self {
            dimension: a.dim(),
            points: a.points().iter().map(|p| write_vec(p)).collect(),
            classes: a.partition().map(<[_]>::to_vec),
        }
    }

    pub fn to_points(&self) -> Result<PointConfiguration> {
        let points = self
            .points
            .iter()
            .map(|p| read_vec(p, self.dimension))
            .collect::<Result<_>>()?;
        PointConfiguration::new(self.dimension, points, self.classes.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicesFile {
    pub dimension: usize,
    pub simplices: Vec<Vec<Vec<RatText>>>,
}

impl SimplicesFile {
    pub fn from_simplices(s: &[SimplexV]) -> Self {
        Self {
            dimension: s.first().map_or(0, SimplexV::ambient_dim),
            simplices: s
                .iter()
                .map(|x| x.vertices().iter().map(|p| write_vec(p)).collect())
                .collect(),
        }
    }

    pub fn to_simplices(&self) -> Result<Vec<SimplexV>> {
        self.simplices
            .iter()
            .map(|s| {
                let v = s.iter().map(|p| read_vec(p, self.dimension)).collect::<Result<_>>()?;
                SimplexV::new(v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolytopeFile {
    pub dimension: usize,
    pub forms: Vec<Vec<RatText>>,
}

impl HPolytopeFile {
    pub fn from_polytope(p: &HPolytope) -> Self {
        Self {
            dimension: p.dim(),
            forms: p.forms().iter().map(|f| write_vec(f)).collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<HPolytope> {
        let forms = self
            .forms
            .iter()
            .map(|f| read_vec(f, self.dimension))
            .collect::<Result<_>>()?;
        HPolytope::new(self.dimension, forms)
    }
}

fn write_simplex(s: &ColorfulSimplex) -> Vec<[usize; 2]> {
    s.members().iter().map(|&(c, i)| [c, i]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipPathFile {
    pub start: ConfigFile,
    pub end: ConfigFile,
    pub ridge: Vec<[usize; 2]>,
    pub mode: FlipMode,
}

impl FlipPathFile {
    pub fn from_path(p: &FlipPath) -> Self {
        Self {
            start: ConfigFile::from_config(&p.start),
            end: ConfigFile::from_config(&p.end),
            ridge: write_simplex(&p.ridge),
            mode: p.mode,
        }
    }

    pub fn to_path(&self) -> Result<FlipPath> {
        Ok(FlipPath {
            start: self.start.to_config()?,
            end: self.end.to_config()?,
            ridge: ColorfulSimplex::new(self.ridge.iter().map(|&[c, i]| (c, i)).collect())?,
            mode: self.mode,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub valid: bool,
    pub endpoints_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_ok: Option<bool>,
    pub symmetric_difference: Vec<Vec<[usize; 2]>>,
    pub expected: Vec<Vec<[usize; 2]>>,
}

fn write_set(s: &BTreeSet<ColorfulSimplex>) -> Vec<Vec<[usize; 2]>> {
    s.iter().map(write_simplex).collect()
}

impl CertificateReport {
    pub fn from_certificate(c: &FlipCertificate) -> Self {
        Self {
            valid: c.valid,
            endpoints_ok: c.endpoints_ok,
            path_ok: c.path_ok,
            symmetric_difference: write_set(&c.symmetric_difference),
            expected: write_set(&c.expected),
        }
    }
}

/// Colorful simplices as `[[class, index], ...]` lists.
pub fn simplex_list(v: &[ColorfulSimplex]) -> Vec<Vec<[usize; 2]>> {
    v.iter().map(write_simplex).collect()
}

/// Vectors as lists of rational strings.
pub fn vector_list(v: &[QVec]) -> Vec<Vec<RatText>> {
    v.iter().map(|x| write_vec(x)).collect()
}
