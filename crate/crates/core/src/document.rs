//! JSON exchange format for paths. Angles are in degrees on the surface and
//! radians inside the library.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::path::{Configuration, DiscretePath, Params};
use crate::rewrite::RewriteTrace;
use crate::typing::{Arc, Bridge, PathStructure, TypeWord};

pub const DOCUMENT_VERSION: u32 = 1;

/// Either `n_sides` or `theta_degrees`, plus `ell`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sides: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_degrees: Option<f64>,
    pub ell: f64,
}

impl ParamsDoc {
    pub fn from_params(p: &Params) -> Self {
        let exact = Params::from_n_sides(p.n_sides, p.ell).map_or(false, |q| q.theta == p.theta);
        if exact {
            Self {
                n_sides: Some(p.n_sides),
                theta_degrees: None,
                ell: p.ell,
            }
        } else {
            Self {
                n_sides: None,
                theta_degrees: Some(p.theta.to_degrees()),
                ell: p.ell,
            }
        }
    }

    pub fn to_params(&self) -> Result<Params> {
        match (self.n_sides, self.theta_degrees) {
            (Some(n), None) => Params::from_n_sides(n, self.ell),
            (None, Some(t)) => Params::new(t.to_radians(), self.ell),
            _ => Err(Error::InvalidParams(
                "give exactly one of n_sides and theta_degrees".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub point: [f64; 2],
    pub heading_degrees: f64,
}

impl ConfigDoc {
    pub fn from_config(c: &Configuration) -> Self {
        Self {
            point: [c.point.x, c.point.y],
            heading_degrees: normalize_degrees(c.heading_angle().to_degrees()),
        }
    }

    pub fn to_config(&self) -> Result<Configuration> {
        let [x, y] = self.point;
        if !x.is_finite() || !y.is_finite() || !self.heading_degrees.is_finite() {
            return Err(Error::InvalidConfiguration("non-finite value".into()));
        }
        Ok(Configuration::from_angle(x, y, self.heading_degrees.to_radians()))
    }
}

fn normalize_degrees(d: f64) -> f64 {
    let r = d.rem_euclid(360.0);
    if r == 360.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureReport {
    #[serde(rename = "type")]
    pub type_word: TypeWord,
    pub arcs: Vec<Arc>,
    pub bridges: Vec<Bridge>,
}

impl From<PathStructure> for StructureReport {
    fn from(s: PathStructure) -> Self {
        Self {
            type_word: s.type_word,
            arcs: s.arcs,
            bridges: s.bridges,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDocument {
    pub version: u32,
    pub params: ParamsDoc,
    pub start: ConfigDoc,
    pub end: ConfigDoc,
    pub vertices: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<RewriteTrace>,
}

impl PathDocument {
    pub fn from_path(path: &DiscretePath, params: &Params) -> Self {
        Self {
            version: DOCUMENT_VERSION,
            params: ParamsDoc::from_params(params),
            start: ConfigDoc::from_config(&path.start),
            end: ConfigDoc::from_config(&path.end),
            vertices: path.vertices.iter().map(|v| [v.x, v.y]).collect(),
            structure: None,
            trace: None,
        }
    }

    pub fn params(&self) -> Result<Params> {
        self.params.to_params()
    }

    pub fn path(&self) -> Result<DiscretePath> {
        let vertices = self.vertices.iter().map(|&[x, y]| Vec2::new(x, y)).collect();
        DiscretePath::new(self.start.to_config()?, self.end.to_config()?, vertices)
    }

    /// Parses and normalizes headings into [0, 360).
    pub fn from_json(text: &str) -> Result<Self> {
        let mut doc: Self = parse_json(text)?;
        if doc.version != DOCUMENT_VERSION {
            return Err(Error::Precondition(format!(
                "unsupported document version {}",
                doc.version
            )));
        }
        doc.start.heading_degrees = normalize_degrees(doc.start.heading_degrees);
        doc.end.heading_degrees = normalize_degrees(doc.end.heading_degrees);
        doc.params()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// Deserializes JSON, reporting syntax and schema errors with their position.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
