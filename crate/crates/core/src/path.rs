//! Discrete path model and the feasibility validator.
//!
//! A path is checked on its *augmented* vertex sequence: a pre-edge of length
//! `ell` is attached before the start point along the start heading and a
//! post-edge after the end point along the end heading. Every path vertex then
//! has a well-defined turn, and every path edge has two neighbours.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{turn_angle, Point2, Vec2, TOL_UNIT};

/// Angular tolerance for turn comparisons (radians).
pub const TOL_ANG: f64 = 1e-9;

/// The turn bound `theta` and the length scale `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub theta: f64,
    pub ell: f64,
    pub n_sides: u32,
}

impl Params {
    /// `theta = 2π / n_sides`.
    pub fn from_n_sides(n_sides: u32, ell: f64) -> Result<Self> {
        if n_sides < 4 {
            return Err(Error::InvalidParams(format!(
                "n_sides must be at least 4, got {n_sides}"
            )));
        }
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::InvalidParams(format!("ell must be positive, got {ell}")));
        }
        Ok(Self {
            theta: TAU / n_sides as f64,
            ell,
            n_sides,
        })
    }

    /// Accepts `theta` only when it divides a full turn.
    pub fn new(theta: f64, ell: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= PI / 2.0 + 1e-12) {
            return Err(Error::InvalidParams(format!(
                "theta must lie in (0, π/2], got {theta}"
            )));
        }
        let n = TAU / theta;
        let rounded = n.round();
        if (n - rounded).abs() > 1e-9 * n {
            return Err(Error::InvalidParams(format!(
                "theta = {theta} does not divide 2π"
            )));
        }
        Self::from_n_sides(rounded as u32, ell)
    }

    /// Unit-circle schedule: `theta = 2π/n`, `ell = 2 sin(π/n)`.
    pub fn unit_schedule(n_sides: u32) -> Result<Self> {
        Self::from_n_sides(n_sides, 2.0 * (PI / n_sides as f64).sin())
    }

    pub fn tol_len(&self) -> f64 {
        1e-9 * self.ell
    }

    pub fn tol_dedup(&self) -> f64 {
        1e-12 * self.ell
    }

    /// Circumradius of the regular `n_sides`-gon with side `ell`.
    pub fn circle_radius(&self) -> f64 {
        self.ell / (2.0 * (self.theta / 2.0).sin())
    }

    pub fn is_theta(&self, turn: f64) -> bool {
        (turn.abs() - self.theta).abs() <= TOL_ANG
    }
}

/// A point with a unit heading.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub point: Point2,
    pub heading: Vec2,
}

impl Configuration {
    pub fn new(point: Point2, heading: Vec2) -> Result<Self> {
        if !point.is_finite() || !heading.is_finite() {
            return Err(Error::InvalidConfiguration("non-finite coordinates".into()));
        }
        if (heading.norm() - 1.0).abs() > TOL_UNIT {
            return Err(Error::InvalidConfiguration(format!(
                "heading norm {} is not 1",
                heading.norm()
            )));
        }
        Ok(Self { point, heading })
    }

    pub fn from_angle(x: f64, y: f64, heading: f64) -> Self {
        Self {
            point: Vec2::new(x, y),
            heading: Vec2::from_angle(heading),
        }
    }

    pub fn heading_angle(&self) -> f64 {
        self.heading.angle()
    }

    /// Same point, opposite heading.
    pub fn reversed(&self) -> Self {
        Self {
            point: self.point,
            heading: -self.heading,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretePath {
    pub start: Configuration,
    pub end: Configuration,
    pub vertices: Vec<Point2>,
    /// Set once bridge endpoints have been inserted as vertices.
    #[serde(default)]
    pub canonical: bool,
}

impl DiscretePath {
    /// Builds a path; the first and last vertex must coincide with the
    /// configuration points (they are snapped onto them exactly).
    pub fn new(start: Configuration, end: Configuration, mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::DegenerateGeometry("path without vertices".into()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateGeometry("non-finite vertex".into()));
        }
        let scale = vertices
            .iter()
            .map(|v| v.x.abs().max(v.y.abs()))
            .fold(1.0, f64::max);
        let tol = 1e-8 * scale;
        let last = vertices.len() - 1;
        if vertices[0].dist(start.point) > tol || vertices[last].dist(end.point) > tol {
            return Err(Error::InvalidConfiguration(
                "first/last vertex must equal the start/end point".into(),
            ));
        }
        vertices[0] = start.point;
        vertices[last] = end.point;
        Ok(Self {
            start,
            end,
            vertices,
            canonical: false,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.vertices[i].dist(self.vertices[i + 1])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.vertices.windows(2).map(|w| w[0].dist(w[1])).collect()
    }

    /// Same geometry traversed from the end back to the start.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self {
            start: self.end.reversed(),
            end: self.start.reversed(),
            vertices,
            canonical: self.canonical,
        }
    }

    /// Applies `f` to every point and `g` to both headings.
    pub fn map(&self, f: impl Fn(Point2) -> Point2, g: impl Fn(Vec2) -> Vec2) -> Self {
        Self {
            start: Configuration {
                point: f(self.start.point),
                heading: g(self.start.heading),
            },
            end: Configuration {
                point: f(self.end.point),
                heading: g(self.end.heading),
            },
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            canonical: self.canonical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeClass {
    Short,
    Normal,
    Long,
}

pub fn classify_edge(length: f64, params: &Params) -> Result<EdgeClass> {
    if !(length > 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "edge length must be positive, got {length}"
        )));
    }
    let tol = params.tol_len();
    Ok(if length < params.ell - tol {
        EdgeClass::Short
    } else if length > params.ell + tol {
        EdgeClass::Long
    } else {
        EdgeClass::Normal
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    Turn,
    Length,
    TurnOverLength,
    PreEdge,
    PostEdge,
}

/// One failed constraint. `location` is a vertex index for turn-type
/// violations and an edge index otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: usize,
    pub magnitude: f64,
}

/// `[u'] ++ vertices ++ [v']`.
pub fn augmented(path: &DiscretePath, params: &Params) -> Vec<Point2> {
    let mut out = Vec::with_capacity(path.vertices.len() + 2);
    out.push(path.start.point - path.start.heading * params.ell);
    out.extend_from_slice(&path.vertices);
    out.push(path.end.point + path.end.heading * params.ell);
    out
}

/// Turns at every path vertex, including the turn from the pre-edge at the
/// start and onto the post-edge at the end. Independent of `ell`.
pub fn vertex_turns(path: &DiscretePath) -> Result<Vec<f64>> {
    let k = path.edge_count();
    let mut dirs = Vec::with_capacity(k + 2);
    dirs.push(path.start.heading);
    for w in path.vertices.windows(2) {
        let d = w[1] - w[0];
        if d.norm_sq() == 0.0 {
            return Err(Error::DegenerateGeometry("repeated vertex".into()));
        }
        dirs.push(d);
    }
    dirs.push(path.end.heading);
    dirs.windows(2).map(|w| turn_angle(w[0], w[1])).collect()
}

fn sign(x: f64) -> i8 {
    if x > TOL_ANG {
        1
    } else if x < -TOL_ANG {
        -1
    } else {
        0
    }
}

pub(crate) fn inflection_from_turns(turns: &[f64], edge: usize) -> bool {
    (sign(turns[edge]) as i32) * (sign(turns[edge + 1]) as i32) < 0
}

/// True when the path turns in opposite directions at the two ends of the
/// edge (pre/post-edges supply the missing neighbours of terminal edges).
pub fn is_inflection(path: &DiscretePath, edge_index: usize) -> Result<bool> {
    let k = path.edge_count();
    if edge_index >= k {
        return Err(Error::IndexOutOfRange {
            index: edge_index,
            valid: format!("0..{k}"),
        });
    }
    let turns = vertex_turns(path)?;
    Ok(inflection_from_turns(&turns, edge_index))
}

pub fn path_length(path: &DiscretePath) -> f64 {
    path.vertices.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Checks turn, length and turn-over-length constraints on the augmented
/// path. Returns every violation; an empty list means feasible.
pub fn validate(path: &DiscretePath, params: &Params) -> Result<Vec<Violation>> {
    let k = path.edge_count();
    let lens = path.edge_lengths();
    if let Some(i) = lens.iter().position(|&l| l <= params.tol_dedup()) {
        return Err(Error::DegenerateGeometry(format!(
            "vertices {i} and {} coincide",
            i + 1
        )));
    }
    let turns = vertex_turns(path)?;
    let tol_len = params.tol_len();
    let short: Vec<bool> = lens.iter().map(|&l| l < params.ell - tol_len).collect();
    let mut out = Vec::new();

    for (i, &t) in turns.iter().enumerate() {
        let excess = t.abs() - params.theta;
        if excess > TOL_ANG {
            let kind = if i == 0 {
                ViolationKind::PreEdge
            } else if i == k {
                ViolationKind::PostEdge
            } else {
                ViolationKind::Turn
            };
            out.push(Violation {
                kind,
                location: i,
                magnitude: excess,
            });
        }
    }

    for i in 0..k.saturating_sub(1) {
        if short[i] && short[i + 1] {
            let magnitude = (params.ell - lens[i]).min(params.ell - lens[i + 1]);
            out.push(Violation {
                kind: ViolationKind::Length,
                location: i,
                magnitude,
            });
        }
    }

    for i in 0..k {
        if !short[i] || inflection_from_turns(&turns, i) {
            continue;
        }
        let excess = (turns[i] + turns[i + 1]).abs() - params.theta;
        if excess > TOL_ANG {
            let kind = if i == 0 {
                ViolationKind::PreEdge
            } else if i + 1 == k {
                ViolationKind::PostEdge
            } else {
                ViolationKind::TurnOverLength
            };
            out.push(Violation {
                kind,
                location: i,
                magnitude: excess,
            });
        }
    }
    Ok(out)
}

pub fn is_feasible(path: &DiscretePath, params: &Params) -> bool {
    matches!(validate(path, params), Ok(v) if v.is_empty())
}

/// Drops internal vertices whose turn is below `TOL_ANG`. Length and
/// feasibility are unchanged.
pub fn without_straight_vertices(path: &DiscretePath) -> Result<DiscretePath> {
    let turns = vertex_turns(path)?;
    let k = path.edge_count();
    let vertices: Vec<Point2> = path
        .vertices
        .iter()
        .enumerate()
        .filter(|&(i, _)| i == 0 || i == k || turns[i].abs() > TOL_ANG)
        .map(|(_, &p)| p)
        .collect();
    Ok(DiscretePath {
        start: path.start,
        end: path.end,
        vertices,
        canonical: false,
    })
}
