//! Discrete circular arcs, bridges and the resulting type word.
//!
//! Arcs are found on the path with its straight (zero-turn) vertices removed,
//! so the structure of a path and of its canonical form coincide. Positions
//! along the path are arclength stations, which that removal leaves intact.
//!
//! Two kinds of arcs exist:
//! * chains of vertices turning by exactly `theta` in one direction, joined
//!   by normal edges, extended by up to `ell` into the edges on either side
//!   (the terminal vertices take part through their pre/post-edge turn but
//!   the arc stops at them);
//! * single normal edges not already covered by a chain.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{
    is_feasible, vertex_turns, without_straight_vertices, DiscretePath, Params, TOL_ANG,
};
use crate::geometry::Point2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Left,
    Right,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Left => 1.0,
            Orientation::Right => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    }

    fn of(turn: f64) -> Option<Self> {
        if turn > TOL_ANG {
            Some(Orientation::Left)
        } else if turn < -TOL_ANG {
            Some(Orientation::Right)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start_pt: Point2,
    pub end_pt: Point2,
    /// Arclength stations of the arc ends.
    pub start_station: f64,
    pub end_station: f64,
    /// Path vertices strictly inside the arc, as an inclusive index range;
    /// `None` for single-segment arcs.
    pub first_vertex: Option<usize>,
    pub last_vertex: Option<usize>,
    pub orientation: Orientation,
    /// Number of segments of the arc polyline.
    pub edge_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bridge {
    pub start_pt: Point2,
    pub end_pt: Point2,
    pub start_station: f64,
    pub end_station: f64,
    pub host_edge: usize,
}

impl Bridge {
    pub fn length(&self) -> f64 {
        self.end_station - self.start_station
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
}

/// A word over `{A, B}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeWord(String);

pub const TRUE_TYPES: [&str; 7] = ["B", "A", "AB", "BA", "AA", "ABA", "AAA"];

impl TypeWord {
    pub fn parse(s: &str) -> Result<Self> {
        if s.chars().all(|c| c == 'A' || c == 'B') {
            Ok(Self(s.to_string()))
        } else {
            Err(Error::Precondition(format!("'{s}' is not a word over {{A, B}}")))
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Self(
            letters
                .iter()
                .map(|l| match l {
                    Letter::A => 'A',
                    Letter::B => 'B',
                })
                .collect(),
        )
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_true_type(&self) -> bool {
        TRUE_TYPES.contains(&self.0.as_str())
    }
}

impl fmt::Display for TypeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Forbidden {
    BB,
    BAB,
    AAB,
    BAA,
    AAAA,
}

impl Forbidden {
    pub const ALL: [Forbidden; 5] = [
        Forbidden::BB,
        Forbidden::BAB,
        Forbidden::AAB,
        Forbidden::BAA,
        Forbidden::AAAA,
    ];

    pub fn pattern(self) -> &'static str {
        match self {
            Forbidden::BB => "BB",
            Forbidden::BAB => "BAB",
            Forbidden::AAB => "AAB",
            Forbidden::BAA => "BAA",
            Forbidden::AAAA => "AAAA",
        }
    }
}

/// First forbidden factor by position.
pub fn find_forbidden_subtype(word: &TypeWord) -> Option<(Forbidden, usize)> {
    let s = word.as_str();
    (0..s.len()).find_map(|i| {
        Forbidden::ALL
            .iter()
            .find(|f| s[i..].starts_with(f.pattern()))
            .map(|&f| (f, i))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathStructure {
    pub arcs: Vec<Arc>,
    pub bridges: Vec<Bridge>,
    pub type_word: TypeWord,
}

/// The path without straight vertices plus the index map back to the input.
struct Reduced {
    path: DiscretePath,
    original_index: Vec<usize>,
    stations: Vec<f64>,
    lengths: Vec<f64>,
    turns: Vec<f64>,
}

fn reduce(path: &DiscretePath) -> Result<Reduced> {
    let turns = vertex_turns(path)?;
    let k = path.edge_count();
    let original_index: Vec<usize> = (0..=k)
        .filter(|&i| i == 0 || i == k || turns[i].abs() > TOL_ANG)
        .collect();
    let reduced = without_straight_vertices(path)?;
    let lengths = reduced.edge_lengths();
    let mut stations = Vec::with_capacity(lengths.len() + 1);
    let mut acc = 0.0;
    stations.push(0.0);
    for l in &lengths {
        acc += l;
        stations.push(acc);
    }
    let turns = vertex_turns(&reduced)?;
    Ok(Reduced {
        path: reduced,
        original_index,
        stations,
        lengths,
        turns,
    })
}

fn point_at(path: &DiscretePath, stations: &[f64], s: f64) -> Point2 {
    let k = path.edge_count();
    if k == 0 {
        return path.vertices[0];
    }
    let i = match stations.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
        Ok(i) => return path.vertices[i],
        Err(i) => i.clamp(1, k) - 1,
    };
    let len = stations[i + 1] - stations[i];
    let t = ((s - stations[i]) / len).clamp(0.0, 1.0);
    path.vertices[i].lerp(path.vertices[i + 1], t)
}

fn arcs_of(r: &Reduced, params: &Params) -> Vec<Arc> {
    let m = r.path.edge_count();
    if m == 0 {
        return Vec::new();
    }
    let tol = params.tol_len();
    let is_normal = |e: usize| (r.lengths[e] - params.ell).abs() <= tol;
    let theta_sign: Vec<Option<Orientation>> = r
        .turns
        .iter()
        .map(|&t| {
            if params.is_theta(t) {
                Orientation::of(t)
            } else {
                None
            }
        })
        .collect();

    let mut chains: Vec<(usize, usize, Orientation)> = Vec::new();
    let mut i = 0;
    while i <= m {
        let Some(o) = theta_sign[i] else {
            i += 1;
            continue;
        };
        let mut j = i;
        while j < m && theta_sign[j + 1] == Some(o) && is_normal(j) {
            j += 1;
        }
        chains.push((i, j, o));
        i = j + 1;
    }

    let mut in_chain = vec![false; m + 1];
    let mut arcs = Vec::new();
    for &(i, j, o) in &chains {
        for flag in &mut in_chain[i..=j] {
            *flag = true;
        }
        let (start, lead) = if i == 0 {
            (0.0, 0)
        } else {
            (r.stations[i] - r.lengths[i - 1].min(params.ell), 1)
        };
        let (end, tail) = if j == m {
            (r.stations[m], 0)
        } else {
            (r.stations[j] + r.lengths[j].min(params.ell), 1)
        };
        let edge_count = (j - i) + lead + tail;
        if edge_count == 0 {
            continue;
        }
        let inner: Vec<usize> = (i..=j).filter(|&x| x != 0 && x != m).collect();
        arcs.push(Arc {
            start_pt: point_at(&r.path, &r.stations, start),
            end_pt: point_at(&r.path, &r.stations, end),
            start_station: start,
            end_station: end,
            first_vertex: inner.first().map(|&x| r.original_index[x]),
            last_vertex: inner.last().map(|&x| r.original_index[x]),
            orientation: o,
            edge_count,
        });
    }

    for e in 0..m {
        if !is_normal(e) || in_chain[e] || in_chain[e + 1] {
            continue;
        }
        let orientation = Orientation::of(r.turns[e + 1])
            .or_else(|| Orientation::of(r.turns[e]))
            .unwrap_or(Orientation::Left);
        arcs.push(Arc {
            start_pt: r.path.vertices[e],
            end_pt: r.path.vertices[e + 1],
            start_station: r.stations[e],
            end_station: r.stations[e + 1],
            first_vertex: None,
            last_vertex: None,
            orientation,
            edge_count: 1,
        });
    }
    arcs.sort_by(|a, b| {
        (a.start_station, a.end_station)
            .partial_cmp(&(b.start_station, b.end_station))
            .unwrap()
    });
    arcs
}

fn bridges_of(original: &DiscretePath, r: &Reduced, arcs: &[Arc], params: &Params) -> Vec<Bridge> {
    let total = *r.stations.last().unwrap();
    let tol = params.tol_len();
    let mut gaps = Vec::new();
    let mut cursor = 0.0;
    for a in arcs {
        if a.start_station > cursor + tol {
            gaps.push((cursor, a.start_station));
        }
        cursor = f64::max(cursor, a.end_station);
    }
    if total > cursor + tol {
        gaps.push((cursor, total));
    }

    let original_stations: Vec<f64> = std::iter::once(0.0)
        .chain(original.edge_lengths().into_iter().scan(0.0, |acc, l| {
            *acc += l;
            Some(*acc)
        }))
        .collect();

    let mut out = Vec::new();
    for (g0, g1) in gaps {
        // Turning vertices strictly inside the gap split it.
        let mut cuts = vec![g0];
        cuts.extend(
            r.stations
                .iter()
                .copied()
                .filter(|&s| s > g0 + tol && s < g1 - tol),
        );
        cuts.push(g1);
        for w in cuts.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            let mid = 0.5 * (s0 + s1);
            let host_edge = original_stations
                .windows(2)
                .position(|e| mid >= e[0] && mid <= e[1])
                .unwrap_or(0);
            out.push(Bridge {
                start_pt: point_at(&r.path, &r.stations, s0),
                end_pt: point_at(&r.path, &r.stations, s1),
                start_station: s0,
                end_station: s1,
                host_edge,
            });
        }
    }
    out
}

fn require_feasible(path: &DiscretePath, params: &Params) -> Result<()> {
    if is_feasible(path, params) {
        Ok(())
    } else {
        Err(Error::Precondition("path is not feasible".into()))
    }
}

pub fn extract_arcs(path: &DiscretePath, params: &Params) -> Result<Vec<Arc>> {
    require_feasible(path, params)?;
    Ok(arcs_of(&reduce(path)?, params))
}

pub fn extract_bridges(path: &DiscretePath, arcs: &[Arc], params: &Params) -> Result<Vec<Bridge>> {
    let r = reduce(path)?;
    let bridges = bridges_of(path, &r, arcs, params);
    for b in &bridges {
        if b.length() <= 0.0 {
            return Err(Error::Internal("empty bridge".into()));
        }
    }
    Ok(bridges)
}

/// Arcs, bridges and the type word of a feasible path.
pub fn analyze(path: &DiscretePath, params: &Params) -> Result<PathStructure> {
    require_feasible(path, params)?;
    let r = reduce(path)?;
    let arcs = arcs_of(&r, params);
    let bridges = bridges_of(path, &r, &arcs, params);
    let mut items: Vec<(f64, f64, Letter)> = arcs
        .iter()
        .map(|a| (a.start_station, a.end_station, Letter::A))
        .chain(
            bridges
                .iter()
                .map(|b| (b.start_station, b.end_station, Letter::B)),
        )
        .collect();
    items.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
    let letters: Vec<Letter> = items.into_iter().map(|x| x.2).collect();
    Ok(PathStructure {
        arcs,
        bridges,
        type_word: TypeWord::from_letters(&letters),
    })
}

pub fn type_string(path: &DiscretePath, params: &Params) -> Result<TypeWord> {
    Ok(analyze(path, params)?.type_word)
}

/// Inserts every bridge endpoint as a (zero-turn) vertex. Existing
/// straight vertices are dropped first, as they are for typing.
pub fn canonicalize(path: &DiscretePath, params: &Params) -> Result<DiscretePath> {
    let structure = analyze(path, params)?;
    let path = &without_straight_vertices(path)?;
    let tol = params.tol_len();
    let lens = path.edge_lengths();
    let mut stations = vec![0.0];
    for l in &lens {
        stations.push(stations.last().unwrap() + l);
    }
    let mut cuts: Vec<f64> = structure
        .bridges
        .iter()
        .flat_map(|b| [b.start_station, b.end_station])
        .filter(|&s| stations.iter().all(|&v| (v - s).abs() > tol))
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= tol);

    let mut vertices = Vec::with_capacity(path.vertices.len() + cuts.len());
    let mut c = 0;
    for i in 0..path.edge_count() {
        vertices.push(path.vertices[i]);
        while c < cuts.len() && cuts[c] < stations[i + 1] {
            let t = (cuts[c] - stations[i]) / lens[i];
            vertices.push(path.vertices[i].lerp(path.vertices[i + 1], t));
            c += 1;
        }
    }
    vertices.push(*path.vertices.last().unwrap());
    Ok(DiscretePath {
        start: path.start,
        end: path.end,
        vertices,
        canonical: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::path::{path_length, validate, Configuration};
    use std::f64::consts::{PI, TAU};

    /// Builds a path from a start configuration, the turn at `u`, and a list
    /// of (edge length, turn at the edge's end vertex) pairs. The last turn
    /// is the turn onto the post-edge.
    pub(crate) fn build(start: Configuration, turn_u: f64, edges: &[(f64, f64)]) -> DiscretePath {
        let mut h = start.heading_angle() + turn_u;
        let mut p = start.point;
        let mut v = vec![p];
        for &(len, turn) in edges {
            p = p + Vec2::from_angle(h) * len;
            v.push(p);
            h += turn;
        }
        let end = Configuration::from_angle(p.x, p.y, h);
        DiscretePath::new(start, end, v).unwrap()
    }

    fn origin() -> Configuration {
        Configuration::from_angle(0.0, 0.0, 0.0)
    }

    #[test]
    fn polygon_is_one_arc() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let edges: Vec<(f64, f64)> = (0..8).map(|_| (1.0, th)).collect();
        let path = build(Configuration::from_angle(0.0, 0.0, -th), th, &edges);
        let s = analyze(&path, &params).unwrap();
        assert_eq!(s.arcs.len(), 1);
        assert_eq!(s.arcs[0].edge_count, 8);
        assert!(s.bridges.is_empty());
        assert_eq!(s.type_word.as_str(), "A");
    }

    #[test]
    fn straight_is_one_bridge() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let path = build(origin(), 0.0, &[(5.0, 0.0)]);
        let s = analyze(&path, &params).unwrap();
        assert!(s.arcs.is_empty());
        assert_eq!(s.bridges.len(), 1);
        assert_eq!(s.bridges[0].length(), 5.0);
        assert_eq!(s.type_word.as_str(), "B");
    }

    #[test]
    fn flush_short_first_edge_is_arc() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let path = build(origin(), th, &[(0.5, -0.3 * th), (4.0, 0.0)]);
        let s = analyze(&path, &params).unwrap();
        assert_eq!(s.arcs.len(), 1);
        assert_eq!(s.arcs[0].edge_count, 1);
        assert!((s.arcs[0].end_station - 0.5).abs() < 1e-12);
        assert_eq!(s.type_word.as_str(), "AB");
    }

    #[test]
    fn sub_theta_vertex_does_not_join_edges() {
        // Two normal edges with a half-θ turn between internal vertices: no
        // arc runs across the middle vertex; each normal edge stands alone.
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let path = build(
            origin(),
            0.0,
            &[(3.0, 0.2 * th), (1.0, 0.5 * th), (1.0, 0.2 * th), (3.0, 0.0)],
        );
        let s = analyze(&path, &params).unwrap();
        assert_eq!(s.arcs.len(), 2);
        for a in &s.arcs {
            assert_eq!(a.edge_count, 1);
            assert!(a.first_vertex.is_none());
        }
        assert!(s.arcs.iter().all(|a| a.end_station <= 4.0 + 1e-12 || a.start_station >= 4.0 - 1e-12));
    }

    #[test]
    fn bridge_inside_long_edge() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let path = build(
            origin(),
            th,
            &[(1.0, th), (3.0, th), (1.0, th), (1.0, 0.0)],
        );
        let s = analyze(&path, &params).unwrap();
        assert_eq!(s.type_word.as_str(), "ABA");
        assert_eq!(s.bridges.len(), 1);
        let b = &s.bridges[0];
        assert!((b.start_station - 2.0).abs() < 1e-12);
        assert!((b.end_station - 3.0).abs() < 1e-12);
        assert_eq!(b.host_edge, 1);

        let c = canonicalize(&path, &params).unwrap();
        assert!(c.canonical);
        assert_eq!(c.vertices.len(), path.vertices.len() + 2);
        assert!((c.vertices[2].dist(path.vertices[1]) - 1.0).abs() < 1e-12);
        assert!((c.vertices[3].dist(path.vertices[2]) - 1.0).abs() < 1e-12);
        assert!(validate(&c, &params).unwrap().is_empty());
        assert!((path_length(&c) - path_length(&path)).abs() < 1e-12);
        assert_eq!(type_string(&c, &params).unwrap().as_str(), "ABA");
        assert_eq!(canonicalize(&c, &params).unwrap().vertices, c.vertices);
    }

    #[test]
    fn figure_one_path() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let path = build(
            origin(),
            th,
            &[
                (0.5, -0.2 * th),
                (3.0, th),
                (1.0, th),
                (1.0, -th),
                (3.0, -th),
                (1.0, 0.3 * th),
                (3.0, 0.0),
            ],
        );
        assert!(validate(&path, &params).unwrap().is_empty());
        let s = analyze(&path, &params).unwrap();
        assert_eq!(s.type_word.as_str(), "ABAABAB");
        // The two middle arcs share the normal inflection edge.
        assert!(s.arcs[1].end_station > s.arcs[2].start_station);
    }

    #[test]
    fn overlapping_arcs_on_short_inflection_edge() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let path = build(
            origin(),
            0.0,
            &[(3.0, th), (1.0, th), (0.4, -th), (1.0, -th), (3.0, 0.0)],
        );
        let s = analyze(&path, &params).unwrap();
        assert_eq!(s.type_word.as_str(), "BAAB");
        let (a, b) = (&s.arcs[0], &s.arcs[1]);
        assert!((a.end_station - b.start_station - 0.4).abs() < 1e-12);
    }

    #[test]
    fn infeasible_input_is_rejected() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let path = build(origin(), 0.0, &[(2.0, PI / 2.0), (2.0, 0.0)]);
        assert!(matches!(
            extract_arcs(&path, &params),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn forbidden_examples() {
        let w = |s: &str| TypeWord::parse(s).unwrap();
        assert_eq!(find_forbidden_subtype(&w("ABA")), None);
        assert_eq!(find_forbidden_subtype(&w("AABA")), Some((Forbidden::AAB, 0)));
        assert_eq!(find_forbidden_subtype(&w("AAAA")), Some((Forbidden::AAAA, 0)));
        assert_eq!(find_forbidden_subtype(&w("ABB")), Some((Forbidden::BB, 1)));
        assert!(TypeWord::parse("ABC").is_err());
    }

    #[test]
    fn unit_schedule_polygon() {
        let params = Params::unit_schedule(12).unwrap();
        let th = TAU / 12.0;
        let edges: Vec<(f64, f64)> = (0..5).map(|_| (params.ell, th)).collect();
        let path = build(origin(), th, &edges);
        assert_eq!(type_string(&path, &params).unwrap().as_str(), "A");
    }
}
