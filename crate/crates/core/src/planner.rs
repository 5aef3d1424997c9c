//! Shortest-path planning between two configurations.
//!
//! A candidate is a shooting word: the turn at every vertex and the length of
//! every edge, each either pinned (turn ±θ inside an arc, edge of length
//! `ell` inside an arc) or free. Words are built from up to three arcs joined
//! by connectors, and carry exactly three free values so that the endpoint
//! equations (two for position, one for heading) determine them. Every
//! solution is validated, and the shortest true-type path wins.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{circle_intersections, wrap_angle, Point2, Vec2};
use crate::path::{inflection_from_turns, is_feasible, path_length, Configuration, DiscretePath, Params, TOL_ANG};
use crate::rewrite::shorten;
use crate::smooth::{discretize, dubins_words, Segment, SmoothPath};
use crate::typing::{analyze, Orientation, TypeWord};

/// A pinned or free value of the shooting word.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "slot", content = "value", rename_all = "snake_case")]
pub enum Slot {
    Pinned(f64),
    Free(f64),
}

impl Slot {
    pub fn value(self) -> f64 {
        match self {
            Slot::Pinned(x) | Slot::Free(x) => x,
        }
    }

    pub fn is_free(self) -> bool {
        matches!(self, Slot::Free(_))
    }

    fn set(&mut self, x: f64) {
        if let Slot::Free(v) = self {
            *v = x;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub orientation: Orientation,
    /// Number of vertices turning by exactly θ.
    pub k: usize,
}

/// Turns at vertices `0..=m` and lengths of edges `1..=m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub arcs: Vec<ArcSpec>,
    pub turns: Vec<Slot>,
    pub edges: Vec<Slot>,
}

impl CandidateSpec {
    /// Compact rendering: `*` free turn, `+`/`-` turn by ±θ, `~` free edge,
    /// `=` edge of length `ell`.
    pub fn label(&self) -> String {
        let mut s = String::with_capacity(2 * self.turns.len());
        for (i, t) in self.turns.iter().enumerate() {
            if i > 0 {
                s.push(if self.edges[i - 1].is_free() { '~' } else { '=' });
            }
            s.push(match t {
                Slot::Free(_) => '*',
                Slot::Pinned(x) if *x > 0.0 => '+',
                Slot::Pinned(_) => '-',
            });
        }
        s
    }

    /// Lower bound on the length of any member reaching distance `reach`.
    /// Runs of pinned edges joined by pinned turns are rigid; the free edges
    /// must cover whatever the chords of those runs leave of `reach`.
    fn length_bound(&self, reach: f64) -> f64 {
        let mut pinned = 0.0;
        let mut chords = 0.0;
        let mut run: Option<(Vec2, f64)> = None;
        for (i, e) in self.edges.iter().enumerate() {
            match e {
                Slot::Pinned(l) => {
                    pinned += l;
                    let (sum, heading) = match (run, self.turns[i]) {
                        (Some((sum, h)), Slot::Pinned(t)) => (sum, h + t),
                        (Some((sum, _)), Slot::Free(_)) => {
                            chords += sum.norm();
                            (Vec2::new(0.0, 0.0), 0.0)
                        }
                        (None, _) => (Vec2::new(0.0, 0.0), 0.0),
                    };
                    run = Some((sum + Vec2::new(heading.cos(), heading.sin()) * *l, heading));
                }
                Slot::Free(_) => {
                    if let Some((sum, _)) = run.take() {
                        chords += sum.norm();
                    }
                }
            }
        }
        if let Some((sum, _)) = run {
            chords += sum.norm();
        }
        pinned + (reach - chords).max(0.0)
    }

    fn free_turns(&self) -> Vec<usize> {
        (0..self.turns.len()).filter(|&i| self.turns[i].is_free()).collect()
    }

    fn free_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].is_free()).collect()
    }
}

/// Polyline produced by a shooting word and its mismatch at the goal.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub vertices: Vec<Point2>,
    pub end_heading: f64,
    /// Position error (x, y) and wrapped heading error.
    pub residual: [f64; 3],
}

impl Construction {
    pub fn residual_norm(&self) -> f64 {
        self.residual.iter().map(|r| r * r).sum::<f64>().sqrt()
    }
}

/// Vertices reached from `start` and the final heading angle.
/// Unit vectors of the given turns. Pinned turns repeat, so the last value of
/// each sign is remembered instead of recomputed.
fn rotors(turns: &[f64]) -> Vec<Vec2> {
    let mut memo = [(f64::NAN, Vec2::new(1.0, 0.0)); 2];
    turns
        .iter()
        .map(|&t| {
            let slot = &mut memo[usize::from(t < 0.0)];
            if slot.0 != t {
                *slot = (t, Vec2::from_angle(t));
            }
            slot.1
        })
        .collect()
}

/// `d` rotated by the unit vector `r`.
fn turned(d: Vec2, r: Vec2) -> Vec2 {
    Vec2::new(d.x * r.x - d.y * r.y, d.x * r.y + d.y * r.x)
}

fn shoot(turns: &[f64], edges: &[f64], start: &Configuration) -> (Vec<Point2>, f64) {
    let rot = rotors(turns);
    let mut h = start.heading_angle();
    let mut d = start.heading;
    let mut p = start.point;
    let mut vertices = Vec::with_capacity(turns.len());
    vertices.push(p);
    for ((t, r), e) in turns.iter().zip(&rot).zip(edges) {
        h += t;
        d = turned(d, *r);
        p += d * *e;
        vertices.push(p);
    }
    h += turns[turns.len() - 1];
    (vertices, h)
}

pub fn forward_construct(spec: &CandidateSpec, u: &Configuration, v: &Configuration) -> Construction {
    let turns: Vec<f64> = spec.turns.iter().map(|s| s.value()).collect();
    let edges: Vec<f64> = spec.edges.iter().map(|s| s.value()).collect();
    let (vertices, h) = shoot(&turns, &edges, u);
    let end = vertices[vertices.len() - 1];
    let residual = [
        end.x - v.point.x,
        end.y - v.point.y,
        wrap_angle(h - v.heading_angle()),
    ];
    Construction {
        vertices,
        end_heading: h,
        residual,
    }
}

fn tol_solve(u: &Configuration, v: &Configuration) -> f64 {
    1e-9 * u.point.dist(v.point).max(1.0)
}

/// Required sum of the free turns, up to multiples of 2π.
fn heading_gap(spec: &CandidateSpec, u: &Configuration, v: &Configuration) -> f64 {
    let pinned: f64 = spec
        .turns
        .iter()
        .filter(|t| !t.is_free())
        .map(|t| t.value())
        .sum();
    wrap_angle(v.heading_angle() - u.heading_angle() - pinned)
}

/// Representatives of `gap` (mod 2π) reachable by `count` turns in [-θ, θ].
fn turn_sums(gap: f64, count: usize, theta: f64) -> Vec<f64> {
    let reach = count as f64 * theta + 1e-12;
    [gap - TAU, gap, gap + TAU]
        .into_iter()
        .filter(|c| c.abs() <= reach)
        .collect()
}

fn within_turn(t: f64, theta: f64) -> Option<f64> {
    if t.abs() <= theta + 1e-12 {
        Some(t.clamp(-theta, theta))
    } else {
        None
    }
}

/// One free turn, two free edges: the turn follows from the heading, the
/// edges from a 2x2 linear system.
fn solve_one_turn(spec: &CandidateSpec, u: &Configuration, v: &Configuration, theta: f64) -> Vec<CandidateSpec> {
    let ft = spec.free_turns();
    let fe = spec.free_edges();
    let gap = heading_gap(spec, u, v);
    let mut out = Vec::new();
    for c in turn_sums(gap, 1, theta) {
        let Some(t) = within_turn(c, theta) else { continue };
        let mut s = spec.clone();
        s.turns[ft[0]].set(t);
        s.edges[fe[0]].set(0.0);
        s.edges[fe[1]].set(0.0);
        let turns: Vec<f64> = s.turns.iter().map(|x| x.value()).collect();
        let edges: Vec<f64> = s.edges.iter().map(|x| x.value()).collect();
        let (vertices, _) = shoot(&turns, &edges, u);
        let r = v.point - vertices[vertices.len() - 1];
        let heading_of = |j: usize| u.heading_angle() + turns[..=j].iter().sum::<f64>();
        let d0 = Vec2::from_angle(heading_of(fe[0]));
        let d1 = Vec2::from_angle(heading_of(fe[1]));
        let det = d0.cross(d1);
        if det.abs() < 1e-12 {
            continue;
        }
        s.edges[fe[0]].set(r.cross(d1) / det);
        s.edges[fe[1]].set(d0.cross(r) / det);
        out.push(s);
    }
    out
}

/// Rigid pieces between free vertices, built once per candidate.
struct Pieces<'a> {
    turns: Vec<f64>,
    rotors: Vec<Vec2>,
    edges: Vec<f64>,
    start: &'a Configuration,
}

impl<'a> Pieces<'a> {
    fn new(spec: &CandidateSpec, start: &'a Configuration) -> Self {
        let turns: Vec<f64> = spec.turns.iter().map(|x| x.value()).collect();
        Self {
            rotors: rotors(&turns),
            turns,
            edges: spec.edges.iter().map(|x| x.value()).collect(),
            start,
        }
    }

    /// Displacement from vertex `i` to vertex `j` with the first edge along +x.
    fn local(&self, i: usize, j: usize) -> Vec2 {
        let mut d = Vec2::new(1.0, 0.0);
        let mut p = Vec2::new(0.0, 0.0);
        for q in i..j {
            if q > i {
                d = turned(d, self.rotors[q]);
            }
            p += d * self.edges[q];
        }
        p
    }

    /// Sum of the turns strictly between vertices `i` and `j`.
    fn inner(&self, i: usize, j: usize) -> f64 {
        self.turns[i + 1..j].iter().sum()
    }

    /// Position of vertex `a` and the heading arriving there.
    fn reach(&self, a: usize) -> (Point2, f64) {
        let mut h = self.start.heading_angle();
        let mut d = self.start.heading;
        let mut x = self.start.point;
        for q in 0..a {
            h += self.turns[q];
            d = turned(d, self.rotors[q]);
            x += d * self.edges[q];
        }
        (x, h)
    }

    /// Heading leaving vertex `b` when the path must end with heading `h_end`.
    fn leaving(&self, b: usize, h_end: f64) -> f64 {
        h_end - self.turns[b + 1..].iter().sum::<f64>()
    }
}

/// Nonnegative `e` with `|a + e·d| = r` for a unit vector `d`.
fn stretch_roots(a: Vec2, d: Vec2, r: f64) -> Vec<f64> {
    let b = a.dot(d);
    let disc = b * b - a.norm_sq() + r * r;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    let mut out = vec![-b - s];
    if s > 0.0 {
        out.push(-b + s);
    }
    out.retain(|e| *e >= 0.0);
    out
}

/// Two free turns and one free edge. The piece after the second free vertex
/// has a known heading, so the free edge length solves a quadratic and the
/// first free turn follows.
fn solve_two_turns(spec: &CandidateSpec, u: &Configuration, v: &Configuration, theta: f64) -> Vec<CandidateSpec> {
    let ft = spec.free_turns();
    let (a, b) = (ft[0], ft[1]);
    let e = spec.free_edges()[0];
    let mut zeroed = spec.clone();
    zeroed.edges[e].set(0.0);
    let pc = Pieces::new(&zeroed, u);
    let m = pc.turns.len() - 1;
    let (xa, h_in) = pc.reach(a);
    let phi2 = pc.leaving(b, v.heading_angle());
    let w1 = pc.local(a, b);
    let w2 = crate::geometry::rotate(pc.local(b, m), phi2);
    let q = v.point - xa - w2;
    let mut phis = Vec::new();
    if e < a {
        let d = Vec2::from_angle(h_in - pc.turns[e + 1..a].iter().sum::<f64>());
        for len in stretch_roots(-q, d, w1.norm()) {
            phis.push((len, (q - d * len).angle() - w1.angle()));
        }
    } else if e < b {
        let d = Vec2::from_angle(pc.turns[a + 1..=e].iter().sum::<f64>());
        for len in stretch_roots(w1, d, q.norm()) {
            phis.push((len, q.angle() - (w1 + d * len).angle()));
        }
    } else {
        let d = Vec2::from_angle(phi2 + pc.turns[b + 1..=e].iter().sum::<f64>());
        for len in stretch_roots(-q, d, w1.norm()) {
            phis.push((len, (q - d * len).angle() - w1.angle()));
        }
    }
    let mut out = Vec::new();
    for (len, phi1) in phis {
        let ta = wrap_angle(phi1 - h_in);
        let tb = wrap_angle(phi2 - phi1 - pc.inner(a, b));
        let (Some(ta), Some(tb)) = (within_turn(ta, theta), within_turn(tb, theta)) else {
            continue;
        };
        let mut s = spec.clone();
        s.turns[a].set(ta);
        s.turns[b].set(tb);
        s.edges[e].set(len);
        out.push(s);
    }
    out
}

/// Three free turns: the pieces between free vertices are rigid, so the
/// middle free vertex lies on two circles.
fn solve_three_turns(spec: &CandidateSpec, u: &Configuration, v: &Configuration, theta: f64) -> Vec<CandidateSpec> {
    let ft = spec.free_turns();
    let (a, b, c) = (ft[0], ft[1], ft[2]);
    let turns: Vec<f64> = spec.turns.iter().map(|x| x.value()).collect();
    let edges: Vec<f64> = spec.edges.iter().map(|x| x.value()).collect();
    // Piece from vertex i to j in its own frame (first edge along +x).
    let piece = |i: usize, j: usize| -> Vec2 {
        let mut h = 0.0;
        let mut p = Vec2::new(0.0, 0.0);
        for q in i..j {
            if q > i {
                h += turns[q];
            }
            p += Vec2::from_angle(h) * edges[q];
        }
        p
    };
    let inner = |i: usize, j: usize| -> f64 { turns[i + 1..j].iter().sum() };
    let mut h_in = u.heading_angle();
    let mut xa = u.point;
    for q in 0..a {
        h_in += turns[q];
        xa += Vec2::from_angle(h_in) * edges[q];
    }
    let m = turns.len() - 1;
    let w1 = piece(a, b);
    let w2 = piece(b, c);
    let w3 = piece(c, m);
    let phi3 = v.heading_angle() - turns[c + 1..].iter().sum::<f64>();
    let xc = v.point - crate::geometry::rotate(w3, phi3);
    let (r1, r2) = (w1.norm(), w2.norm());
    let tiny = 1e-9 * edges.iter().cloned().fold(0.0, f64::max).max(1e-300);
    if r1 < tiny || r2 < tiny {
        return Vec::new();
    }
    let Some(points) = circle_intersections(xa, r1, xc, r2) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for xb in points {
        let phi1 = (xb - xa).angle() - w1.angle();
        let phi2 = (xc - xb).angle() - w2.angle();
        let ta = wrap_angle(phi1 - h_in);
        let tb = wrap_angle(phi2 - phi1 - inner(a, b));
        let tc = wrap_angle(phi3 - phi2 - inner(b, c));
        let (Some(ta), Some(tb), Some(tc)) =
            (within_turn(ta, theta), within_turn(tb, theta), within_turn(tc, theta))
        else {
            continue;
        };
        let mut s = spec.clone();
        s.turns[a].set(ta);
        s.turns[b].set(tb);
        s.turns[c].set(tc);
        if out.iter().any(|o: &CandidateSpec| o.turns == s.turns) {
            continue;
        }
        out.push(s);
    }
    out
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-14 {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        *xk = det(mk) / d;
    }
    Some(x)
}

/// Damped Newton on the full three-equation residual; halves the step while
/// the residual grows.
fn newton_polish(spec: &mut CandidateSpec, u: &Configuration, v: &Configuration) {
    let ft = spec.free_turns();
    let fe = spec.free_edges();
    let mut cur = forward_construct(spec, u, v);
    for _ in 0..8 {
        let norm = cur.residual_norm();
        if norm < 1e-15 * (1.0 + u.point.dist(v.point)) {
            return;
        }
        let end = cur.vertices[cur.vertices.len() - 1];
        let mut jac = [[0.0; 3]; 3];
        let mut col = 0;
        for &i in &ft {
            let d = (end - cur.vertices[i]).perp();
            jac[0][col] = d.x;
            jac[1][col] = d.y;
            jac[2][col] = 1.0;
            col += 1;
        }
        let turns: Vec<f64> = spec.turns.iter().map(|x| x.value()).collect();
        for &j in &fe {
            let d = Vec2::from_angle(u.heading_angle() + turns[..=j].iter().sum::<f64>());
            jac[0][col] = d.x;
            jac[1][col] = d.y;
            col += 1;
        }
        if col != 3 {
            return;
        }
        let Some(dx) = solve3(jac, cur.residual) else { return };
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..10 {
            let mut trial = spec.clone();
            let mut k = 0;
            for &i in &ft {
                trial.turns[i].set(spec.turns[i].value() - step * dx[k]);
                k += 1;
            }
            for &j in &fe {
                trial.edges[j].set(spec.edges[j].value() - step * dx[k]);
                k += 1;
            }
            let next = forward_construct(&trial, u, v);
            if next.residual_norm() < norm {
                *spec = trial;
                cur = next;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            return;
        }
    }
}

/// Roots of a candidate's endpoint equations, each polished and checked
/// against the turn and edge bounds (not yet validated as a path).
fn solve_roots(spec: &CandidateSpec, u: &Configuration, v: &Configuration, params: &Params) -> Vec<CandidateSpec> {
    solve_roots_with(spec, u, v, params, RootCheck::Exact)
}

/// How closed-form roots are checked before being returned.
#[derive(Clone, Copy, PartialEq)]
enum RootCheck {
    /// Polished and verified against the endpoint.
    Exact,
    /// Bounds only, enough to rank members of a family.
    Bounds,
}

fn solve_roots_with(spec: &CandidateSpec, u: &Configuration, v: &Configuration, params: &Params, check: RootCheck) -> Vec<CandidateSpec> {
    let polish = check == RootCheck::Exact;
    let theta = params.theta;
    let roots = match (spec.free_turns().len(), spec.free_edges().len()) {
        (1, 2) => solve_one_turn(spec, u, v, theta),
        (2, 1) => solve_two_turns(spec, u, v, theta),
        (3, 0) => solve_three_turns(spec, u, v, theta),
        _ => Vec::new(),
    };
    let min_edge = params.tol_dedup();
    roots
        .into_iter()
        .filter_map(|mut s| {
            if polish {
                newton_polish(&mut s, u, v);
            }
            let ok_turns = s.turns.iter().all(|t| t.value().abs() <= theta + 1e-12);
            let ok_edges = s.edges.iter().all(|e| e.value() > min_edge);
            (ok_turns && ok_edges && (!polish || forward_construct(&s, u, v).residual_norm() <= tol_solve(u, v))).then_some(s)
        })
        .collect()
}

/// Samples of the swept turn before refining a one-parameter family.
const FAMILY_GRID: usize = 9;
const FAMILY_ITERATIONS: usize = 45;
/// Families whose best grid sample is within this relative margin of the
/// incumbent are refined.
const FAMILY_MARGIN: f64 = 0.03;

fn is_family(spec: &CandidateSpec) -> bool {
    spec.free_turns().len() + spec.free_edges().len() == 4
}

/// Feasibility read off the slot values of a solved candidate, without
/// building the path. Mirrors `validate` on the augmented path.
fn slots_feasible(spec: &CandidateSpec, params: &Params) -> bool {
    let turns: Vec<f64> = spec.turns.iter().map(|t| t.value()).collect();
    let lens: Vec<f64> = spec.edges.iter().map(|e| e.value()).collect();
    let short: Vec<bool> = lens.iter().map(|&l| l < params.ell - params.tol_len()).collect();
    if turns.iter().any(|t| t.abs() - params.theta > TOL_ANG) {
        return false;
    }
    if short.windows(2).any(|w| w[0] && w[1]) {
        return false;
    }
    (0..lens.len()).all(|i| {
        !short[i] || inflection_from_turns(&turns, i) || (turns[i] + turns[i + 1]).abs() - params.theta <= TOL_ANG
    })
}

fn slots_length(spec: &CandidateSpec) -> f64 {
    spec.edges.iter().map(|e| e.value()).sum()
}

/// Shortest feasible member of a family with its swept turn pinned to `t`.
/// With `exact` the member is validated as a built path, otherwise only its
/// slot values are checked.
fn family_member(
    spec: &CandidateSpec,
    t: f64,
    exact: bool,
    u: &Configuration,
    v: &Configuration,
    params: &Params,
) -> Option<(f64, CandidateSpec)> {
    let swept = *spec.free_turns().first()?;
    let mut s = spec.clone();
    s.turns[swept] = Slot::Pinned(t);
    solve_roots_with(&s, u, v, params, if exact { RootCheck::Exact } else { RootCheck::Bounds })
        .into_iter()
        .filter_map(|r| {
            if exact {
                realize(&r, u, v, params).map(|p| (path_length(&p), r))
            } else {
                slots_feasible(&r, params).then(|| (slots_length(&r), r))
            }
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Intervals of the swept turn over which the other free turns can still
/// close the heading gap.
fn swept_intervals(spec: &CandidateSpec, u: &Configuration, v: &Configuration, theta: f64) -> Vec<(f64, f64)> {
    let free = spec.free_turns().len();
    let others = (free - 1) as f64 * theta;
    turn_sums(heading_gap(spec, u, v), free, theta)
        .into_iter()
        .filter_map(|total| {
            let lo = (total - others).max(-theta);
            let hi = (total + others).min(theta);
            (lo <= hi).then_some((lo, hi))
        })
        .collect()
}

/// Best grid sample of a family.
struct FamilySample {
    length: f64,
    turn: f64,
    step: f64,
    interval: (f64, f64),
    member: CandidateSpec,
}

fn family_grid(spec: &CandidateSpec, u: &Configuration, v: &Configuration, params: &Params) -> Option<FamilySample> {
    let intervals = swept_intervals(spec, u, v, params.theta);
    let swept = *spec.free_turns().first()?;
    let screened = intervals.iter().any(|&(lo, hi)| {
        [lo, 0.5 * (lo + hi), hi].into_iter().any(|t| {
            let mut s = spec.clone();
            s.turns[swept] = Slot::Pinned(t);
            !solve_roots_with(&s, u, v, params, RootCheck::Bounds).is_empty()
        })
    });
    if !screened {
        return None;
    }
    intervals
        .into_iter()
        .flat_map(|(lo, hi)| {
            let step = (hi - lo) / (FAMILY_GRID - 1) as f64;
            (0..FAMILY_GRID).filter_map(move |i| {
                let turn = lo + i as f64 * step;
                family_member(spec, turn, false, u, v, params).map(|(length, member)| FamilySample {
                    length,
                    turn,
                    step,
                    interval: (lo, hi),
                    member,
                })
            })
        })
        .min_by(|a, b| a.length.total_cmp(&b.length))
}

/// Golden-section refinement of the swept turn around a grid sample. The
/// optimum may sit on a constraint boundary, where length is only first-order
/// in the bracket width, so the bracket is shrunk well below `tol_ang`.
/// Members are ranked by their slot values; if the winner fails validation as
/// a built path the search is repeated with every member validated.
fn family_refine(
    spec: &CandidateSpec,
    sample: &FamilySample,
    u: &Configuration,
    v: &Configuration,
    params: &Params,
) -> Option<CandidateSpec> {
    let best = golden(spec, sample, false, u, v, params)?;
    if realize(&best, u, v, params).is_some() {
        return Some(best);
    }
    golden(spec, sample, true, u, v, params)
}

fn golden(
    spec: &CandidateSpec,
    sample: &FamilySample,
    exact: bool,
    u: &Configuration,
    v: &Configuration,
    params: &Params,
) -> Option<CandidateSpec> {
    let (t0, step) = (sample.turn, sample.step);
    let mut best = (f64::INFINITY, None);
    let mut f = |t: f64| -> f64 {
        match family_member(spec, t, exact, u, v, params) {
            Some((l, s)) => {
                if l < best.0 {
                    best = (l, Some(s));
                }
                l
            }
            None => f64::INFINITY,
        }
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((t0 - step).max(sample.interval.0), (t0 + step).min(sample.interval.1));
    f(t0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..FAMILY_ITERATIONS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let mut best = best.1?;
    if !exact {
        newton_polish(&mut best, u, v);
    }
    Some(best)
}

/// Roots of a candidate, or the best member when it is a one-parameter
/// family (four free values). A family's first free turn is swept over
/// `[-theta, theta]` and the other three unknowns are solved exactly.
fn solve_any(spec: &CandidateSpec, u: &Configuration, v: &Configuration, params: &Params) -> Vec<CandidateSpec> {
    if is_family(spec) {
        family_grid(spec, u, v, params)
            .and_then(|g| family_refine(spec, &g, u, v, params))
            .into_iter()
            .collect()
    } else {
        solve_roots(spec, u, v, params)
    }
}

/// Shortest feasible path realizing the candidate, if any root exists.
pub fn solve_candidate(spec: &CandidateSpec, u: &Configuration, v: &Configuration, params: &Params) -> Option<DiscretePath> {
    solve_any(spec, u, v, params)
        .into_iter()
        .filter_map(|s| realize(&s, u, v, params))
        .min_by(|a, b| path_length(a).total_cmp(&path_length(b)))
}

fn realize(spec: &CandidateSpec, u: &Configuration, v: &Configuration, params: &Params) -> Option<DiscretePath> {
    let c = forward_construct(spec, u, v);
    let path = DiscretePath::new(*u, *v, c.vertices).ok()?;
    is_feasible(&path, params).then_some(path)
}

/// Edges of a connector between arcs, `true` for a free edge. Consecutive
/// connector edges meet at a vertex with a free turn.
type Connector = Vec<bool>;

#[derive(Clone, Debug, PartialEq)]
struct Shape {
    signs: Vec<f64>,
    flush_start: bool,
    flush_end: bool,
    /// Connector before arc `i` (index `i`) and after the last arc (index
    /// `arcs`); `None` where an arc touches an endpoint.
    connectors: Vec<Option<Connector>>,
}

impl Shape {
    fn free_counts(&self) -> (usize, usize) {
        let mut turns = usize::from(!self.flush_start) + usize::from(!self.flush_end);
        let mut edges = 0;
        for c in self.connectors.iter().flatten() {
            turns += c.len() - 1;
            edges += c.iter().filter(|f| **f).count();
        }
        (turns, edges)
    }

    fn normal_connector_edges(&self) -> usize {
        self.connectors
            .iter()
            .flatten()
            .map(|c| c.iter().filter(|f| !**f).count())
            .sum()
    }

    fn spec(&self, ks: &[usize], params: &Params) -> CandidateSpec {
        let size = ks.iter().sum::<usize>() + 8;
        let mut turns = Vec::with_capacity(size);
        let mut edges = Vec::with_capacity(size);
        let push_connector = |c: &Connector, turns: &mut Vec<Slot>, edges: &mut Vec<Slot>| {
            for (i, free) in c.iter().enumerate() {
                if i > 0 {
                    turns.push(Slot::Free(0.0));
                }
                edges.push(if *free { Slot::Free(0.0) } else { Slot::Pinned(params.ell) });
            }
        };
        if !self.flush_start {
            turns.push(Slot::Free(0.0));
            if let Some(c) = &self.connectors[0] {
                push_connector(c, &mut turns, &mut edges);
            }
        }
        for (i, (&sign, &k)) in self.signs.iter().zip(ks).enumerate() {
            for j in 0..k {
                if j > 0 {
                    edges.push(Slot::Pinned(params.ell));
                }
                turns.push(Slot::Pinned(sign * params.theta));
            }
            if let Some(c) = &self.connectors[i + 1] {
                push_connector(c, &mut turns, &mut edges);
            }
        }
        if !self.flush_end {
            turns.push(Slot::Free(0.0));
        }
        let arcs = self
            .signs
            .iter()
            .zip(ks)
            .map(|(&s, &k)| ArcSpec {
                orientation: if s > 0.0 { Orientation::Left } else { Orientation::Right },
                k,
            })
            .collect();
        CandidateSpec { arcs, turns, edges }
    }
}

fn all_connectors() -> Vec<Connector> {
    let mut out = Vec::new();
    for len in 1..=3usize {
        for mask in 0..(1u32 << len) {
            out.push((0..len).map(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// Every arrangement of up to three arcs with three free values, or four
/// free values of which at least two are turns.
fn shapes() -> Vec<Shape> {
    let conns = all_connectors();
    let mut out = Vec::new();
    for c in &conns {
        let s = Shape {
            signs: vec![],
            flush_start: false,
            flush_end: false,
            connectors: vec![Some(c.clone())],
        };
        let (t, e) = s.free_counts();
        if t + e == 3 || (t + e == 4 && t >= 2) {
            out.push(s);
        }
    }
    for arcs in 1..=3usize {
        for sign_mask in 0..(1u32 << arcs) {
            let signs: Vec<f64> = (0..arcs)
                .map(|i| if sign_mask & (1 << i) != 0 { -1.0 } else { 1.0 })
                .collect();
            for flush_start in [false, true] {
                for flush_end in [false, true] {
                    let slots = arcs + 1;
                    let ends = usize::from(!flush_start) + usize::from(!flush_end);
                    let free = |c: &Connector| c.len() - 1 + c.iter().filter(|f| **f).count();
                    let mut stack: Vec<(Vec<Option<Connector>>, usize)> = vec![(vec![], ends)];
                    for i in 0..slots {
                        let absent = (i == 0 && flush_start) || (i == arcs && flush_end);
                        let mut next = Vec::new();
                        for (partial, count) in stack {
                            if absent {
                                let mut p = partial.clone();
                                p.push(None);
                                next.push((p, count));
                            } else {
                                for c in conns.iter().filter(|c| count + free(c) <= 4) {
                                    let mut p = partial.clone();
                                    p.push(Some(c.clone()));
                                    next.push((p, count + free(c)));
                                }
                            }
                        }
                        stack = next;
                    }
                    let stack = stack.into_iter().map(|(p, _)| p);
                    for connectors in stack {
                        let s = Shape {
                            signs: signs.clone(),
                            flush_start,
                            flush_end,
                            connectors,
                        };
                        let (t, e) = s.free_counts();
                        if (t + e == 3 && t >= 1) || (t + e == 4 && t >= 2) {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}

static SHAPES: std::sync::OnceLock<Vec<Shape>> = std::sync::OnceLock::new();

/// Inclusive ranges for the θ-vertex counts of each arc.
type Windows = Vec<(usize, usize)>;

/// Candidate words for one shape: every choice of arc sizes inside the
/// windows whose pinned length fits under `bound` and whose pinned turning
/// leaves a heading gap the free turns can close.
#[allow(clippy::too_many_arguments)]
fn shape_candidates(
    shape: &Shape,
    windows: &Windows,
    bound: f64,
    k_max: usize,
    params: &Params,
    u: &Configuration,
    v: &Configuration,
) -> Vec<CandidateSpec> {
    let (free_t, _) = shape.free_counts();
    let arcs = shape.signs.len();
    let fixed_edges = shape.normal_connector_edges();
    let free_edges: usize = shape.connectors.iter().flatten().map(|c| c.iter().filter(|f| **f).count()).sum();
    let max_normals = ((bound / params.ell) + 1e-9).floor() as i64;
    let dh = wrap_angle(v.heading_angle() - u.heading_angle());
    let theta = params.theta;
    let n = params.n_sides as i64;
    let mut out = Vec::new();
    if arcs == 0 {
        if fixed_edges + free_edges > 0 && !turn_sums(dh, free_t, theta).is_empty() {
            out.push(shape.spec(&[], params));
        }
        return out;
    }
    // Every arc but the last is enumerated; the last arc's size is read off
    // the heading gap the free turns must close.
    let mut ks: Vec<usize> = windows.iter().map(|w| w.0.max(1)).collect();
    loop {
        let normals = fixed_edges as i64 + ks[..arcs - 1].iter().map(|&k| k as i64 - 1).sum::<i64>();
        if normals <= max_normals {
            let turned: f64 = shape.signs[..arcs - 1].iter().zip(&ks).map(|(s, &k)| s * k as f64 * theta).sum();
            let sign = shape.signs[arcs - 1];
            let centre = sign * wrap_angle(dh - turned) / theta;
            let (lo, hi) = windows[arcs - 1];
            let lo = lo.max(1) as i64;
            let hi = (hi as i64).min(max_normals - normals + 1);
            let first = (centre - free_t as f64 - 1e-6).ceil() as i64;
            let last = ((centre + free_t as f64 + 1e-6).floor() as i64).min(first + n - 1);
            for base in first..=last {
                let mut k = base + ((lo - base).max(0) + n - 1) / n * n;
                while k <= hi {
                    ks[arcs - 1] = k as usize;
                    let edges = ks.iter().map(|k| k - 1).sum::<usize>() + fixed_edges + free_edges;
                    let total: f64 = shape.signs.iter().zip(&ks).map(|(s, &k)| s * k as f64 * theta).sum();
                    let turns = ks.iter().sum::<usize>() + free_t;
                    if edges > 0 && turns <= k_max && !turn_sums(wrap_angle(dh - total), free_t, theta).is_empty() {
                        out.push(shape.spec(&ks, params));
                    }
                    k += n;
                }
            }
        }
        // next combination of the leading arcs, odometer style
        let mut i = 0;
        loop {
            if i + 1 >= arcs {
                return out;
            }
            ks[i] += 1;
            let normals = fixed_edges as i64 + ks[..arcs - 1].iter().map(|&k| k as i64 - 1).sum::<i64>();
            if ks[i] <= windows[i].1 && normals <= max_normals {
                break;
            }
            ks[i] = windows[i].0.max(1);
            i += 1;
        }
    }
}

/// Solved candidate kept for diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateDiagnostic {
    pub label: String,
    pub status: CandidateStatus,
    pub length: Option<f64>,
    pub type_word: Option<TypeWord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateStatus {
    Solved,
    Infeasible,
    Failed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCounts {
    pub tried: usize,
    pub solved: usize,
    pub infeasible: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub path: DiscretePath,
    pub type_word: TypeWord,
    pub length: f64,
    pub residual: f64,
    pub counts: CandidateCounts,
    /// The shortest solved candidates, best first.
    pub diagnostics: Vec<CandidateDiagnostic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanOptions {
    /// Cap on the number of vertices of a candidate; derived from an upper
    /// bound on the optimum when absent.
    pub k_max: Option<usize>,
    /// Above this many `ell`-lengths of upper bound, arc sizes are searched
    /// only near the smooth optimum's arcs.
    pub exhaustive_limit: f64,
    /// Run the rewriter on the best candidates with at most this many
    /// vertices.
    pub polish_limit: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            k_max: None,
            exhaustive_limit: 40.0,
            polish_limit: 60,
        }
    }
}

const DIAGNOSTICS_KEPT: usize = 32;
const POLISHED: usize = 3;
/// Smallest relative gain that counts as a polishing improvement. The
/// rewriter can shave about `tol_len` per edge by working inside the
/// validator's tolerance band; such gains are not kept.
const POLISH_GAIN: f64 = 1e-7;
const WINDOW: usize = 3;

/// Scale that makes the smooth unit-radius solution discretize into edges
/// of length `ell`.
fn radius(params: &Params) -> f64 {
    params.ell / (2.0 * (params.theta / 2.0).sin())
}

fn scaled(c: &Configuration, s: f64) -> Configuration {
    Configuration {
        point: c.point * s,
        heading: c.heading,
    }
}

/// The smooth words between `u` and `v` at the radius matching `params`.
fn smooth_words(u: &Configuration, v: &Configuration, params: &Params) -> Vec<SmoothPath> {
    let r = radius(params);
    dubins_words(&scaled(u, 1.0 / r), &scaled(v, 1.0 / r))
}

/// θ-discretization of a smooth word, mapped back to the `params` scale.
fn discretized(word: &SmoothPath, params: &Params) -> Option<DiscretePath> {
    let r = radius(params);
    let unit = discretize(word, params.theta).ok()?;
    let p = unit.map(|q| q * r, |h| h);
    let p = DiscretePath::new(p.start, p.end, p.vertices).ok()?;
    is_feasible(&p, params).then_some(p)
}

fn arc_windows(word: &SmoothPath, theta: f64) -> (Vec<f64>, Windows) {
    let mut signs = Vec::new();
    let mut windows = Vec::new();
    for seg in &word.segments {
        if let Segment::Arc { orientation, sweep } = seg {
            signs.push(orientation.sign());
            let c = sweep / theta;
            let lo = (c.floor() as i64 - WINDOW as i64).max(0) as usize;
            windows.push((lo, c.ceil() as usize + WINDOW));
        }
    }
    (signs, windows)
}

/// Sign patterns and size windows to search, derived from the smooth words.
fn guided_windows(words: &[SmoothPath], theta: f64) -> Vec<(Vec<f64>, Windows)> {
    let mut out: Vec<(Vec<f64>, Windows)> = Vec::new();
    for w in words {
        let (signs, windows) = arc_windows(w, theta);
        // Arcs whose window reaches zero may vanish.
        let n = signs.len();
        for mask in 0..(1u32 << n) {
            let drop = |i: usize| mask & (1 << i) != 0;
            if (0..n).any(|i| drop(i) && windows[i].0 > 0) {
                continue;
            }
            let s: Vec<f64> = (0..n).filter(|&i| !drop(i)).map(|i| signs[i]).collect();
            let wnd: Windows = (0..n).filter(|&i| !drop(i)).map(|i| windows[i]).collect();
            if !out.iter().any(|(a, b)| *a == s && *b == wnd) {
                out.push((s, wnd));
            }
        }
    }
    out
}

struct Solved {
    label: String,
    path: DiscretePath,
    length: f64,
    type_word: Option<TypeWord>,
    residual: f64,
}

/// Orders by length; lengths within a relative 1e-12 of the shortest in
/// their run count as ties and are ordered by type word, then label.
fn rank(solved: &mut [Solved]) {
    solved.sort_by(|a, b| a.length.total_cmp(&b.length));
    let key = |s: &Solved| {
        (
            s.type_word.is_none(),
            s.type_word.as_ref().map(|t| (t.len(), t.as_str().to_string())),
            s.label.clone(),
        )
    };
    let mut start = 0;
    while start < solved.len() {
        let scale = solved[start].length.abs().max(1.0);
        let end = start
            + solved[start..]
                .iter()
                .take_while(|s| s.length - solved[start].length <= 1e-12 * scale)
                .count();
        solved[start..end].sort_by_key(key);
        start = end;
    }
}

fn true_type(path: &DiscretePath, params: &Params) -> Option<TypeWord> {
    analyze(path, params).ok().map(|s| s.type_word)
}

/// Shortest feasible path from `u` to `v`.
pub fn plan(u: &Configuration, v: &Configuration, params: &Params, options: &PlanOptions) -> Result<PlanResult> {
    let scale = u.point.dist(v.point).max(1.0);
    if u.point.dist(v.point) <= 1e-12 * scale && u.heading.dist(v.heading) <= 1e-12 {
        let path = DiscretePath::new(*u, *v, vec![u.point])?;
        let type_word = true_type(&path, params).unwrap_or_else(|| TypeWord::from_letters(&[]));
        return Ok(PlanResult {
            path,
            type_word,
            length: 0.0,
            residual: 0.0,
            counts: CandidateCounts::default(),
            diagnostics: Vec::new(),
        });
    }

    let words = smooth_words(u, v, params);
    let seeds: Vec<DiscretePath> = words.iter().filter_map(|w| discretized(w, params)).collect();
    let bound = seeds
        .iter()
        .map(path_length)
        .fold(f64::INFINITY, f64::min);
    if !bound.is_finite() {
        return Err(Error::PlannerFailure("no feasible seed path".into()));
    }
    let bound = bound * (1.0 + 1e-9) + params.tol_len();
    let k_max = options
        .k_max
        .unwrap_or_else(|| (2.0 * bound / params.ell).ceil() as usize + 3);

    let clock = std::time::Instant::now();
    let all_shapes = SHAPES.get_or_init(shapes);
    let jobs: Vec<(&Shape, Windows)> = if bound / params.ell <= options.exhaustive_limit {
        all_shapes.iter().map(|s| (s, vec![(1, k_max); s.signs.len()])).collect()
    } else {
        guided_windows(&words, params.theta)
            .into_iter()
            .flat_map(|(signs, windows)| {
                all_shapes
                    .iter()
                    .filter(move |s| s.signs == signs)
                    .map(move |s| (s, windows.clone()))
            })
            .collect()
    };

    // Candidates are generated shape by shape and dropped once solved, so
    // only roots are kept in memory. Words come first; their best length
    // prunes the one-parameter families generated in the second pass.
    let mut tried = 0;
    let mut outcomes: Vec<(String, Vec<CandidateSpec>)> = Vec::new();
    for (shape, windows) in &jobs {
        let words: Vec<CandidateSpec> = shape_candidates(shape, windows, bound, k_max, params, u, v)
            .into_iter()
            .filter(|c| !is_family(c))
            .collect();
        tried += words.len();
        outcomes.par_extend(words.par_iter().filter_map(|c| {
            let roots = solve_roots(c, u, v, params);
            (!roots.is_empty()).then(|| (c.label(), roots))
        }));
    }
    log::debug!("planner: {tried} words ({:?})", clock.elapsed());
    let reach = u.point.dist(v.point);
    let incumbent = outcomes
        .iter()
        .flat_map(|(_, roots)| roots.iter().filter_map(|r| realize(r, u, v, params)).map(|p| path_length(&p)))
        .fold(bound, f64::min);

    let mut grids: Vec<(CandidateSpec, FamilySample)> = Vec::new();
    let mut families = 0;
    for (shape, windows) in &jobs {
        let batch: Vec<CandidateSpec> = shape_candidates(shape, windows, bound, k_max, params, u, v)
            .into_iter()
            .filter(|c| is_family(c) && c.length_bound(reach) <= incumbent * (1.0 + 1e-9))
            .collect();
        families += batch.len();
        grids.par_extend(
            batch
                .into_par_iter()
                .filter_map(|c| family_grid(&c, u, v, params).map(|g| (c, g))),
        );
    }
    tried += families;
    let incumbent = grids.iter().map(|g| g.1.length).fold(incumbent, f64::min);
    let cutoff = incumbent * (1.0 + FAMILY_MARGIN);
    log::debug!(
        "planner: {families} families, {} sampled, {} refined ({:?})",
        grids.len(),
        grids.iter().filter(|g| g.1.length <= cutoff).count(),
        clock.elapsed()
    );
    outcomes.par_extend(grids.into_par_iter().map(|(c, g)| {
        let roots = if g.length <= cutoff {
            family_refine(&c, &g, u, v, params).into_iter().collect()
        } else {
            vec![g.member]
        };
        (c.label(), roots)
    }));
    log::debug!("planner: families refined ({:?})", clock.elapsed());
    let mut counts = CandidateCounts {
        tried,
        failed: tried - outcomes.len(),
        ..Default::default()
    };
    let mut solved = Vec::new();
    for (label, roots) in outcomes {
        if roots.is_empty() {
            counts.failed += 1;
            continue;
        }
        let mut any = false;
        for r in roots {
            let residual = forward_construct(&r, u, v).residual_norm();
            if let Some(path) = realize(&r, u, v, params) {
                any = true;
                let length = path_length(&path);
                solved.push(Solved {
                    label: label.clone(),
                    type_word: None,
                    path,
                    length,
                    residual,
                });
            }
        }
        if any {
            counts.solved += 1;
        } else {
            counts.infeasible += 1;
        }
    }
    for (i, p) in seeds.into_iter().enumerate() {
        let length = path_length(&p);
        solved.push(Solved {
            label: format!("seed:{}", words[i].word()),
            path: p,
            length,
            residual: 0.0,
        type_word: None,
        });
    }
    solved.sort_by(|a, b| a.length.total_cmp(&b.length));
    solved.truncate(DIAGNOSTICS_KEPT.max(POLISHED));
    for s in solved.iter_mut() {
        s.type_word = true_type(&s.path, params).filter(|t| t.is_true_type());
    }

    // Polishing can only shorten, and it drives non-true types to true ones.
    // Candidates of a true type are already local optima of their word.
    let polish: Vec<Solved> = solved
        .iter()
        .take(POLISHED)
        .filter(|s| s.type_word.is_none() && s.path.vertices.len() <= options.polish_limit)
        .filter_map(|s| {
            let r = shorten(&s.path, params, 2_000).ok()?;
            let length = path_length(&r.path);
            let improved = length < s.length - POLISH_GAIN * scale || s.type_word.is_none();
            improved.then(|| Solved {
                label: format!("{}:polished", s.label),
                type_word: true_type(&r.path, params).filter(|t| t.is_true_type()),
                path: r.path,
                length,
                residual: s.residual,
            })
        })
        .collect();
    log::debug!("planner: polished ({:?})", clock.elapsed());
    for p in &polish {
        log::debug!("planner: polishing reached {} from {}", p.length, p.label);
    }
    solved.extend(polish);
    rank(&mut solved);

    let diagnostics = solved
        .iter()
        .take(DIAGNOSTICS_KEPT)
        .map(|s| CandidateDiagnostic {
            label: s.label.clone(),
            status: CandidateStatus::Solved,
            length: Some(s.length),
            type_word: s.type_word.clone(),
        })
        .collect();
    let best = solved
        .into_iter()
        .find(|s| s.type_word.is_some())
        .ok_or_else(|| Error::PlannerFailure("no true-type candidate".into()))?;
    Ok(PlanResult {
        type_word: best.type_word.unwrap(),
        length: best.length,
        residual: best.residual,
        path: best.path,
        counts,
        diagnostics,
    })
}

/// Outcome of the randomized search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub path: DiscretePath,
    pub length: f64,
    /// Restarts actually completed.
    pub restarts: usize,
    /// The budget ran out before every restart reached a fixed point.
    pub exhausted: bool,
}

/// Randomized check on the planner: start paths from the discretized smooth
/// words, perturbed vertex by vertex (keeping only feasible perturbations),
/// each shortened by the rewriter. Never consults the planner.
pub fn oracle_search(
    u: &Configuration,
    v: &Configuration,
    params: &Params,
    n_vertices_max: usize,
    restarts: usize,
    seed: u64,
) -> Result<OracleResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<DiscretePath> = smooth_words(u, v, params)
        .iter()
        .filter_map(|w| discretized(w, params))
        .filter(|p| p.vertices.len() <= n_vertices_max)
        .collect();
    if starts.is_empty() {
        return Err(Error::PlannerFailure("no feasible start path".into()));
    }
    let mut best: Option<DiscretePath> = None;
    let mut exhausted = false;
    let mut done = 0;
    for r in 0..restarts.max(starts.len()) {
        let mut p = starts[r % starts.len()].clone();
        if r >= starts.len() {
            p = perturb(&mut rng, &p, params);
        }
        let out = shorten(&p, params, 3_000)?;
        exhausted |= out.status == crate::rewrite::ShortenStatus::BudgetExhausted;
        done += 1;
        if best.as_ref().map_or(true, |b| path_length(&out.path) < path_length(b)) {
            best = Some(out.path);
        }
    }
    let path = best.expect("at least one restart");
    Ok(OracleResult {
        length: path_length(&path),
        path,
        restarts: done,
        exhausted,
    })
}

/// Random feasible displacement of interior vertices.
fn perturb<R: Rng>(rng: &mut R, path: &DiscretePath, params: &Params) -> DiscretePath {
    let mut p = path.clone();
    let sweeps = 3 * p.vertices.len();
    for _ in 0..sweeps {
        if p.vertices.len() < 3 {
            break;
        }
        let i = rng.gen_range(1..p.vertices.len() - 1);
        let r = params.ell * rng.gen_range(0.0..0.5f64).powi(2);
        let a = rng.gen_range(0.0..TAU);
        let mut q = p.clone();
        q.vertices[i] += Vec2::from_angle(a) * r;
        if is_feasible(&q, params) {
            p = q;
        }
    }
    p
}

/// One row of the convergence experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_sides: u32,
    pub plan: f64,
    pub discretized: f64,
    pub dubins: f64,
}

impl ConvergenceRow {
    pub fn relative_gap(&self) -> f64 {
        (self.dubins - self.plan) / self.dubins
    }
}

/// Plans `u -> v` with unit-radius parameters (`ell = 2 sin(π/n)`) for each
/// `n` and compares against the smooth optimum and its discretization.
pub fn convergence_experiment(u: &Configuration, v: &Configuration, n_values: &[u32]) -> Result<Vec<ConvergenceRow>> {
    let gamma = crate::smooth::dubins_solve(u, v)?;
    n_values
        .iter()
        .map(|&n| {
            let params = Params::unit_schedule(n)?;
            let disc = discretize(&gamma, params.theta)?;
            let plan = plan(u, v, &params, &PlanOptions::default())?;
            Ok(ConvergenceRow {
                n_sides: n,
                plan: plan.length,
                discretized: path_length(&disc),
                dubins: gamma.length(),
            })
        })
        .collect()
}
