//! Local moves that shorten a feasible path or, at equal length, reduce the
//! number of letters in its type.
//!
//! Every move is a one-parameter family `P(t)` with `P(0)` the input and the
//! length non-increasing in `t`. A line search takes the largest feasible `t`
//! up to the family's natural end (an edge collapsing, a vertex aligning), so
//! the constraint that stops the move ends up tight.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{circle_intersections, rotate_about, turn_angle, Point2, Vec2};
use crate::path::{
    is_feasible, path_length, vertex_turns, DiscretePath, Params, TOL_ANG,
};
use crate::typing::{analyze, canonicalize, find_forbidden_subtype, Orientation, TypeWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RewriteRule {
    LongLongShortcut,
    LongShortSlide,
    InflectionRotate,
    InflectionSlide,
    LongBreakSlide,
    TwoInflectionSlide,
    BridgeTranslate,
    AabElim,
    AaaaToAaa,
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Where a move acts. Vertex indices refer to the path the move was found on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Location {
    /// Drop vertices `first..=last`, joining their neighbours directly.
    Shortcut { first: usize, last: usize },
    /// Replace the corner at `vertex` by two points at distance `t` from it.
    Cut { vertex: usize },
    /// Translate vertices `first..=last` along the edge before `first`
    /// (backwards) or after `last` (forwards); the edge on the other side
    /// rotates about its far end, or about a break point `ell` from it.
    Translate {
        first: usize,
        last: usize,
        forward: bool,
        split: bool,
    },
    /// Rotate the vertices strictly between `pivot` and `end` (inclusive of
    /// `end`) about `pivot`; the edge leaving `end` away from the pivot
    /// stretches to its fixed far end, or to a break point `ell` from it.
    Rotate { pivot: usize, end: usize, split: bool },
    /// Equal-length four-bar motion of three same-direction arcs between
    /// vertices `first`, `second`, `third`, `last` of the canonical form.
    Circle {
        first: usize,
        second: usize,
        third: usize,
        last: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rewrite {
    pub rule: RewriteRule,
    pub location: Location,
    /// Move magnitude (arclength of the moving point; 1 for shortcuts).
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: RewriteRule,
    pub location: Location,
    pub step: f64,
    pub length_before: f64,
    pub length_after: f64,
    pub type_before: TypeWord,
    pub type_after: TypeWord,
}

pub type RewriteTrace = Vec<TraceEntry>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShortenStatus {
    FixedPoint,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortenResult {
    pub path: DiscretePath,
    pub trace: RewriteTrace,
    pub status: ShortenStatus,
}

pub const DEFAULT_BUDGET: usize = 10_000;

fn improve_eps(params: &Params) -> f64 {
    1e-10 * params.ell
}

fn step0(params: &Params) -> f64 {
    1e-2 * params.ell
}

fn step_min(params: &Params) -> f64 {
    1e-10 * params.ell
}

/// Feasibility that never lets a move push a constraint past its exact
/// bound (beyond roundoff), even though validation tolerates a little more.
/// Otherwise moves could gain length by spending the tolerance.
struct Checker {
    params: Params,
    allowance: f64,
}

const ROUNDOFF: f64 = 1e-13;

/// Largest constraint overshoot: turn excess over `theta`, turn-over-length
/// excess, and the relative shortfall below `ell` of edges that still count
/// as non-short.
fn stress(path: &DiscretePath, params: &Params) -> Option<f64> {
    let turns = vertex_turns(path).ok()?;
    let lens = path.edge_lengths();
    let short: Vec<bool> = lens.iter().map(|&l| l < params.ell - params.tol_len()).collect();
    let sign = |x: f64| {
        if x > TOL_ANG {
            1
        } else if x < -TOL_ANG {
            -1
        } else {
            0
        }
    };
    let mut g = f64::NEG_INFINITY;
    for t in &turns {
        g = g.max(t.abs() - params.theta);
    }
    for (i, &l) in lens.iter().enumerate() {
        if short[i] {
            if sign(turns[i]) * sign(turns[i + 1]) >= 0 {
                g = g.max((turns[i] + turns[i + 1]).abs() - params.theta);
            }
        } else {
            g = g.max((params.ell - l) / params.ell);
        }
    }
    Some(g)
}

impl Checker {
    fn new(path: &DiscretePath, params: &Params) -> Self {
        let g = stress(path, params).unwrap_or(0.0);
        Self {
            params: *params,
            allowance: g.max(0.0) + ROUNDOFF,
        }
    }

    fn ok(&self, path: &DiscretePath) -> bool {
        is_feasible(path, &self.params)
            && matches!(stress(path, &self.params), Some(g) if g <= self.allowance)
    }
}

fn with_vertices(path: &DiscretePath, mut vertices: Vec<Point2>, params: &Params) -> Option<DiscretePath> {
    let tol = params.tol_len();
    let first = *vertices.first()?;
    let last = *vertices.last()?;
    vertices.dedup_by(|b, a| a.dist(*b) <= tol);
    if vertices.len() == 1 && first != last {
        vertices.push(last);
    } else {
        *vertices.last_mut()? = last;
    }
    if vertices.iter().any(|p| !p.is_finite()) {
        return None;
    }
    Some(DiscretePath {
        start: path.start,
        end: path.end,
        vertices,
        canonical: false,
    })
}

fn dir(a: Point2, b: Point2) -> Option<Vec2> {
    (b - a).normalized().ok()
}

/// Signed angle from `a` to `b`.
fn angle_between(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// How far the move can go before its geometry stops making sense.
fn extent(path: &DiscretePath, loc: &Location, params: &Params) -> Option<f64> {
    let v = &path.vertices;
    let k = path.edge_count();
    match *loc {
        Location::Shortcut { first, last } => {
            (first >= 1 && first <= last && last < k).then_some(1.0)
        }
        Location::Cut { vertex } => {
            (vertex >= 1 && vertex < k).then(|| path.edge_length(vertex - 1).min(path.edge_length(vertex)))
        }
        Location::Translate { first, last, forward, split } => {
            if !(first >= 1 && first <= last && last < k) {
                return None;
            }
            let (moved, rotating) = if forward {
                (path.edge_length(last), path.edge_length(first - 1))
            } else {
                (path.edge_length(first - 1), path.edge_length(last))
            };
            if split && rotating <= params.ell + params.tol_len() {
                return None;
            }
            Some(moved)
        }
        Location::Rotate { pivot, end, split } => {
            let (fixed, edge_len) = if pivot < end {
                if end >= k {
                    return None;
                }
                (end + 1, path.edge_length(end))
            } else {
                if end == 0 || pivot > k || pivot <= end {
                    return None;
                }
                (end - 1, path.edge_length(end - 1))
            };
            if split && edge_len <= params.ell + params.tol_len() {
                return None;
            }
            let target = rotate_target(path, end, fixed, split, params)?;
            let r = v[end].dist(v[pivot]);
            let phi = angle_between(v[end] - v[pivot], target - v[pivot]);
            (r > 0.0).then_some(phi.abs() * r)
        }
        Location::Circle { .. } => Some(1.0),
    }
}

fn rotate_target(path: &DiscretePath, end: usize, fixed: usize, split: bool, params: &Params) -> Option<Point2> {
    let v = &path.vertices;
    if split {
        Some(v[fixed] + dir(v[fixed], v[end])? * params.ell)
    } else {
        Some(v[fixed])
    }
}

/// The move at parameter `t`.
fn build(path: &DiscretePath, loc: &Location, t: f64, params: &Params) -> Option<DiscretePath> {
    let v = &path.vertices;
    match *loc {
        Location::Shortcut { first, last } => {
            let mut w = v[..first].to_vec();
            w.extend_from_slice(&v[last + 1..]);
            with_vertices(path, w, params)
        }
        Location::Cut { vertex } => {
            let b = v[vertex];
            let a = b + dir(b, v[vertex - 1])? * t;
            let c = b + dir(b, v[vertex + 1])? * t;
            let mut w = v[..vertex].to_vec();
            w.push(a);
            w.push(c);
            w.extend_from_slice(&v[vertex + 1..]);
            with_vertices(path, w, params)
        }
        Location::Translate { first, last, forward, split } => {
            let shift = if forward {
                dir(v[last], v[last + 1])? * t
            } else {
                dir(v[first], v[first - 1])? * t
            };
            let mut w = Vec::with_capacity(v.len() + 1);
            for (i, &p) in v.iter().enumerate() {
                if forward && split && i == first {
                    w.push(v[first - 1] + dir(v[first - 1], p)? * params.ell);
                }
                w.push(if i >= first && i <= last { p + shift } else { p });
                if !forward && split && i == last {
                    w.push(v[last + 1] + dir(v[last + 1], p)? * params.ell);
                }
            }
            with_vertices(path, w, params)
        }
        Location::Rotate { pivot, end, split } => {
            let forward = pivot < end;
            let fixed = if forward { end + 1 } else { end - 1 };
            let target = rotate_target(path, end, fixed, split, params)?;
            let r = v[end].dist(v[pivot]);
            let phi_max = angle_between(v[end] - v[pivot], target - v[pivot]);
            let phi = phi_max.signum() * t / r;
            let (lo, hi) = if forward { (pivot + 1, end) } else { (end, pivot - 1) };
            let mut w = Vec::with_capacity(v.len() + 1);
            for (i, &p) in v.iter().enumerate() {
                if !forward && split && i == end {
                    w.push(target);
                }
                w.push(if i >= lo && i <= hi {
                    rotate_about(p, v[pivot], phi)
                } else {
                    p
                });
                if forward && split && i == end {
                    w.push(target);
                }
            }
            with_vertices(path, w, params)
        }
        Location::Circle { .. } => circle_move(path, loc, t),
    }
}

/// Largest feasible parameter in `(0, t_max]`, pushed to the feasibility
/// boundary by bisection.
fn line_search(
    t_max: f64,
    params: &Params,
    feasible: &dyn Fn(f64) -> bool,
) -> Option<f64> {
    if !(t_max > 0.0) {
        return None;
    }
    if feasible(t_max) {
        return Some(t_max);
    }
    if !feasible(step_min(params).min(0.5 * t_max)) {
        return None;
    }
    let mut t = step0(params).min(0.5 * t_max);
    while !feasible(t) {
        t *= 0.5;
        if t < step_min(params) {
            return None;
        }
    }
    let mut lo = t;
    let mut hi = t_max;
    while 2.0 * lo < hi {
        if feasible(2.0 * lo) {
            lo *= 2.0;
        } else {
            hi = 2.0 * lo;
            break;
        }
    }
    for _ in 0..60 {
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn type_len(path: &DiscretePath, params: &Params) -> usize {
    analyze(path, params).map_or(usize::MAX, |s| s.type_word.len())
}

fn name(path: &DiscretePath, loc: &Location, turns: &[f64]) -> RewriteRule {
    let sign = |x: f64| {
        if x > TOL_ANG {
            1
        } else if x < -TOL_ANG {
            -1
        } else {
            0
        }
    };
    let inflection = |e: usize| sign(turns[e]) * sign(turns[e + 1]) < 0;
    match *loc {
        Location::Shortcut { .. } | Location::Cut { .. } => RewriteRule::LongLongShortcut,
        Location::Translate { first, last, forward, split } => {
            let (slid, rotated) = if forward { (last, first - 1) } else { (first - 1, last) };
            if inflection(slid) && inflection(rotated) {
                RewriteRule::TwoInflectionSlide
            } else if inflection(slid) {
                RewriteRule::InflectionSlide
            } else if split {
                RewriteRule::LongBreakSlide
            } else if first == last {
                RewriteRule::LongShortSlide
            } else {
                let _ = path;
                RewriteRule::BridgeTranslate
            }
        }
        Location::Rotate { pivot, end, .. } => {
            if pivot.abs_diff(end) == 1 {
                RewriteRule::InflectionRotate
            } else {
                RewriteRule::AabElim
            }
        }
        Location::Circle { .. } => RewriteRule::AaaaToAaa,
    }
}

/// Candidate locations in priority order: shortcuts, then slides and
/// rotations, then equal-length transforms.
fn candidates(path: &DiscretePath) -> Vec<Location> {
    let k = path.edge_count();
    let mut out = Vec::new();
    for first in 1..k {
        for last in first..k {
            out.push(Location::Shortcut { first, last });
        }
    }
    for vertex in 1..k {
        out.push(Location::Cut { vertex });
    }
    for span in 0..k.saturating_sub(1) {
        for first in 1..k - span {
            let last = first + span;
            for forward in [false, true] {
                for split in [false, true] {
                    out.push(Location::Translate { first, last, forward, split });
                }
            }
        }
    }
    for pivot in 0..=k {
        for end in 0..=k {
            if pivot == end {
                continue;
            }
            for split in [false, true] {
                out.push(Location::Rotate { pivot, end, split });
            }
        }
    }
    out
}

/// Tries one location; returns the move if it improves.
fn evaluate(
    path: &DiscretePath,
    loc: &Location,
    params: &Params,
    checker: &Checker,
    base_len: f64,
    base_type: usize,
) -> Option<(f64, DiscretePath)> {
    let t_max = extent(path, loc, params)?;
    let feasible = |t: f64| build(path, loc, t, params).is_some_and(|p| checker.ok(&p));
    let t = line_search(t_max, params, &feasible)?;
    let out = build(path, loc, t, params)?;
    let len = path_length(&out);
    if len <= base_len - improve_eps(params) {
        return Some((t, out));
    }
    if len <= base_len + 1e-12 * base_len.max(1.0) && type_len(&out, params) < base_type {
        return Some((t, out));
    }
    None
}

/// The improving move with the largest decrease (earlier priority wins
/// ties), or `None` at a fixed point.
pub fn find_applicable(path: &DiscretePath, params: &Params) -> Option<Rewrite> {
    find_with_result(path, params).map(|(r, _)| r)
}

fn find_with_result(path: &DiscretePath, params: &Params) -> Option<(Rewrite, DiscretePath)> {
    if !is_feasible(path, params) {
        return None;
    }
    let turns = vertex_turns(path).ok()?;
    let checker = Checker::new(path, params);
    let base_len = path_length(path);
    let base_type = type_len(path, params);
    // Largest decrease wins; the priority order breaks ties. Taking the
    // first improving move instead lets tiny moves against a nearly tight
    // constraint starve the large ones.
    let mut best: Option<(f64, Rewrite, DiscretePath)> = None;
    for loc in candidates(path) {
        if let Some((step, out)) = evaluate(path, &loc, params, &checker, base_len, base_type) {
            let gain = base_len - path_length(&out);
            if best.as_ref().map_or(true, |b| gain > b.0 + improve_eps(params)) {
                let rule = name(path, &loc, &turns);
                best = Some((gain, Rewrite { rule, location: loc, step }, out));
            }
        }
    }
    if let Some((_, r, out)) = best {
        return Some((r, out));
    }
    let canon = canonicalize(path, params).ok()?;
    for loc in circle_candidates(&canon, params) {
        if let Some(out) = circle_apply(path, &loc, params) {
            return Some((
                Rewrite {
                    rule: RewriteRule::AaaaToAaa,
                    location: loc,
                    step: 1.0,
                },
                out,
            ));
        }
    }
    None
}

/// Rebuilds a move found by [`find_applicable`]. If the recorded step is
/// infeasible it is halved down to the minimum step.
pub fn apply(path: &DiscretePath, rewrite: &Rewrite, params: &Params) -> Result<DiscretePath> {
    if !is_feasible(path, params) {
        return Err(Error::Precondition("path is not feasible".into()));
    }
    if let Location::Circle { .. } = rewrite.location {
        return circle_apply(path, &rewrite.location, params)
            .ok_or_else(|| Error::Precondition("equal-length transform not applicable".into()));
    }
    let checker = Checker::new(path, params);
    extent(path, &rewrite.location, params)
        .ok_or_else(|| Error::Precondition("location does not fit the path".into()))?;
    let mut t = rewrite.step;
    while t >= step_min(params) {
        if let Some(p) = build(path, &rewrite.location, t, params) {
            if checker.ok(&p) {
                return Ok(p);
            }
        }
        t *= 0.5;
    }
    Err(Error::Precondition(format!(
        "{} is not applicable at {:?}",
        rewrite.rule, rewrite.location
    )))
}

/// Removes straight vertices one at a time while that keeps the path
/// feasible. Length changes only by rounding.
pub fn drop_straight_vertices(path: &DiscretePath, params: &Params) -> DiscretePath {
    let mut p = path.clone();
    let mut i = 1;
    while i < p.edge_count() {
        let turn = turn_angle(p.vertices[i] - p.vertices[i - 1], p.vertices[i + 1] - p.vertices[i]);
        if matches!(turn, Ok(t) if t.abs() <= TOL_ANG) {
            let mut q = p.clone();
            q.vertices.remove(i);
            if is_feasible(&q, params) {
                p = q;
                continue;
            }
        }
        i += 1;
    }
    p
}

/// Applies improving moves until none is left or the budget runs out.
pub fn shorten(path: &DiscretePath, params: &Params, budget: usize) -> Result<ShortenResult> {
    if !is_feasible(path, params) {
        return Err(Error::Precondition("path is not feasible".into()));
    }
    let mut current = drop_straight_vertices(path, params);
    let mut trace = Vec::new();
    let mut current_type = analyze(&current, params)?.type_word;
    for _ in 0..budget {
        let Some((rewrite, next)) = find_with_result(&current, params) else {
            return Ok(ShortenResult {
                path: current,
                trace,
                status: ShortenStatus::FixedPoint,
            });
        };
        let next = drop_straight_vertices(&next, params);
        let next_type = analyze(&next, params)?.type_word;
        log::debug!(
            "{} at {:?}: {} -> {} ({} -> {})",
            rewrite.rule,
            rewrite.location,
            path_length(&current),
            path_length(&next),
            current_type,
            next_type
        );
        trace.push(TraceEntry {
            rule: rewrite.rule,
            location: rewrite.location,
            step: rewrite.step,
            length_before: path_length(&current),
            length_after: path_length(&next),
            type_before: current_type,
            type_after: next_type.clone(),
        });
        current = next;
        current_type = next_type;
    }
    let status = if find_applicable(&current, params).is_some() {
        ShortenStatus::BudgetExhausted
    } else {
        ShortenStatus::FixedPoint
    };
    Ok(ShortenResult {
        path: current,
        trace,
        status,
    })
}

/// True when a shortened path has reached a true type.
pub fn is_clean(path: &DiscretePath, params: &Params) -> bool {
    analyze(path, params).is_ok_and(|s| find_forbidden_subtype(&s.type_word).is_none())
}

// ---------------------------------------------------------------------------
// Equal-length transform for runs of same-direction arcs.

/// Sites where three consecutive arcs turn the same way and meet at path
/// vertices. Indices refer to the canonical form of the path.
fn circle_candidates(path: &DiscretePath, params: &Params) -> Vec<Location> {
    circle_sites_of(path, params)
}

/// Locations for the equal-length arc transform on `path` (indices into its
/// canonical form).
pub fn circle_sites(path: &DiscretePath, params: &Params) -> Vec<Location> {
    canonicalize(path, params).map_or_else(|_| Vec::new(), |c| circle_sites_of(&c, params))
}

fn circle_sites_of(path: &DiscretePath, params: &Params) -> Vec<Location> {
    let Ok(s) = analyze(path, params) else {
        return Vec::new();
    };
    let stations: Vec<f64> = std::iter::once(0.0)
        .chain(path.edge_lengths().into_iter().scan(0.0, |a, l| {
            *a += l;
            Some(*a)
        }))
        .collect();
    let vertex_at = |st: f64| {
        stations
            .iter()
            .position(|&x| (x - st).abs() <= params.tol_len())
    };
    let tol = params.tol_len();
    let mut out = Vec::new();
    for w in s.arcs.windows(3) {
        let o: Orientation = w[0].orientation;
        if w[1].orientation != o || w[2].orientation != o {
            continue;
        }
        if (w[0].end_station - w[1].start_station).abs() > tol
            || (w[1].end_station - w[2].start_station).abs() > tol
        {
            continue;
        }
        let ids = (
            vertex_at(w[0].start_station),
            vertex_at(w[1].start_station),
            vertex_at(w[2].start_station),
            vertex_at(w[2].end_station),
        );
        if let (Some(first), Some(second), Some(third), Some(last)) = ids {
            if first < second && second < third && third < last {
                out.push(Location::Circle { first, second, third, last });
            }
        }
    }
    out
}

/// Four-bar motion of three rigid pieces: the last piece rotates about its
/// end by `eps`, the first about its start, and the middle piece keeps both
/// joint distances. All edge lengths are preserved.
fn circle_move(path: &DiscretePath, loc: &Location, eps: f64) -> Option<DiscretePath> {
    let Location::Circle { first, second, third, last } = *loc else {
        return None;
    };
    let v = &path.vertices;
    let (u, b, c, w) = (v[first], v[second], v[third], v[last]);
    let nc = rotate_about(c, w, eps);
    let cands = circle_intersections(u, u.dist(b), nc, c.dist(b))?;
    let nb = if cands[0].dist(b) <= cands[1].dist(b) {
        cands[0]
    } else {
        cands[1]
    };
    let rot1 = angle_between(b - u, nb - u);
    let rot2 = angle_between(c - b, nc - nb);
    let mut out = v.clone();
    for i in first + 1..=second {
        out[i] = rotate_about(v[i], u, rot1);
    }
    out[second] = nb;
    for i in second + 1..third {
        out[i] = rotate_about(v[i] - b + nb, nb, rot2);
    }
    for i in third..last {
        out[i] = rotate_about(v[i], w, eps);
    }
    Some(DiscretePath {
        start: path.start,
        end: path.end,
        vertices: out,
        canonical: false,
    })
}

/// Sweeps the four-bar motion in both directions until a constraint
/// becomes tight; succeeds if the type got shorter.
fn circle_apply(path: &DiscretePath, loc: &Location, params: &Params) -> Option<DiscretePath> {
    let canon = canonicalize(path, params).ok()?;
    let checker = Checker::new(&canon, params);
    let base_len = path_length(path);
    let base_type = type_len(path, params);
    for sign in [1.0, -1.0] {
        let f = |e: f64| circle_move(&canon, loc, sign * e).filter(|p| checker.ok(p));
        let feasible = |e: f64| f(e).is_some();
        let Some(e) = line_search(params.theta, params, &feasible) else {
            continue;
        };
        let out = f(e)?;
        let len = path_length(&out);
        if (len - base_len).abs() <= 1e-12 * base_len.max(1.0) && type_len(&out, params) < base_type {
            return Some(out);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Configuration;

    fn build_path(start: Configuration, turn_u: f64, edges: &[(f64, f64)]) -> DiscretePath {
        let mut h = start.heading_angle() + turn_u;
        let mut p = start.point;
        let mut v = vec![p];
        for &(len, turn) in edges {
            p = p + Vec2::from_angle(h) * len;
            v.push(p);
            h += turn;
        }
        DiscretePath::new(start, Configuration::from_angle(p.x, p.y, h), v).unwrap()
    }

    fn origin() -> Configuration {
        Configuration::from_angle(0.0, 0.0, 0.0)
    }

    #[test]
    fn long_long_corner_is_cut() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let p = build_path(origin(), 0.0, &[(3.0, 0.5 * th), (3.0, -0.5 * th)]);
        let r = find_applicable(&p, &params).unwrap();
        assert_eq!(r.rule, RewriteRule::LongLongShortcut);
        let q = apply(&p, &r, &params).unwrap();
        assert!(is_feasible(&q, &params));
        assert!(path_length(&q) < path_length(&p) - 1e-10);
    }

    #[test]
    fn straight_path_is_fixed_point() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let p = build_path(origin(), 0.0, &[(4.0, 0.0)]);
        assert!(find_applicable(&p, &params).is_none());
        let r = shorten(&p, &params, 10).unwrap();
        assert_eq!(r.status, ShortenStatus::FixedPoint);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn polygon_arc_is_fixed_point() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let th = params.theta;
        let edges: Vec<(f64, f64)> = (0..3).map(|_| (1.0, th)).collect();
        let p = build_path(Configuration::from_angle(0.0, 0.0, 0.0), th, &edges);
        let r = find_applicable(&p, &params);
        assert!(r.is_none(), "{r:?} {:?}", r.map(|r| path_length(&apply(&p, &r, &params).unwrap())));
    }
}
