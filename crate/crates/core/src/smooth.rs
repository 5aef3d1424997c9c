//! Unit-radius arc/line curves, their θ-discretization, and the classical
//! six-word Dubins solver.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rotate, rotate_about, Point2, Vec2};
use crate::path::{Configuration, DiscretePath, Params};
use crate::typing::Orientation;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    Arc { orientation: Orientation, sweep: f64 },
    Line { length: f64 },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Arc { sweep, .. } => sweep,
            Segment::Line { length } => length,
        }
    }

    fn advance(&self, p: Point2, h: Vec2, s: f64) -> (Point2, Vec2) {
        match *self {
            Segment::Line { .. } => (p + h * s, h),
            Segment::Arc { orientation, .. } => {
                let sg = orientation.sign();
                let center = p + h.perp() * sg;
                (rotate_about(p, center, sg * s), rotate(h, sg * s))
            }
        }
    }
}

/// Arclength-parameterized word of unit-radius arcs and segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothPath {
    pub start: Configuration,
    pub segments: Vec<Segment>,
}

impl SmoothPath {
    pub fn new(start: Configuration, segments: Vec<Segment>) -> Result<Self> {
        for s in &segments {
            if !(s.length() > 0.0) || !s.length().is_finite() {
                return Err(Error::Precondition(format!(
                    "segment length must be positive, got {}",
                    s.length()
                )));
            }
        }
        Ok(Self { start, segments })
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Point and unit tangent at arclength `t`.
    pub fn eval(&self, t: f64) -> Result<(Point2, Vec2)> {
        let total = self.length();
        if !(t >= 0.0 && t <= total) {
            return Err(Error::IndexOutOfRange {
                index: 0,
                valid: format!("arclength {t} outside [0, {total}]"),
            });
        }
        let mut p = self.start.point;
        let mut h = self.start.heading;
        let mut rest = t;
        for (i, seg) in self.segments.iter().enumerate() {
            let len = seg.length();
            if rest <= len || i + 1 == self.segments.len() {
                return Ok(seg.advance(p, h, rest.min(len)));
            }
            (p, h) = seg.advance(p, h, len);
            rest -= len;
        }
        Ok((p, h))
    }

    pub fn end(&self) -> Configuration {
        let (p, h) = self.eval(self.length()).expect("end of path");
        Configuration { point: p, heading: h }
    }

    /// Word such as "LSR".
    pub fn word(&self) -> String {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Arc { orientation: Orientation::Left, .. } => 'L',
                Segment::Arc { orientation: Orientation::Right, .. } => 'R',
                Segment::Line { .. } => 'S',
            })
            .collect()
    }
}

fn check_pair(gamma: &SmoothPath, t: f64, s: f64) -> Result<()> {
    if !(t < s && s < t + PI && t >= 0.0 && s <= gamma.length()) {
        return Err(Error::Precondition(format!(
            "need 0 <= t < s < t + pi <= |gamma|, got t = {t}, s = {s}"
        )));
    }
    Ok(())
}

/// Chord lower bound `|γ(s) − γ(t)| ≥ 2 sin((s − t)/2)`.
pub fn chord_bound_check(gamma: &SmoothPath, t: f64, s: f64) -> Result<bool> {
    check_pair(gamma, t, s)?;
    let (a, _) = gamma.eval(t)?;
    let (b, _) = gamma.eval(s)?;
    Ok(a.dist(b) >= 2.0 * ((s - t) / 2.0).sin() - 1e-9)
}

/// Angle between `γ'(t)` and the chord to `γ(s)` is at most `(s − t)/2`.
pub fn angle_bound_check(gamma: &SmoothPath, t: f64, s: f64) -> Result<bool> {
    check_pair(gamma, t, s)?;
    let (a, h) = gamma.eval(t)?;
    let (b, _) = gamma.eval(s)?;
    let c = b - a;
    let angle = h.cross(c).abs().atan2(h.dot(c));
    Ok(angle <= (s - t) / 2.0 + 1e-9)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationPlan {
    pub theta: f64,
    pub m: usize,
    pub delta: f64,
    pub breakpoints: Vec<f64>,
}

/// Remainders below this count as zero; a half-gap that small would collapse
/// onto its neighbour vertex.
const DELTA_EPS: f64 = 1e-9;

pub fn discretization_plan(total: f64, theta: f64) -> Result<DiscretizationPlan> {
    if !(theta < total) {
        return Err(Error::Precondition(format!(
            "theta = {theta} must be below the curve length {total}"
        )));
    }
    let mut m = (total / theta).floor() as usize;
    let mut delta = total - m as f64 * theta;
    if delta > theta - DELTA_EPS {
        m += 1;
        delta = 0.0;
    }
    let breakpoints = if delta < DELTA_EPS {
        delta = 0.0;
        let mut b: Vec<f64> = (0..m).map(|i| i as f64 * theta).collect();
        b.push(total);
        b
    } else {
        let mut b = vec![0.0];
        b.extend((0..=m).map(|i| delta / 2.0 + i as f64 * theta));
        b.push(total);
        b
    };
    Ok(DiscretizationPlan {
        theta,
        m,
        delta,
        breakpoints,
    })
}

/// Parameters under which a θ-discretization is feasible.
pub fn discretization_params(theta: f64) -> Result<Params> {
    Params::new(theta, 2.0 * (theta / 2.0).sin())
}

/// Polygon through the curve points at the θ-discretization breakpoints.
pub fn discretize(gamma: &SmoothPath, theta: f64) -> Result<DiscretePath> {
    discretization_params(theta)?;
    let plan = discretization_plan(gamma.length(), theta)?;
    let vertices = plan
        .breakpoints
        .iter()
        .map(|&t| gamma.eval(t).map(|(p, _)| p))
        .collect::<Result<Vec<_>>>()?;
    DiscretePath::new(gamma.start, gamma.end(), vertices)
}

fn mod2pi(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if TAU - r < 1e-12 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Word {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Rlr,
    Lrl,
}

impl Word {
    const ALL: [Word; 6] = [Word::Lsl, Word::Rsr, Word::Lsr, Word::Rsl, Word::Rlr, Word::Lrl];

    fn letters(self) -> [char; 3] {
        match self {
            Word::Lsl => ['L', 'S', 'L'],
            Word::Rsr => ['R', 'S', 'R'],
            Word::Lsr => ['L', 'S', 'R'],
            Word::Rsl => ['R', 'S', 'L'],
            Word::Rlr => ['R', 'L', 'R'],
            Word::Lrl => ['L', 'R', 'L'],
        }
    }

    /// Segment parameters in the frame where the start-goal line is the
    /// x-axis. `a`, `b` are the headings in that frame, `d` the distance.
    fn solve(self, a: f64, b: f64, d: f64) -> Option<[f64; 3]> {
        let (sa, ca, sb, cb) = (a.sin(), a.cos(), b.sin(), b.cos());
        let cab = (a - b).cos();
        match self {
            Word::Lsl => {
                let p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb);
                if p2 < -1e-10 {
                    return None;
                }
                let tmp = (cb - ca).atan2(d + sa - sb);
                Some([mod2pi(tmp - a), p2.max(0.0).sqrt(), mod2pi(b - tmp)])
            }
            Word::Rsr => {
                let p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa);
                if p2 < -1e-10 {
                    return None;
                }
                let tmp = (ca - cb).atan2(d - sa + sb);
                Some([mod2pi(a - tmp), p2.max(0.0).sqrt(), mod2pi(tmp - b)])
            }
            Word::Lsr => {
                let p2 = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb);
                if p2 < -1e-10 {
                    return None;
                }
                let p = p2.max(0.0).sqrt();
                let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
                Some([mod2pi(tmp - a), p, mod2pi(tmp - b)])
            }
            Word::Rsl => {
                let p2 = d * d - 2.0 + 2.0 * cab - 2.0 * d * (sa + sb);
                if p2 < -1e-10 {
                    return None;
                }
                let p = p2.max(0.0).sqrt();
                let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
                Some([mod2pi(a - tmp), p, mod2pi(b - tmp)])
            }
            Word::Rlr => {
                let c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
                if c.abs() > 1.0 + 1e-10 {
                    return None;
                }
                let p = mod2pi(TAU - c.clamp(-1.0, 1.0).acos());
                let t = mod2pi(a - (ca - cb).atan2(d - sa + sb) + p / 2.0);
                Some([t, p, mod2pi(a - b - t + p)])
            }
            Word::Lrl => {
                let c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
                if c.abs() > 1.0 + 1e-10 {
                    return None;
                }
                let p = mod2pi(TAU - c.clamp(-1.0, 1.0).acos());
                let t = mod2pi(-a - (ca - cb).atan2(d + sa - sb) + p / 2.0);
                Some([t, p, mod2pi(b - a - t + p)])
            }
        }
    }
}

fn build(start: Configuration, letters: [char; 3], params: [f64; 3]) -> SmoothPath {
    let segments = letters
        .iter()
        .zip(params)
        .filter(|(_, x)| *x > 1e-12)
        .map(|(&c, x)| match c {
            'L' => Segment::Arc { orientation: Orientation::Left, sweep: x },
            'R' => Segment::Arc { orientation: Orientation::Right, sweep: x },
            _ => Segment::Line { length: x },
        })
        .collect();
    SmoothPath { start, segments }
}

/// Every one of the six classical words that reaches `v`, each checked
/// against the goal configuration.
pub fn dubins_words(u: &Configuration, v: &Configuration) -> Vec<SmoothPath> {
    let delta = v.point - u.point;
    let d = delta.norm();
    let frame = if d > 0.0 { delta.angle() } else { 0.0 };
    let a = mod2pi(u.heading_angle() - frame);
    let b = mod2pi(v.heading_angle() - frame);
    let scale = 1.0 + d;
    Word::ALL
        .iter()
        .filter_map(|w| w.solve(a, b, d).map(|p| build(*u, w.letters(), p)))
        .filter(|c| {
            let end = c.end();
            end.point.dist(v.point) <= 1e-8 * scale && end.heading.dist(v.heading) <= 1e-8
        })
        .collect()
}

/// Shortest unit-radius path among the six classical words.
pub fn dubins_solve(u: &Configuration, v: &Configuration) -> Result<SmoothPath> {
    dubins_words(u, v)
        .into_iter()
        .min_by(|x, y| x.length().total_cmp(&y.length()))
        .ok_or_else(|| Error::Internal("no Dubins word reaches the goal".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::validate;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn origin() -> Configuration {
        Configuration::from_angle(0.0, 0.0, 0.0)
    }

    #[test]
    fn eval_line_and_arc() {
        let g = SmoothPath::new(origin(), vec![Segment::Line { length: 5.0 }]).unwrap();
        let (p, h) = g.eval(3.0).unwrap();
        assert!(close(p.x, 3.0, 1e-15) && close(h.x, 1.0, 1e-15));
        assert!(g.eval(5.5).is_err());

        let g = SmoothPath::new(
            origin(),
            vec![Segment::Arc { orientation: Orientation::Left, sweep: TAU }],
        )
        .unwrap();
        let (p, h) = g.eval(PI).unwrap();
        assert!(close(p.x, 0.0, 1e-12) && close(p.y, 2.0, 1e-12));
        assert!(close(h.x, -1.0, 1e-12));
    }

    #[test]
    fn joints_are_continuous() {
        let g = SmoothPath::new(
            origin(),
            vec![
                Segment::Arc { orientation: Orientation::Right, sweep: 1.0 },
                Segment::Line { length: 2.0 },
            ],
        )
        .unwrap();
        let (p0, h0) = g.eval(1.0).unwrap();
        let (p1, h1) = g.eval(1.0 + 1e-13).unwrap();
        assert!(p0.dist(p1) < 1e-12 && h0.dist(h1) < 1e-12);
    }

    #[test]
    fn bound_checks_on_circle_and_line() {
        let th = PI / 5.0;
        let c = SmoothPath::new(
            origin(),
            vec![Segment::Arc { orientation: Orientation::Left, sweep: 3.0 }],
        )
        .unwrap();
        let (a, _) = c.eval(0.5).unwrap();
        let (b, _) = c.eval(0.5 + th).unwrap();
        assert!(close(a.dist(b), 2.0 * (th / 2.0).sin(), 1e-12));
        assert!(chord_bound_check(&c, 0.5, 0.5 + th).unwrap());
        assert!(angle_bound_check(&c, 0.5, 0.5 + th).unwrap());
        let l = SmoothPath::new(origin(), vec![Segment::Line { length: 4.0 }]).unwrap();
        assert!(chord_bound_check(&l, 0.0, 3.0).unwrap());
        assert!(angle_bound_check(&l, 0.0, 3.0).unwrap());
        assert!(chord_bound_check(&l, 2.0, 1.0).is_err());
    }

    #[test]
    fn discretize_line() {
        let th = PI / 3.0;
        let g = SmoothPath::new(origin(), vec![Segment::Line { length: 5.0 }]).unwrap();
        let plan = discretization_plan(5.0, th).unwrap();
        assert_eq!(plan.m, 4);
        assert!(close(plan.delta, 5.0 - 4.0 * th, 1e-12));
        assert_eq!(plan.breakpoints.len(), plan.m + 3);
        let p = discretize(&g, th).unwrap();
        let params = discretization_params(th).unwrap();
        assert!(validate(&p, &params).unwrap().is_empty());
    }

    #[test]
    fn discretize_circle_is_polygon() {
        for n in [8u32, 12, 360] {
            let th = TAU / n as f64;
            let g = SmoothPath::new(
                origin(),
                vec![Segment::Arc { orientation: Orientation::Left, sweep: TAU }],
            )
            .unwrap();
            let plan = discretization_plan(TAU, th).unwrap();
            assert_eq!(plan.delta, 0.0);
            assert_eq!(plan.breakpoints.len(), n as usize + 1);
            let p = discretize(&g, th).unwrap();
            let side = 2.0 * (PI / n as f64).sin();
            for l in p.edge_lengths() {
                assert!(close(l, side, 1e-12));
            }
            assert!(validate(&p, &discretization_params(th).unwrap()).unwrap().is_empty());
        }
    }

    #[test]
    fn discretize_rejects_short_curve() {
        let g = SmoothPath::new(origin(), vec![Segment::Line { length: 0.5 }]).unwrap();
        assert!(matches!(discretize(&g, 1.0), Err(Error::Precondition(_)) | Err(Error::InvalidParams(_))));
    }

    #[test]
    fn dubins_straight() {
        let v = Configuration::from_angle(10.0, 0.0, 0.0);
        let g = dubins_solve(&origin(), &v).unwrap();
        assert!(close(g.length(), 10.0, 1e-12));
        assert_eq!(g.word(), "S");
    }

    #[test]
    fn dubins_parallel_offset() {
        let v = Configuration::from_angle(0.0, 4.0, 0.0);
        let g = dubins_solve(&origin(), &v).unwrap();
        // The left circle at the start touches the right circle at the goal,
        // so the straight part of the LSR word vanishes: two half turns.
        assert_eq!(g.word(), "LR");
        assert!(close(g.length(), TAU, 1e-10));
    }
}
