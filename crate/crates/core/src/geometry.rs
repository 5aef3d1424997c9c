//! Planar primitives shared by every other module.
//!
//! Angles are radians, counterclockwise (left) positive.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cross products below this (on normalized directions) mean parallel lines.
pub const TOL_PARALLEL: f64 = 1e-12;
/// Allowed deviation of a heading from unit length.
pub const TOL_UNIT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// Points and displacements share one representation.
pub type Point2 = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` from the +x axis.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Direction angle in (-π, π].
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Left-hand perpendicular.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Result<Vec2> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateGeometry(format!(
                "cannot normalize vector ({}, {})",
                self.x, self.y
            )));
        }
        Ok(self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Maps any angle into (-π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Signed turn from `incoming` to `outgoing`, left positive, in (-π, π].
pub fn turn_angle(incoming: Vec2, outgoing: Vec2) -> Result<f64> {
    if incoming.norm_sq() == 0.0 || outgoing.norm_sq() == 0.0 {
        return Err(Error::DegenerateGeometry("turn of a zero vector".into()));
    }
    let a = incoming.cross(outgoing).atan2(incoming.dot(outgoing));
    // atan2 returns -π for the exact reversal with a negative-zero cross.
    Ok(if a <= -PI { PI } else { a })
}

pub fn rotate(v: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Rotates `p` about `center`.
pub fn rotate_about(p: Point2, center: Point2, angle: f64) -> Point2 {
    center + rotate(p - center, angle)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Intersection {
    Point(Point2),
    Parallel,
}

/// Intersection of the lines `p1 + s·d1` and `p2 + t·d2`.
pub fn line_intersection(p1: Point2, d1: Vec2, p2: Point2, d2: Vec2) -> Result<Intersection> {
    let n1 = d1.norm();
    let n2 = d2.norm();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::DegenerateGeometry("line with zero direction".into()));
    }
    let denom = d1.cross(d2);
    if (denom / (n1 * n2)).abs() < TOL_PARALLEL {
        return Ok(Intersection::Parallel);
    }
    let s = (p2 - p1).cross(d2) / denom;
    Ok(Intersection::Point(p1 + d1 * s))
}

/// Distance from `p` to the line through `a` with direction `d`.
pub fn point_line_distance(p: Point2, a: Point2, d: Vec2) -> f64 {
    (p - a).cross(d).abs() / d.norm()
}

/// Intersections of two circles, ordered by the sign of the offset from the
/// center line (left of `c0 -> c1` first).
pub fn circle_intersections(c0: Point2, r0: f64, c1: Point2, r1: f64) -> Option<[Point2; 2]> {
    let d = c0.dist(c1);
    if d == 0.0 || d > r0 + r1 || d < (r0 - r1).abs() {
        return None;
    }
    let a = (r0 * r0 - r1 * r1 + d * d) / (2.0 * d);
    let h = (r0 * r0 - a * a).max(0.0).sqrt();
    let dir = (c1 - c0) * (1.0 / d);
    let mid = c0 + dir * a;
    Some([mid + dir.perp() * h, mid - dir.perp() * h])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn turn_examples() {
        let e = Vec2::new(1.0, 0.0);
        assert_eq!(turn_angle(e, e).unwrap(), 0.0);
        assert!(close(turn_angle(e, Vec2::new(0.0, 1.0)).unwrap(), PI / 2.0));
        let th = PI / 6.0;
        let d = Vec2::new((-th).cos(), (-th).sin());
        assert!(close(turn_angle(e, d).unwrap(), -th));
        assert!(close(turn_angle(e, -e).unwrap(), PI));
    }

    #[test]
    fn turn_of_zero_vector_is_degenerate() {
        let err = turn_angle(Vec2::ZERO, Vec2::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateGeometry(_)));
    }

    #[test]
    fn rotate_examples() {
        let r = rotate(Vec2::new(1.0, 0.0), PI / 2.0);
        assert!(close(r.x, 0.0) && close(r.y, 1.0));
        let r = rotate(Vec2::new(0.0, 1.0), -PI / 2.0);
        assert!(close(r.x, 1.0) && close(r.y, 0.0));
        let r = rotate(Vec2::new(1.0, 0.0), TAU);
        assert!(close(r.x, 1.0) && close(r.y, 0.0));
    }

    #[test]
    fn intersection_examples() {
        let o = Vec2::ZERO;
        match line_intersection(o, Vec2::new(1.0, 0.0), o, Vec2::new(0.0, 1.0)).unwrap() {
            Intersection::Point(p) => assert!(close(p.x, 0.0) && close(p.y, 0.0)),
            Intersection::Parallel => panic!(),
        }
        let h = Vec2::new(1.0, 0.0);
        assert_eq!(
            line_intersection(o, h, Vec2::new(0.0, 1.0), h).unwrap(),
            Intersection::Parallel
        );
        match line_intersection(o, Vec2::new(1.0, 1.0), Vec2::new(2.0, 0.0), Vec2::new(0.0, 1.0))
            .unwrap()
        {
            Intersection::Point(p) => assert!(close(p.x, 2.0) && close(p.y, 2.0)),
            Intersection::Parallel => panic!(),
        }
    }

    #[test]
    fn wrap_range() {
        assert!(close(wrap_angle(3.0 * PI), PI));
        assert!(close(wrap_angle(-PI), PI));
        assert!(close(wrap_angle(0.5), 0.5));
    }

    #[test]
    fn circles() {
        let [a, b] = circle_intersections(Vec2::ZERO, 1.0, Vec2::new(1.0, 0.0), 1.0).unwrap();
        assert!(close(a.x, 0.5) && a.y > 0.0);
        assert!(close(b.x, 0.5) && b.y < 0.0);
        assert!(circle_intersections(Vec2::ZERO, 1.0, Vec2::new(3.0, 0.0), 1.0).is_none());
    }
}
