//! Random generators for feasible discrete paths, smooth curves and
//! boundary configurations. Used by tests, the oracle search and the CLI.

use std::f64::consts::TAU;

use rand::Rng;

use crate::geometry::Vec2;
use crate::path::{is_feasible, Configuration, DiscretePath, Params};
use crate::smooth::{Segment, SmoothPath};
use crate::typing::Orientation;

fn random_turn<R: Rng + ?Sized>(rng: &mut R, theta: f64) -> f64 {
    match rng.gen_range(0..10) {
        0..=3 => {
            if rng.gen_bool(0.5) {
                theta
            } else {
                -theta
            }
        }
        4 => 0.0,
        _ => rng.gen_range(-theta..=theta),
    }
}

fn random_edge<R: Rng + ?Sized>(rng: &mut R, ell: f64, allow_short: bool) -> f64 {
    match rng.gen_range(0..10) {
        0..=2 if allow_short => rng.gen_range(0.2..0.95) * ell,
        3..=5 => ell,
        _ => rng.gen_range(1.05..3.5) * ell,
    }
}

/// Largest turn after a short edge that keeps the turn-over-length bound.
fn fit_after_short(prev: f64, next: f64, theta: f64) -> f64 {
    if prev * next > 0.0 && (prev + next).abs() > theta {
        next.signum() * (theta - prev.abs())
    } else {
        next
    }
}

/// A random feasible path with `edges` edges, starting at `start`.
pub fn random_feasible_path<R: Rng + ?Sized>(
    rng: &mut R,
    params: &Params,
    start: Configuration,
    edges: usize,
) -> DiscretePath {
    let theta = params.theta;
    loop {
        let mut h = start.heading_angle();
        let mut p = start.point;
        let mut vertices = vec![p];
        let mut prev_turn = random_turn(rng, theta);
        h += prev_turn;
        let mut prev_short = false;
        for _ in 0..edges {
            let len = random_edge(rng, params.ell, !prev_short);
            let short = len < params.ell - params.tol_len();
            p += Vec2::from_angle(h) * len;
            vertices.push(p);
            let mut turn = random_turn(rng, theta);
            if short {
                turn = fit_after_short(prev_turn, turn, theta);
            }
            h += turn;
            prev_turn = turn;
            prev_short = short;
        }
        let end = Configuration::from_angle(p.x, p.y, h);
        if let Ok(path) = DiscretePath::new(start, end, vertices) {
            if is_feasible(&path, params) {
                return path;
            }
        }
    }
}

/// A random Dubins-type curve: alternating unit arcs and segments, total
/// length at least `min_length`.
pub fn random_smooth_path<R: Rng + ?Sized>(rng: &mut R, min_length: f64) -> SmoothPath {
    let start = Configuration::from_angle(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(0.0..TAU),
    );
    loop {
        let count = rng.gen_range(1..=5);
        let mut arc = rng.gen_bool(0.5);
        let mut segments = Vec::with_capacity(count);
        for _ in 0..count {
            segments.push(if arc {
                let orientation = if rng.gen_bool(0.5) {
                    Orientation::Left
                } else {
                    Orientation::Right
                };
                Segment::Arc {
                    orientation,
                    sweep: rng.gen_range(0.05..TAU),
                }
            } else {
                Segment::Line {
                    length: rng.gen_range(0.05..6.0),
                }
            });
            arc = !arc || rng.gen_bool(0.3);
        }
        let path = SmoothPath { start, segments };
        if path.length() >= min_length {
            return path;
        }
    }
}

/// Start at the origin heading along +x-ish, goal at a random distance in
/// `[min_dist, max_dist]` with a random heading.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    min_dist: f64,
    max_dist: f64,
) -> (Configuration, Configuration) {
    let u = Configuration::from_angle(0.0, 0.0, rng.gen_range(0.0..TAU));
    let d = rng.gen_range(min_dist..=max_dist);
    let a = rng.gen_range(0.0..TAU);
    let v = Configuration::from_angle(d * a.cos(), d * a.sin(), rng.gen_range(0.0..TAU));
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_paths_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [6, 8, 12] {
            let params = Params::from_n_sides(n, 1.0).unwrap();
            for k in 1..12 {
                let start = Configuration::from_angle(0.0, 0.0, 0.3);
                let p = random_feasible_path(&mut rng, &params, start, k);
                assert_eq!(p.edge_count(), k);
                assert!(is_feasible(&p, &params));
            }
        }
    }
}
