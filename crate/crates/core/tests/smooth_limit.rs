use std::f64::consts::{PI, TAU};

use ddgeo::geometry::{rotate, rotate_about, Vec2};
use ddgeo::path::{validate, vertex_turns, Configuration};
use ddgeo::sample::{random_instance, random_smooth_path};
use ddgeo::smooth::{
    angle_bound_check, chord_bound_check, discretization_params, discretize, dubins_solve,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn m2p(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

/// Roots of `f` on [0, 2π) by sign-change scan and bisection.
fn roots(f: impl Fn(f64) -> f64) -> Vec<f64> {
    const N: usize = 4000;
    let mut out = Vec::new();
    let step = TAU / N as f64;
    let mut a = 0.0;
    let mut fa = f(a);
    for i in 1..=N {
        let b = i as f64 * step;
        let fb = f(b);
        if fa.abs() < 1e-13 {
            out.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    out
}

/// Shortest length over the six words, found by scanning the first sweep.
fn sampled_dubins(u: &Configuration, v: &Configuration) -> f64 {
    let mut best = f64::INFINITY;
    for s1 in [1.0, -1.0] {
        let c1 = u.point + u.heading.perp() * s1;
        let arc1 = |a: f64| (rotate_about(u.point, c1, s1 * a), rotate(u.heading, s1 * a));
        for s2 in [1.0, -1.0] {
            let c2 = v.point + v.heading.perp() * s2;
            let q = |h: Vec2| c2 - h.perp() * s2;
            for a1 in roots(|a| {
                let (p, h) = arc1(a);
                h.cross(q(h) - p)
            }) {
                let (p, h) = arc1(a1);
                let len = h.dot(q(h) - p);
                if len < -1e-9 {
                    continue;
                }
                let a2 = m2p(s2 * (v.heading.angle() - h.angle()));
                let a2 = if TAU - a2 < 1e-9 { 0.0 } else { a2 };
                best = best.min(a1 + len.max(0.0) + a2);
            }
        }
        // Three arcs, middle one turning the other way.
        let c3 = v.point + v.heading.perp() * s1;
        let mid_center = |a: f64| {
            let (p, h) = arc1(a);
            p - h.perp() * s1
        };
        for a1 in roots(|a| mid_center(a).dist(c3) - 2.0) {
            let (p, _) = arc1(a1);
            let c2 = mid_center(a1);
            let t = (c2 + c3) * 0.5;
            let a2 = m2p(-s1 * ((t - c2).angle() - (p - c2).angle()));
            let h2 = rotate(u.heading, s1 * a1 - s1 * a2);
            let a3 = m2p(s1 * (v.heading.angle() - h2.angle()));
            let a3 = if TAU - a3 < 1e-9 { 0.0 } else { a3 };
            best = best.min(a1 + a2 + a3);
        }
    }
    best
}

#[test]
fn dubins_matches_sampling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut agree = 0;
    let total = 200;
    for _ in 0..total {
        let (u, v) = random_instance(&mut rng, 0.0, 8.0);
        let g = dubins_solve(&u, &v).unwrap();
        let end = g.end();
        assert!(end.point.dist(v.point) < 1e-10 * (1.0 + u.point.dist(v.point)));
        assert!(end.heading.dist(v.heading) < 1e-10);
        let oracle = sampled_dubins(&u, &v);
        assert!(g.length() <= oracle + 1e-7, "solver {} oracle {}", g.length(), oracle);
        if (g.length() - oracle).abs() < 1e-6 {
            agree += 1;
        }
    }
    assert!(agree * 100 >= total * 97, "only {agree}/{total} agree");
}

#[test]
fn dubins_examples_against_oracle() {
    let u = Configuration::from_angle(0.0, 0.0, 0.0);
    for v in [
        Configuration::from_angle(0.0, 4.0, 0.0),
        Configuration::from_angle(0.0, 0.0, PI),
        Configuration::from_angle(10.0, 0.0, 0.0),
        Configuration::from_angle(1.0, 0.5, PI / 2.0),
    ] {
        let g = dubins_solve(&u, &v).unwrap();
        assert!((g.length() - sampled_dubins(&u, &v)).abs() < 1e-6, "{v:?}");
    }
}

#[test]
fn chord_and_angle_bounds_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let g = random_smooth_path(&mut rng, 1.0);
        let total = g.length();
        for _ in 0..50 {
            let t = rng.gen_range(0.0..total);
            let s = t + rng.gen_range(1e-6..PI.min(total - t).max(2e-6));
            if s >= total || s >= t + PI {
                continue;
            }
            assert!(chord_bound_check(&g, t, s).unwrap());
            assert!(angle_bound_check(&g, t, s).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn discretization_is_feasible(seed in any::<u64>(), n in prop::sample::select(vec![8u32, 12, 16, 36, 64, 360])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = TAU / n as f64;
        let g = random_smooth_path(&mut rng, 2.0 * theta);
        let p = discretize(&g, theta).unwrap();
        let params = discretization_params(theta).unwrap();
        prop_assert!(validate(&p, &params).unwrap().is_empty());
        let lens = p.edge_lengths();
        let k = lens.len();
        for (i, l) in lens.iter().enumerate() {
            if i > 0 && i + 1 < k {
                prop_assert!(*l >= params.ell - 1e-9);
            }
        }
        for t in vertex_turns(&p).unwrap() {
            prop_assert!(t.abs() <= theta + 1e-9);
        }
        prop_assert!(ddgeo::path::path_length(&p) <= g.length() + 1e-9);
    }
}
