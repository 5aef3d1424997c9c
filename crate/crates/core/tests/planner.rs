use std::f64::consts::PI;

use ddgeo::geometry::{rotate, Vec2};
use ddgeo::path::{is_feasible, path_length, Configuration, Params};
use ddgeo::planner::{forward_construct, oracle_search, plan, solve_candidate, CandidateSpec, PlanOptions, Slot};
use ddgeo::sample::random_instance;
use ddgeo::smooth::{discretize, dubins_solve};
use ddgeo::typing::analyze;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn opts() -> PlanOptions {
    PlanOptions::default()
}

#[test]
fn collinear_instance_is_one_bridge() {
    let u = Configuration::from_angle(0.0, 0.0, 0.0);
    let v = Configuration::from_angle(10.0, 0.0, 0.0);
    let params = Params::from_n_sides(8, 1.0).unwrap();
    let r = plan(&u, &v, &params, &opts()).unwrap();
    assert_eq!(r.type_word.as_str(), "B");
    assert!((r.length - 10.0).abs() < 1e-12);
    assert!(r.residual <= 1e-9);
}

#[test]
fn single_edge_word_hits_the_goal() {
    let u = Configuration::from_angle(0.0, 0.0, 0.0);
    let v = Configuration::from_angle(10.0, 0.0, 0.0);
    let spec = CandidateSpec {
        arcs: vec![],
        turns: vec![Slot::Free(0.0), Slot::Free(0.0)],
        edges: vec![Slot::Free(10.0)],
    };
    assert!(forward_construct(&spec, &u, &v).residual_norm() < 1e-15);
    let params = Params::from_n_sides(8, 1.0).unwrap();
    let p = solve_candidate(&spec, &u, &v, &params).unwrap();
    assert!((path_length(&p) - 10.0).abs() < 1e-12);
}

fn sandwich(u: &Configuration, v: &Configuration, n: u32) -> (f64, f64, f64) {
    let params = Params::unit_schedule(n).unwrap();
    let r = plan(u, v, &params, &opts()).unwrap();
    assert!(is_feasible(&r.path, &params));
    let g = dubins_solve(u, v).unwrap();
    let d = path_length(&discretize(&g, params.theta).unwrap());
    (r.length, d, g.length())
}

// Free turns of up to θ at both endpoints let the discrete optimum undercut
// the smooth one by O(θ), so the gap at n = 360 is a few times 1e-3.
#[test]
fn fine_polygons_approach_the_smooth_optimum() {
    let u = Configuration::from_angle(0.0, 0.0, 0.0);
    for v in [
        Configuration::from_angle(0.0, 4.0, 0.0),
        Configuration::from_angle(0.0, 0.0, PI),
    ] {
        let (p, d, g) = sandwich(&u, &v, 360);
        assert!(p <= d + 1e-9 && d <= g + 1e-9, "{p} {d} {g}");
        assert!((g - p) / g < 1e-2, "{p} {g}");
    }
}

#[test]
fn antisymmetric_instance_has_symmetric_arcs() {
    let params = Params::from_n_sides(8, 1.0).unwrap();
    let u = Configuration::from_angle(-3.0, 1.0, 1.3);
    let v = Configuration::from_angle(3.0, -1.0, 1.3);
    let r = plan(&u, &v, &params, &opts()).unwrap();
    assert_eq!(r.type_word.as_str(), "ABA");
    let s = analyze(&r.path, &params).unwrap();
    assert_eq!(s.arcs.len(), 2);
    assert_ne!(s.arcs[0].orientation, s.arcs[1].orientation);
    let a = s.arcs[0].end_station - s.arcs[0].start_station;
    let b = s.arcs[1].end_station - s.arcs[1].start_station;
    assert!((a - b).abs() < 1e-9, "{a} {b}");
    // Point reflection followed by reversal maps the path onto itself.
    let mirrored = r.path.map(|p| -p, |h| -h).reversed();
    for (p, q) in r.path.vertices.iter().zip(&mirrored.vertices) {
        assert!(p.dist(*q) < 1e-9);
    }
}

#[test]
fn plan_is_not_beaten_by_random_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [8u32, 16] {
        let params = Params::from_n_sides(n, 1.0).unwrap();
        for i in 0..4 {
            let (u, v) = random_instance(&mut rng, 0.0, 6.0);
            let r = plan(&u, &v, &params, &opts()).unwrap();
            assert!(is_feasible(&r.path, &params));
            assert!(r.type_word.is_true_type());
            let o = oracle_search(&u, &v, &params, 200, 8, i).unwrap();
            assert!(r.length <= o.length + 1e-6 * o.length, "plan {} oracle {}", r.length, o.length);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn length_is_invariant_under_motions(seed in any::<u64>(), angle in 0.0..6.28f64, dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = random_instance(&mut rng, 0.5, 6.0);
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let base = plan(&u, &v, &params, &opts()).unwrap().length;
        let shift = Vec2::new(dx, dy);
        let moved = |c: &Configuration| Configuration { point: rotate(c.point, angle) + shift, heading: rotate(c.heading, angle) };
        let mirror = |c: &Configuration| Configuration { point: Vec2::new(c.point.x, -c.point.y), heading: Vec2::new(c.heading.x, -c.heading.y) };
        let tol = 1e-9 * base;
        prop_assert!((plan(&moved(&u), &moved(&v), &params, &opts()).unwrap().length - base).abs() <= tol);
        prop_assert!((plan(&mirror(&u), &mirror(&v), &params, &opts()).unwrap().length - base).abs() <= tol);
        prop_assert!((plan(&v.reversed(), &u.reversed(), &params, &opts()).unwrap().length - base).abs() <= tol);
    }
}
