//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion with its measurement and runtime, and exits non-zero if any
//! fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use ddgeo::geometry::{rotate, rotate_about, Vec2};
use ddgeo::path::{is_feasible, path_length, validate, vertex_turns, Configuration, DiscretePath, Params, ViolationKind};
use ddgeo::planner::{convergence_experiment, oracle_search, plan, PlanOptions};
use ddgeo::rewrite::{shorten, ShortenStatus, DEFAULT_BUDGET};
use ddgeo::sample::{random_feasible_path, random_instance, random_smooth_path};
use ddgeo::smooth::discretize;
use ddgeo::typing::{analyze, canonicalize, find_forbidden_subtype, Forbidden, TypeWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Path from `start`: turn at the start point, then (edge length, turn at
/// its far end) pairs. The end heading follows the last turn.
fn build(start: Configuration, turn_u: f64, edges: &[(f64, f64)]) -> DiscretePath {
    let mut h = start.heading_angle() + turn_u;
    let mut p = start.point;
    let mut vertices = vec![p];
    for &(len, turn) in edges {
        p += Vec2::from_angle(h) * len;
        vertices.push(p);
        h += turn;
    }
    DiscretePath::new(start, Configuration::from_angle(p.x, p.y, h), vertices).unwrap()
}

fn origin() -> Configuration {
    Configuration::from_angle(0.0, 0.0, 0.0)
}

fn validator_suite() -> Outcome {
    for n in [8u32, 12, 360] {
        let params = Params::from_n_sides(n, 1.0).unwrap();
        let edges = vec![(1.0, params.theta); n as usize];
        let polygon = build(origin(), params.theta, &edges);
        check(validate(&polygon, &params).unwrap().is_empty(), || format!("{n}-gon rejected"))?;

        // Rotate everything after vertex 3 by a further 0.1 rad.
        let mut bent = polygon.clone();
        let pivot = bent.vertices[3];
        for v in bent.vertices.iter_mut().skip(4) {
            *v = rotate_about(*v, pivot, 0.1);
        }
        bent.end.heading = rotate(bent.end.heading, 0.1);
        bent.end.point = *bent.vertices.last().unwrap();
        let v = validate(&bent, &params).unwrap();
        check(
            v.len() == 1 && v[0].kind == ViolationKind::Turn && v[0].location == 3 && (v[0].magnitude - 0.1).abs() <= 1e-9,
            || format!("n={n}: perturbation reported as {v:?}"),
        )?;
    }
    let params = Params::from_n_sides(8, 1.0).unwrap();
    let t = params.theta;
    let adjacent_short = build(origin(), 0.0, &[(1.0, 0.1), (0.5, 0.1), (0.5, 0.1), (1.0, 0.0)]);
    let v = validate(&adjacent_short, &params).unwrap();
    check(
        v.iter().any(|x| x.kind == ViolationKind::Length && x.location == 1 && (x.magnitude - 0.5).abs() < 1e-12),
        || format!("adjacent short edges reported as {v:?}"),
    )?;
    let turn_over_length = build(origin(), 0.0, &[(1.0, 0.7 * t), (0.5, 0.7 * t), (1.0, 0.0)]);
    let v = validate(&turn_over_length, &params).unwrap();
    check(
        v.len() == 1 && v[0].kind == ViolationKind::TurnOverLength && (v[0].magnitude - 0.4 * t).abs() < 1e-9,
        || format!("turn-over-length witness reported as {v:?}"),
    )?;
    let inflection = build(origin(), 0.0, &[(1.0, 0.7 * t), (0.5, -0.7 * t), (1.0, 0.0)]);
    check(is_feasible(&inflection, &params), || "short inflection edge rejected".into())?;
    Ok("n-gons feasible, +0.1 rad reported as 0.1, witnesses flagged".into())
}

fn words(max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for c in ['A', 'B'] {
                let mut x = w.clone();
                x.push(c);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn typing_suite() -> Outcome {
    let patterns: Vec<&str> = Forbidden::ALL.iter().map(|f| f.pattern()).collect();
    let all = words(6);
    for w in &all {
        let word = TypeWord::parse(w).unwrap();
        let contains = patterns.iter().any(|p| w.contains(p));
        check(word.is_true_type() == !contains, || format!("{w}: true type {} but factor {contains}", word.is_true_type()))?;
        check(find_forbidden_subtype(&word).is_some() == contains, || format!("{w}: factor search disagrees"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..500 {
        let n = [6u32, 8, 12][i % 3];
        let params = Params::from_n_sides(n, 1.0).unwrap();
        let edges = rng.gen_range(1..=11);
        let raw = random_feasible_path(&mut rng, &params, origin(), edges);
        // canonical forms are only guaranteed feasible for locally shortest paths
        let p = shorten(&raw, &params, DEFAULT_BUDGET).map_err(|e| e.to_string())?.path;
        let c = canonicalize(&p, &params).map_err(|e| e.to_string())?;
        let (a, b) = (path_length(&p), path_length(&c));
        check((a - b).abs() <= 1e-12 * a, || format!("canonicalize changed length {a} -> {b}"))?;
        check(is_feasible(&c, &params), || "canonical form infeasible".into())?;
    }
    Ok(format!("{} words checked, 500 canonical forms of shortened paths", all.len()))
}

fn rewriter_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut steps = 0;
    for i in 0..500 {
        let n = [6u32, 8, 12][i % 3];
        let params = Params::from_n_sides(n, 1.0).unwrap();
        let edges = rng.gen_range(1..=11);
        let p = random_feasible_path(&mut rng, &params, origin(), edges);
        let r = shorten(&p, &params, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        check(r.status == ShortenStatus::FixedPoint, || format!("path {i}: budget exhausted"))?;
        check(is_feasible(&r.path, &params), || format!("path {i}: result infeasible"))?;
        let ty = analyze(&r.path, &params).map_err(|e| e.to_string())?.type_word;
        check(find_forbidden_subtype(&ty).is_none(), || format!("path {i}: fixed point has type {ty}"))?;
        for e in &r.trace {
            let shorter = e.length_after < e.length_before;
            let tie = e.length_after <= e.length_before * (1.0 + 1e-12) && e.type_after.len() < e.type_before.len();
            check(shorter || tie, || format!("path {i}: step without progress {e:?}"))?;
        }
        steps += r.trace.len();
    }
    Ok(format!("500 fixed points, {steps} rewrite steps"))
}

fn planner_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = f64::NEG_INFINITY;
    for n in [8u32, 16] {
        let params = Params::from_n_sides(n, 1.0).unwrap();
        for i in 0..25 {
            let (u, v) = random_instance(&mut rng, 0.0, 8.0);
            let r = plan(&u, &v, &params, &PlanOptions::default()).map_err(|e| e.to_string())?;
            check(is_feasible(&r.path, &params), || format!("n={n} #{i}: plan infeasible"))?;
            let ty = analyze(&r.path, &params).map_err(|e| e.to_string())?.type_word;
            check(ty.is_true_type() && ty == r.type_word, || format!("n={n} #{i}: type {ty}"))?;
            let o = oracle_search(&u, &v, &params, 400, 12, i).map_err(|e| e.to_string())?;
            let excess = (r.length - o.length) / r.length;
            worst = worst.max(excess);
            check(r.length <= o.length + 1e-6 * r.length, || format!("n={n} #{i}: plan {} oracle {}", r.length, o.length))?;
        }
    }
    Ok(format!("50 instances, max (plan - oracle)/L = {worst:.2e}"))
}

fn discretization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    for _ in 0..50 {
        for n in [8u32, 16, 64, 360] {
            let theta = TAU / n as f64;
            let g = random_smooth_path(&mut rng, theta);
            let p = discretize(&g, theta).map_err(|e| e.to_string())?;
            let params = Params::unit_schedule(n).unwrap();
            let v = validate(&p, &params).map_err(|e| e.to_string())?;
            check(v.is_empty(), || format!("n={n}: {v:?}"))?;
            let lens = p.edge_lengths();
            let k = lens.len();
            let min_edge = 2.0 * (PI / n as f64).sin() - 1e-9;
            check(lens.iter().enumerate().all(|(i, l)| i == 0 || i + 1 == k || *l >= min_edge), || format!("n={n}: short middle edge"))?;
            let turns = vertex_turns(&p).map_err(|e| e.to_string())?;
            check(turns.iter().all(|t| t.abs() <= theta + 1e-9), || format!("n={n}: turn above theta"))?;
        }
    }
    Ok("200 discretizations".into())
}

fn chord_and_angle_sweeps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut min_chord = f64::INFINITY;
    let mut min_angle = f64::INFINITY;
    let mut count = 0;
    while count < 10_000 {
        let g = random_smooth_path(&mut rng, 1.0);
        let total = g.length();
        for _ in 0..100 {
            let t = rng.gen_range(0.0..total);
            let s = t + rng.gen_range(0.0..PI.min(total - t));
            if s <= t {
                continue;
            }
            let (a, h) = g.eval(t).map_err(|e| e.to_string())?;
            let (b, _) = g.eval(s).map_err(|e| e.to_string())?;
            let c = b - a;
            min_chord = min_chord.min(c.norm() - 2.0 * ((s - t) / 2.0).sin());
            min_angle = min_angle.min((s - t) / 2.0 - h.cross(c).abs().atan2(h.dot(c)));
            count += 1;
        }
    }
    check(min_chord >= -1e-9 && min_angle >= -1e-9, || format!("slack chord {min_chord:.2e}, angle {min_angle:.2e}"))?;
    Ok(format!("{count} pairs, min slack chord {min_chord:.2e}, angle {min_angle:.2e}"))
}

fn convergence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(360);
    let mut worst_gap: f64 = 0.0;
    let mut over = 0;
    for i in 0..20 {
        let (u, v) = random_instance(&mut rng, 3.0, 15.0);
        let rows = convergence_experiment(&u, &v, &[8, 16, 32, 64, 128, 360]).map_err(|e| e.to_string())?;
        for r in &rows {
            check(
                r.plan <= r.discretized + 1e-9 && r.discretized <= r.dubins + 1e-9,
                || format!("#{i} n={}: {} <= {} <= {} fails", r.n_sides, r.plan, r.discretized, r.dubins),
            )?;
        }
        let gap = rows.last().unwrap().relative_gap();
        worst_gap = worst_gap.max(gap);
        if gap > 1e-3 {
            over += 1;
        }
    }
    check(over == 0, || {
        format!("sandwich holds on all rows, but the n=360 gap exceeds 1e-3 on {over}/20 instances (max {worst_gap:.2e})")
    })?;
    Ok(format!("sandwich on 120 rows, max n=360 gap {worst_gap:.2e}"))
}

fn symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = PlanOptions::default();
    let mut worst: f64 = 0.0;
    for i in 0..25 {
        let params = Params::from_n_sides(if i % 2 == 0 { 8 } else { 16 }, 1.0).unwrap();
        let (u, v) = random_instance(&mut rng, 0.0, 6.0);
        let angle = rng.gen_range(0.0..TAU);
        let shift = Vec2::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let moved = |c: &Configuration| Configuration { point: rotate(c.point, angle) + shift, heading: rotate(c.heading, angle) };
        let mirror = |c: &Configuration| Configuration { point: Vec2::new(-c.point.x, c.point.y), heading: Vec2::new(-c.heading.x, c.heading.y) };
        let len = |a: &Configuration, b: &Configuration| plan(a, b, &params, &opts).map(|r| r.length).map_err(|e| e.to_string());
        let base = len(&u, &v)?;
        for (name, other) in [
            ("rigid motion", len(&moved(&u), &moved(&v))?),
            ("reflection", len(&mirror(&u), &mirror(&v))?),
            ("reversal", len(&v.reversed(), &u.reversed())?),
        ] {
            let rel = (other - base).abs() / base;
            worst = worst.max(rel);
            check(rel <= 1e-9, || format!("#{i} {name}: {base} vs {other}"))?;
        }
    }
    Ok(format!("25 instances, max relative difference {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 validator suite", validator_suite, Duration::from_secs(1)),
        ("2 typing suite", typing_suite, Duration::from_secs(10)),
        ("3 rewriter soundness", rewriter_soundness, Duration::from_secs(120)),
        ("4 planner vs oracle", planner_vs_oracle, Duration::from_secs(300)),
        ("5 discretization", discretization, Duration::from_secs(60)),
        ("6 chord and angle bounds", chord_and_angle_sweeps, Duration::from_secs(30)),
        ("7 convergence", convergence, Duration::from_secs(600)),
        ("8 symmetry", symmetry, Duration::from_secs(120)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(m) if elapsed > limit => Err(format!("{m}; took {elapsed:.1?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(m) => println!("criterion {name}: PASS ({m}) [{elapsed:.1?}]"),
            Err(m) => {
                failed += 1;
                println!("criterion {name}: FAIL ({m}) [{elapsed:.1?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
