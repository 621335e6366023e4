//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! printed.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jampack_core::construction::junction::TANGENT_PAIRS;
use jampack_core::construction::{
    assemble_square, five_disc_config, junction_piece, symmetric_bridge_piece, tiling_3_12_12, tiling_density_limit,
    tune_epsilon, CurveFamily, Layout, Region, Role, Row, DEFAULT_EPS_HI,
};
use jampack_core::io::{config_from_str, config_to_string};
use jampack_core::metropolis::{freezing_radius, run_chain, run_chain_with, shrink_radius, ChainParams, Neighbours};
use jampack_core::verifier::{direction_oracle, is_locally_jammed, overlap_audit, verify_stable};
use jampack_core::{construction, Configuration, Container, Point2, Tolerances, Verdict};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BRIDGE_NS: [usize; 4] = [4, 8, 16, 32];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn squares() -> Vec<(usize, Configuration, jampack_core::AssemblyMetrics, Duration)> {
    BRIDGE_NS
        .iter()
        .map(|&n| {
            let t = Instant::now();
            let (cfg, m) = assemble_square(n, Layout::WallBridges).expect("square assembles");
            (n, cfg, m, t.elapsed())
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let _ = junction_piece();
    let t = Instant::now();
    let piece = junction_piece();
    let elapsed = t.elapsed();
    let c = &piece.config.centers;
    let worst = TANGENT_PAIRS
        .iter()
        .map(|&(i, j)| (c[i as usize].dist(c[j as usize]) - 2.0).abs())
        .fold(0.0, f64::max);
    let walls: Vec<_> = piece.config.container.walls().collect();
    let touching: Vec<usize> = (0..6)
        .filter(|&i| walls.iter().any(|w| w.gap(c[i], 1.0) == 0.0))
        .collect();
    let pass = worst < 1e-12 && touching == vec![0, 1, 2] && elapsed < Duration::from_millis(1);
    outcome(pass, format!("max pair residual {worst:.1e}, exact wall tangencies on discs {touching:?}, {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let tol = Tolerances::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in BRIDGE_NS {
        let t = Instant::now();
        let Ok((eps, chain)) = tune_epsilon(&CurveFamily::default(), n, DEFAULT_EPS_HI, &tol) else {
            pass = false;
            parts.push(format!("N={n}: tuning failed"));
            continue;
        };
        let piece = symmetric_bridge_piece(&chain, &tol).expect("bridge completes");
        let report = verify_stable(&piece.config, &tol).expect("bridge verifies");
        let elapsed = t.elapsed();
        let tangency = chain.max_tangency_residual();
        let closure = chain.closure_residual().abs();
        let count_ok = piece.config.len() == 10 * n - 4;
        // Movable: a1 and b1, above and below the axis, at both ends.
        let movable = report.movable();
        let ends_ok = movable.len() == 8
            && movable.iter().all(|&i| {
                matches!(piece.roles[i], Role::Bridge(s) if s.index == 1 && matches!(s.row, Row::A | Row::B))
            });
        let ok = tangency < 1e-9 && closure < 1e-10 && count_ok && ends_ok && elapsed < Duration::from_secs(1);
        pass &= ok;
        parts.push(format!(
            "N={n}: eps {eps:.6}, tangency {tangency:.1e}, closure {closure:.1e}, {} discs, {} movable, {elapsed:.0?}",
            piece.config.len(),
            movable.len()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_3(sq: &[(usize, Configuration, jampack_core::AssemblyMetrics, Duration)]) -> Outcome {
    let tol = Tolerances::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, cfg, m, elapsed) in sq {
        let report = verify_stable(cfg, &tol).expect("square verifies");
        let audit = overlap_audit(cfg, tol.tangency_rel);
        let ok = report.movable_count == 0 && audit.is_clean() && *elapsed < Duration::from_secs(10);
        pass &= ok;
        parts.push(format!("N={n}: n={} n*r={:.4} movable {} overlaps {}", m.n, m.n_times_r, report.movable_count, audit.violations.len()));
    }
    let nr: Vec<f64> = sq.iter().map(|s| s.2.n_times_r).collect();
    let lo = nr.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = nr.iter().cloned().fold(0.0, f64::max);
    pass &= hi / lo < 2.0;
    parts.push(format!("spread {:.3}, beta_observed {lo:.4}", hi / lo));
    outcome(pass, parts.join("; "))
}

fn criterion_4(sq: &[(usize, Configuration, jampack_core::AssemblyMetrics, Duration)]) -> Outcome {
    let tol = Tolerances::default();
    let t = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut cases: Vec<(String, Configuration)> = sq.iter().map(|(n, c, _, _)| (format!("square N={n}"), c.clone())).collect();
    cases.push(("five-disc".into(), five_disc_config()));
    for (name, cfg) in cases {
        let (_, stats) = run_chain(&cfg, &ChainParams::new(1_000_000, cfg.radius, 7)).expect("chain runs");
        let freeze = freezing_radius(&cfg, &tol).expect("freezing radius");
        pass &= stats.accepted == 0;
        let freeze = if freeze.is_finite() { format!("{:.2e} r", freeze / cfg.radius) } else { "none found".into() };
        parts.push(format!("{name}: accepted {} (freezing radius {freeze})", stats.accepted));
    }
    let elapsed = t.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    parts.push(format!("{elapsed:.1?}"));
    outcome(pass, parts.join("; "))
}

fn criterion_5(sq: &[(usize, Configuration, jampack_core::AssemblyMetrics, Duration)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut cases: Vec<(String, Configuration)> = sq.iter().map(|(n, c, _, _)| (format!("square N={n}"), c.clone())).collect();
    cases.push(("five-disc".into(), five_disc_config()));
    for (name, cfg) in cases {
        let shrunk = shrink_radius(&cfg, 0.99).expect("shrink");
        let (_, stats) = run_chain(&shrunk, &ChainParams::new(100_000, shrunk.radius, 7)).expect("chain runs");
        pass &= stats.acceptance_rate > 0.0;
        parts.push(format!("{name}: rate {:.4}", stats.acceptance_rate));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let cfg = tiling_3_12_12(40).expect("tiling");
    let d = construction::density(&cfg, &Region::square(80.0)).expect("density");
    let elapsed = t.elapsed();
    let limit = tiling_density_limit();
    let pass = (d - limit).abs() < 0.005 && elapsed < Duration::from_secs(5);
    outcome(pass, format!("density {d:.6} vs {limit:.6} ({} discs, {elapsed:.0?})", cfg.len()))
}

fn gaps_clear_of_half_turn(angles: &[f64], margin: f64) -> bool {
    let mut a = angles.to_vec();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    (0..n).all(|k| {
        let gap = if k + 1 < n { a[k + 1] - a[k] } else { a[0] + TAU - a[n - 1] };
        (gap - PI).abs() >= margin
    })
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240607);
    let (mut checked, mut agree, mut skipped) = (0, 0, 0);
    for case in 0..1000 {
        let k = rng.gen_range(1..=7);
        // Every third set is squeezed into a half-plane so both verdicts are common.
        let spread = if case % 3 == 0 { PI } else { TAU };
        let base = rng.gen_range(0.0..TAU);
        let angles: Vec<f64> = (0..k).map(|_| (base + rng.gen_range(0.0..spread)).rem_euclid(TAU)).collect();
        if !gaps_clear_of_half_turn(&angles, 1f64.to_radians()) {
            skipped += 1;
            continue;
        }
        let normals: Vec<Point2> = angles.iter().map(|&a| Point2::from_angle(a)).collect();
        let fast = !is_locally_jammed(&normals, 1e-9).is_jammed();
        checked += 1;
        if fast == direction_oracle(&normals, 720) {
            agree += 1;
        }
    }
    outcome(checked == agree && checked > 0, format!("{agree}/{checked} agree ({skipped} sets within 1 deg of a half-turn gap)"))
}

fn verdict_kinds(cfg: &Configuration) -> Vec<u8> {
    let rep = verify_stable(cfg, &Tolerances::default()).expect("valid");
    rep.verdicts
        .iter()
        .map(|v| match v {
            Verdict::Jammed => 0,
            Verdict::Movable { .. } => 1,
            Verdict::Rattler => 2,
        })
        .collect()
}

/// Triangular patch of touching unit discs with some sites left empty.
fn lattice_patch(mask: &[bool]) -> Configuration {
    let s3 = 3f64.sqrt();
    let side = (mask.len() as f64).sqrt() as usize;
    let mut centers = Vec::new();
    for j in 0..side {
        for i in 0..side {
            if mask[j * side + i] {
                centers.push(Point2::new(2.0 * i as f64 + j as f64, s3 * j as f64));
            }
        }
    }
    Configuration::new(1.0, centers, Container::PLANE).unwrap()
}

fn planar_fixtures() -> Vec<Configuration> {
    let tol = Tolerances::default();
    let (_, chain) = tune_epsilon(&CurveFamily::default(), 4, DEFAULT_EPS_HI, &tol).unwrap();
    vec![symmetric_bridge_piece(&chain, &tol).unwrap().config, tiling_3_12_12(3).unwrap()]
}

fn run_property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> String
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    match runner.run(&strategy, test) {
        Ok(()) => format!("{name} ok"),
        Err(e) => format!("{name} FAILED: {e}"),
    }
}

fn criterion_8() -> Outcome {
    let fixtures = planar_fixtures();
    let boxed = [five_disc_config(), assemble_square(4, Layout::WallBridges).unwrap().0, junction_piece().config];
    let mut results = Vec::new();

    let base_kinds: Vec<Vec<u8>> = boxed.iter().chain(&fixtures).map(verdict_kinds).collect();
    results.push(run_property(
        "scaling",
        (0..5usize, -3.0f64..3.0),
        |(k, e)| {
            let all: Vec<&Configuration> = boxed.iter().chain(&fixtures).collect();
            let s = 10f64.powf(e);
            prop_assert_eq!(verdict_kinds(&all[k].scaled(s)), base_kinds[k].clone());
            Ok(())
        },
    ));

    results.push(run_property(
        "rigid motion",
        (0..2usize, 0.0f64..TAU, -1e3f64..1e3, -1e3f64..1e3),
        |(k, theta, tx, ty)| {
            let moved = fixtures[k].transformed(theta, Point2::new(tx, ty));
            prop_assert_eq!(verdict_kinds(&moved), base_kinds[boxed.len() + k].clone());
            Ok(())
        },
    ));

    results.push(run_property(
        "lattice patches",
        (proptest::collection::vec(proptest::bool::weighted(0.8), 25), 0.0f64..TAU, -3.0f64..3.0),
        |(mask, theta, e)| {
            let patch = lattice_patch(&mask);
            let want = verdict_kinds(&patch);
            prop_assert_eq!(verdict_kinds(&patch.transformed(theta, Point2::new(3.0, -7.0))), want.clone());
            prop_assert_eq!(verdict_kinds(&patch.scaled(10f64.powf(e))), want);
            Ok(())
        },
    ));

    let finite = prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), -1e3f64..1e3];
    results.push(run_property(
        "round trip",
        (
            proptest::collection::vec((finite.clone(), finite.clone()), 0..40),
            (1e-300f64..1e300),
            proptest::option::of(-1e6f64..1e6),
            proptest::option::of(-1e6f64..1e6),
        ),
        |(pts, radius, x_min, y_max)| {
            let centers = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
            let container = Container { x_min, y_max, ..Container::PLANE };
            let cfg = Configuration::new(radius, centers, container).unwrap();
            let back = config_from_str(&config_to_string(&cfg, None), std::path::Path::new("mem")).unwrap().0;
            prop_assert_eq!(back.radius.to_bits(), cfg.radius.to_bits());
            for (a, b) in back.centers.iter().zip(&cfg.centers) {
                prop_assert_eq!(a.x.to_bits(), b.x.to_bits());
                prop_assert_eq!(a.y.to_bits(), b.y.to_bits());
            }
            prop_assert_eq!(back, cfg);
            Ok(())
        },
    ));

    let loose = shrink_radius(&five_disc_config(), 0.9).unwrap();
    results.push(run_property(
        "chain determinism",
        (any::<u64>(), 0.001f64..0.3, 1u64..400),
        |(seed, step, steps)| {
            let params = ChainParams::new(steps, step, seed);
            let a = run_chain_with(&loose, &params, Neighbours::Grid, None).unwrap();
            let b = run_chain_with(&loose, &params, Neighbours::Grid, None).unwrap();
            let c = run_chain_with(&loose, &params, Neighbours::FullScan, None).unwrap();
            prop_assert_eq!(&a.0, &b.0);
            prop_assert_eq!(&a.1, &b.1);
            prop_assert_eq!(&a.0, &c.0);
            Ok(())
        },
    ));

    let pass = results.iter().all(|r| r.ends_with(" ok"));
    outcome(pass, format!("1000 cases each: {}", results.join(", ")))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let sq = squares();
    let criteria: Vec<Criterion> = vec![
        ("1 junction exactness", Box::new(criterion_1)),
        ("2 bridge construction", Box::new(criterion_2)),
        ("3 square assembly", Box::new(|| criterion_3(&sq))),
        ("4 frozen Metropolis at step r", Box::new(|| criterion_4(&sq))),
        ("5 escape after shrinking", Box::new(|| criterion_5(&sq))),
        ("6 tiling density", Box::new(criterion_6)),
        ("7 verifier oracle equivalence", Box::new(criterion_7)),
        ("8 invariance suite", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
