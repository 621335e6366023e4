use std::f64::consts::{PI, TAU};

use jampack_core::construction::CurveFamily;
use jampack_core::geom::{apply_rigid, chord_step, circle_circle_intersections, reflect_across_horizontal, reflect_across_vertical};
use jampack_core::io::{read_config, write_config};
use jampack_core::metropolis::{metropolis_step, rng_from_seed, run_chain_with, ChainParams, Neighbours};
use jampack_core::verifier::{direction_oracle, is_locally_jammed, overlap_audit};
use jampack_core::{Configuration, Container, Point2, Verdict};
use proptest::prelude::*;

fn cases() -> ProptestConfig {
    ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() }
}

fn point(span: f64) -> impl Strategy<Value = Point2> {
    (-span..span, -span..span).prop_map(|(x, y)| Point2::new(x, y))
}

fn normals(angles: &[f64]) -> Vec<Point2> {
    angles.iter().map(|&a| Point2::from_angle(a)).collect()
}

fn largest_gap(angles: &[f64]) -> f64 {
    let mut a: Vec<f64> = angles.iter().map(|t| t.rem_euclid(TAU)).collect();
    a.sort_by(f64::total_cmp);
    let wrap = a[0] + TAU - a[a.len() - 1];
    a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

/// Up to eight discs of radius 0.08 dropped into the unit square without overlap.
fn sparse_box() -> impl Strategy<Value = Configuration> {
    proptest::collection::vec((0.08f64..0.92, 0.08f64..0.92), 1..8).prop_map(|raw| {
        let mut centers: Vec<Point2> = Vec::new();
        for (x, y) in raw {
            let p = Point2::new(x, y);
            if centers.iter().all(|q| q.dist(p) >= 0.16) {
                centers.push(p);
            }
        }
        Configuration::new(0.08, centers, Container::unit_square()).unwrap()
    })
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn intersections_lie_on_both_circles(c1 in point(10.0), c2 in point(10.0), r1 in 0.1f64..5.0, r2 in 0.1f64..5.0) {
        prop_assume!(c1.dist(c2) > 1e-6);
        let pts = circle_circle_intersections(c1, r1, c2, r2, 1e-12).unwrap();
        let d = c1.dist(c2);
        let crossing = d < r1 + r2 - 1e-9 && d > (r1 - r2).abs() + 1e-9;
        let apart = d > r1 + r2 + 1e-9 || d < (r1 - r2).abs() - 1e-9;
        if crossing {
            prop_assert_eq!(pts.len(), 2);
        }
        if apart {
            prop_assert!(pts.is_empty());
        }
        for p in pts {
            prop_assert!((p.dist(c1) - r1).abs() < 1e-8, "{}", p.dist(c1) - r1);
            prop_assert!((p.dist(c2) - r2).abs() < 1e-8, "{}", p.dist(c2) - r2);
        }
    }

    #[test]
    fn chord_step_is_exact_and_monotone(eps in 0.0f64..4.0, x0 in 0.0f64..60.0, dx in 0.0f64..5.0) {
        let fam = CurveFamily::default().with_epsilon(eps);
        let f = |x: f64| fam.eval(x).unwrap();
        let s0 = chord_step(f, x0, 2.0).unwrap();
        let s1 = chord_step(f, x0 + dx, 2.0).unwrap();
        prop_assert!(s0 > x0 && s0 <= x0 + 2.0);
        let residual = Point2::new(s0, f(s0)).dist(Point2::new(x0, f(x0))) - 2.0;
        prop_assert!(residual.abs() < 1e-12, "{residual}");
        prop_assert!(s1 >= s0);
    }

    #[test]
    fn reflections_are_involutions(p in point(1e3), x0 in -1e3f64..1e3, y0 in -1e3f64..1e3) {
        let v = reflect_across_vertical(reflect_across_vertical(p, x0), x0);
        let h = reflect_across_horizontal(reflect_across_horizontal(p, y0), y0);
        prop_assert!(v.dist(p) <= 1e-12 * (1.0 + p.norm() + x0.abs()));
        prop_assert!(h.dist(p) <= 1e-12 * (1.0 + p.norm() + y0.abs()));
        prop_assert_eq!(reflect_across_vertical(p, x0).y, p.y);
        prop_assert_eq!(reflect_across_horizontal(p, y0).x, p.x);
    }

    #[test]
    fn rigid_motions_preserve_distance(p in point(100.0), q in point(100.0), theta in 0.0f64..TAU, t in point(1e3)) {
        let d = apply_rigid(p, theta, t).dist(apply_rigid(q, theta, t));
        prop_assert!((d - p.dist(q)).abs() <= 1e-12 * (1.0 + t.norm() + p.norm() + q.norm()));
    }

    #[test]
    fn gap_test_matches_direction_scan(angles in proptest::collection::vec(0.0f64..TAU, 1..9)) {
        let gap = largest_gap(&angles);
        // Within a degree of a half-turn the 720-direction scan cannot resolve the answer.
        prop_assume!((gap - PI).abs() >= 1f64.to_radians());
        let n = normals(&angles);
        prop_assert_eq!(!is_locally_jammed(&n, 1e-9).is_jammed(), direction_oracle(&n, 720));
    }

    #[test]
    fn witness_is_an_escape_direction(angles in proptest::collection::vec(0.0f64..TAU, 1..9)) {
        let n = normals(&angles);
        if let Verdict::Movable { witness, .. } = is_locally_jammed(&n, 1e-9) {
            prop_assert!(n.iter().all(|m| witness.dot(*m) >= -1e-12));
        }
    }

    #[test]
    fn extra_contacts_never_unjam(angles in proptest::collection::vec(0.0f64..TAU, 3..9), extra in 0.0f64..TAU) {
        let n = normals(&angles);
        if is_locally_jammed(&n, 1e-9).is_jammed() {
            let mut more = n.clone();
            more.push(Point2::from_angle(extra));
            prop_assert!(is_locally_jammed(&more, 1e-9).is_jammed());
        }
    }

    #[test]
    fn two_contacts_never_jam(angles in proptest::collection::vec(0.0f64..TAU, 0..3)) {
        prop_assert!(!is_locally_jammed(&normals(&angles), 1e-9).is_jammed());
    }

    #[test]
    fn grid_and_full_scan_agree(cfg in sparse_box(), seed in any::<u64>(), step in 0.01f64..0.3) {
        let params = ChainParams::new(200, step, seed);
        let grid = run_chain_with(&cfg, &params, Neighbours::Grid, None).unwrap();
        let scan = run_chain_with(&cfg, &params, Neighbours::FullScan, None).unwrap();
        prop_assert_eq!(&grid.0, &scan.0);
        prop_assert_eq!(&grid.1, &scan.1);
        prop_assert!(overlap_audit(&grid.0, 1e-9).is_clean());
    }

    #[test]
    fn rejected_steps_change_nothing(cfg in sparse_box(), seed in any::<u64>(), step in 0.01f64..0.5) {
        let mut rng = rng_from_seed(seed);
        let mut cur = cfg;
        for _ in 0..20 {
            let before = cur.clone();
            if !metropolis_step(&mut cur, step, &mut rng) {
                prop_assert_eq!(&cur, &before);
            } else {
                let moved = cur.centers.iter().zip(&before.centers).filter(|(a, b)| a != b).count();
                prop_assert!(moved <= 1);
            }
        }
    }

    #[test]
    fn files_round_trip(cfg in sparse_box()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        write_config(&path, &cfg, None).unwrap();
        prop_assert_eq!(read_config(&path).unwrap().0, cfg);
    }
}
