//! Certification of local jamming.
//!
//! A disc is jammed when its contact normals leave no nonzero first-order
//! displacement: the escape cone `{d : d·n >= 0 for every normal n}` is `{0}`.
//! In angular terms that is at least three normals with every circular gap
//! strictly below π. An exact-π gap counts as movable.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::config::{Configuration, Side};
use crate::error::{Error, Result};
use crate::geom::{Point2, Tolerances};

/// What a contact normal comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "id")]
pub enum Obstacle {
    Disc(usize),
    Wall(Side),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contact {
    pub obstacle: Obstacle,
    /// Unit vector from the obstacle toward the disc center.
    pub normal: Point2,
}

/// Per-disc contact normals for a configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactGraph {
    pub contacts: Vec<Vec<Contact>>,
}

impl ContactGraph {
    /// Undirected disc-disc edges `(i, j)` with `i < j`, sorted.
    pub fn disc_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (i, cs) in self.contacts.iter().enumerate() {
            for c in cs {
                if let Obstacle::Disc(j) = c.obstacle {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// `(disc, side)` wall contacts.
    pub fn wall_contacts(&self) -> Vec<(usize, Side)> {
        let mut out = Vec::new();
        for (i, cs) in self.contacts.iter().enumerate() {
            for c in cs {
                if let Obstacle::Wall(side) = c.obstacle {
                    out.push((i, side));
                }
            }
        }
        out
    }

    pub fn normals(&self, i: usize) -> Vec<Point2> {
        self.contacts[i].iter().map(|c| c.normal).collect()
    }
}

/// Outcome of the single-disc jamming test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    Jammed,
    /// Free to move along `witness`; `cone` is the closed escape cone as
    /// `(start, end)` angles in radians, counter-clockwise, with `end` possibly
    /// past 2π.
    Movable { witness: Point2, cone: Option<(f64, f64)> },
    /// No contacts at all.
    Rattler,
}

impl Verdict {
    pub fn is_jammed(&self) -> bool {
        matches!(self, Verdict::Jammed)
    }
}

/// Jamming test on a set of contact normals.
///
/// Jammed iff there are at least three normals and the largest circular gap
/// between consecutive normal angles is below `π - angle_slack`. Otherwise the
/// normals fit in an arc of width `2π − gap` and the escape cone is the set of
/// directions within `π/2` of both ends of that arc; the witness is the middle
/// of the arc, which satisfies `w·n >= 0` for every normal.
pub fn is_locally_jammed(normals: &[Point2], angle_slack: f64) -> Verdict {
    if normals.is_empty() {
        return Verdict::Rattler;
    }
    let mut angles: Vec<f64> = normals.iter().map(|n| n.angle()).collect();
    angles.sort_by(f64::total_cmp);
    let (gap, start) = largest_gap(&angles);
    if normals.len() >= 3 && gap < PI - angle_slack {
        return Verdict::Jammed;
    }
    let witness = Point2::from_angle(start + 0.5 * gap + PI);
    let lo = (start + 1.5 * PI).rem_euclid(TAU);
    let cone = (lo, lo + (gap - PI).max(0.0));
    Verdict::Movable { witness, cone: Some(cone) }
}

/// Largest circular gap between sorted angles, with the angle it starts at.
fn largest_gap(sorted: &[f64]) -> (f64, f64) {
    let n = sorted.len();
    if n == 1 {
        return (TAU, sorted[0]);
    }
    let mut best = (sorted[0] + TAU - sorted[n - 1], sorted[n - 1]);
    for w in sorted.windows(2) {
        let g = w[1] - w[0];
        if g > best.0 {
            best = (g, w[0]);
        }
    }
    best
}

/// Brute-force cross-check: scan `k` equally spaced directions and report
/// movable iff one of them has `d·n >= 0` for every normal. Only meant to
/// validate [`is_locally_jammed`].
pub fn direction_oracle(normals: &[Point2], k: usize) -> bool {
    assert!(k >= 360, "direction oracle needs at least 360 directions");
    (0..k).any(|j| {
        let d = Point2::from_angle(TAU * j as f64 / k as f64);
        normals.iter().all(|n| d.dot(*n) >= 0.0)
    })
}

/// Pairwise overlap statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapAudit {
    /// Largest penetration depth `2r - d` over all pairs (0 when none overlap).
    pub max_penetration: f64,
    /// Smallest clearance `d - 2r` over all pairs; `+inf` for fewer than two discs.
    pub min_gap: f64,
    /// Pairs whose penetration exceeds `2r·tangency_rel`, with their depth.
    pub violations: Vec<(usize, usize, f64)>,
    /// Discs crossing a wall by more than `r·tangency_rel`, with the depth.
    pub wall_violations: Vec<(usize, f64)>,
}

impl OverlapAudit {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.wall_violations.is_empty()
    }
}

/// Exact pairwise scan for penetrations, plus wall containment.
pub fn overlap_audit(config: &Configuration, tangency_rel: f64) -> OverlapAudit {
    let r = config.radius;
    let two_r = 2.0 * r;
    let mut audit =
        OverlapAudit { max_penetration: 0.0, min_gap: f64::INFINITY, violations: Vec::new(), wall_violations: Vec::new() };
    for (i, &p) in config.centers.iter().enumerate() {
        for (j, &q) in config.centers.iter().enumerate().skip(i + 1) {
            let gap = p.dist(q) - two_r;
            audit.min_gap = audit.min_gap.min(gap);
            if gap < 0.0 {
                audit.max_penetration = audit.max_penetration.max(-gap);
                if -gap > two_r * tangency_rel {
                    audit.violations.push((i, j, -gap));
                }
            }
        }
        for wall in config.container.walls() {
            let g = wall.gap(p, r);
            if g < -r * tangency_rel {
                audit.wall_violations.push((i, -g));
            }
        }
    }
    audit
}

/// Ok when nothing overlaps or leaves the container beyond tolerance.
pub fn check_valid(config: &Configuration, tangency_rel: f64) -> Result<()> {
    audit_to_error(&overlap_audit(config, tangency_rel))
}

fn audit_to_error(audit: &OverlapAudit) -> Result<()> {
    if let Some(&(i, j, depth)) = audit.violations.first() {
        return Err(Error::Overlap { i, j, depth });
    }
    if let Some(&(i, depth)) = audit.wall_violations.first() {
        return Err(Error::OutOfBox { i, depth });
    }
    Ok(())
}

/// Contact graph with relative tolerances so it survives uniform scaling.
pub fn contact_graph(config: &Configuration, tol: &Tolerances) -> Result<ContactGraph> {
    audit_to_error(&overlap_audit(config, tol.tangency_rel))?;
    let r = config.radius;
    let two_r = 2.0 * r;
    let n = config.len();
    let mut contacts = vec![Vec::new(); n];
    for i in 0..n {
        let p = config.centers[i];
        for j in (i + 1)..n {
            let q = config.centers[j];
            let d = p.dist(q);
            if (d - two_r).abs() <= two_r * tol.tangency_rel {
                let u = (p - q) * (1.0 / d);
                contacts[i].push(Contact { obstacle: Obstacle::Disc(j), normal: u });
                contacts[j].push(Contact { obstacle: Obstacle::Disc(i), normal: -u });
            }
        }
        for wall in config.container.walls() {
            if wall.gap(p, r) <= r * tol.tangency_rel {
                contacts[i].push(Contact { obstacle: Obstacle::Wall(wall.side), normal: wall.inward_normal() });
            }
        }
    }
    for cs in &mut contacts {
        cs.sort_by(|a, b| a.normal.angle().total_cmp(&b.normal.angle()));
    }
    Ok(ContactGraph { contacts })
}

/// A movable disc with its escape cone, for error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MovableDisc {
    pub index: usize,
    pub witness: Option<Point2>,
    pub cone: Option<(f64, f64)>,
}

/// Per-disc jamming verdicts plus global counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JammingReport {
    pub n: usize,
    pub stable: bool,
    pub movable_count: usize,
    pub rattler_count: usize,
    pub overlap_violations: usize,
    pub contact_edges: usize,
    pub wall_contacts: usize,
    pub verdicts: Vec<Verdict>,
}

impl JammingReport {
    /// Indices of movable discs (rattlers included).
    pub fn movable(&self) -> Vec<usize> {
        self.verdicts.iter().enumerate().filter(|(_, v)| !v.is_jammed()).map(|(i, _)| i).collect()
    }

    pub fn movable_discs(&self) -> Vec<MovableDisc> {
        self.verdicts
            .iter()
            .enumerate()
            .filter_map(|(index, v)| match *v {
                Verdict::Jammed => None,
                Verdict::Movable { witness, cone } => Some(MovableDisc { index, witness: Some(witness), cone }),
                Verdict::Rattler => Some(MovableDisc { index, witness: None, cone: None }),
            })
            .collect()
    }
}

/// Apply [`is_locally_jammed`] to every disc, walls included.
///
/// Rattlers are counted in both `rattler_count` and `movable_count`; the
/// configuration is stable iff `movable_count == 0`.
pub fn verify_stable(config: &Configuration, tol: &Tolerances) -> Result<JammingReport> {
    let graph = contact_graph(config, tol)?;
    Ok(report_from_graph(&graph, tol))
}

pub fn report_from_graph(graph: &ContactGraph, tol: &Tolerances) -> JammingReport {
    let verdicts: Vec<Verdict> =
        (0..graph.contacts.len()).map(|i| is_locally_jammed(&graph.normals(i), tol.angle_slack)).collect();
    let movable_count = verdicts.iter().filter(|v| !v.is_jammed()).count();
    let rattler_count = verdicts.iter().filter(|v| matches!(v, Verdict::Rattler)).count();
    JammingReport {
        n: verdicts.len(),
        stable: movable_count == 0,
        movable_count,
        rattler_count,
        overlap_violations: 0,
        contact_edges: graph.disc_edges().len(),
        wall_contacts: graph.wall_contacts().len(),
        verdicts,
    }
}
