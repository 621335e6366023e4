//! Hard-disc Metropolis chain: pick a disc uniformly, propose a uniform
//! displacement in a disc of radius `step_radius`, accept iff the moved disc
//! stays in the container and overlaps nothing.

use std::collections::HashMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::geom::{circle_circle_intersections, Point2, Tolerances};
use crate::verifier::{verify_stable, Verdict};

/// Generator identity recorded in every report.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

pub type ChainRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChainRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainParams {
    pub steps: u64,
    pub step_radius: f64,
    pub seed: u64,
    pub record_interval: u64,
}

impl ChainParams {
    pub fn new(steps: u64, step_radius: f64, seed: u64) -> Self {
        ChainParams { steps, step_radius, seed, record_interval: (steps / 10).max(1) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::param("steps", "must be at least 1"));
        }
        if !(self.step_radius.is_finite() && self.step_radius > 0.0) {
            return Err(Error::param("step_radius", "must be positive and finite"));
        }
        if self.record_interval == 0 {
            return Err(Error::param("record_interval", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStats {
    pub proposed: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    /// Largest distance of any disc from its starting position.
    pub max_center_displacement: f64,
    /// Accepted moves per `record_interval` block.
    pub trace: Vec<u64>,
    pub seed: u64,
    pub rng: &'static str,
}

/// How proposals are checked against the other discs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Neighbours {
    FullScan,
    #[default]
    Grid,
}

/// Buckets of side `2r`, so every disc that can overlap a proposal sits in
/// one of the nine cells around it.
#[derive(Debug, Clone)]
struct CellGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl CellGrid {
    fn new(centers: &[Point2], radius: f64) -> Self {
        let mut g = CellGrid { cell: 2.0 * radius, buckets: HashMap::new() };
        for (i, &p) in centers.iter().enumerate() {
            g.buckets.entry(g.key(p)).or_default().push(i);
        }
        g
    }

    fn key(&self, p: Point2) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    fn relocate(&mut self, i: usize, from: Point2, to: Point2) {
        let (a, b) = (self.key(from), self.key(to));
        if a == b {
            return;
        }
        if let Some(v) = self.buckets.get_mut(&a) {
            v.retain(|&j| j != i);
        }
        self.buckets.entry(b).or_default().push(i);
    }

    fn any_near(&self, p: Point2, mut hit: impl FnMut(usize) -> bool) -> bool {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if v.iter().any(|&j| hit(j)) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn inside_box(config: &Configuration, p: Point2) -> bool {
    config.container.walls().all(|w| w.gap(p, config.radius) >= 0.0)
}

fn check_valid(config: &Configuration) -> Result<()> {
    crate::verifier::check_valid(config, Tolerances::default().tangency_rel)
}

/// Draw one proposal: disc index, then `u`, `v` for `ρ = step·√u`, `θ = 2πv`.
fn propose(rng: &mut ChainRng, n: usize, step: f64) -> (usize, Point2) {
    let i = rng.gen_range(0..n);
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    let rho = step * u.sqrt();
    (i, Point2::from_angle(TAU * v) * rho)
}

fn blocked_full(config: &Configuration, i: usize, q: Point2) -> bool {
    let limit = 4.0 * config.radius * config.radius;
    config.centers.iter().enumerate().any(|(j, &p)| j != i && p.dist_sq(q) < limit)
}

/// One Metropolis step by full scan. Returns whether the move was accepted;
/// a rejected step leaves `config` untouched.
pub fn metropolis_step(config: &mut Configuration, step_radius: f64, rng: &mut ChainRng) -> bool {
    if config.is_empty() {
        return false;
    }
    let (i, d) = propose(rng, config.len(), step_radius);
    let q = config.centers[i] + d;
    if !inside_box(config, q) || blocked_full(config, i, q) {
        return false;
    }
    config.centers[i] = q;
    true
}

/// Sequential chain state.
pub struct Chain {
    config: Configuration,
    initial: Vec<Point2>,
    grid: Option<CellGrid>,
    rng: ChainRng,
    step_radius: f64,
}

impl Chain {
    pub fn new(config: Configuration, step_radius: f64, seed: u64, neighbours: Neighbours) -> Result<Self> {
        check_valid(&config)?;
        let grid = (neighbours == Neighbours::Grid).then(|| CellGrid::new(&config.centers, config.radius));
        Ok(Chain { initial: config.centers.clone(), config, grid, rng: rng_from_seed(seed), step_radius })
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    /// One step; returns the displacement of the moved disc from its start
    /// position when the move is accepted.
    pub fn step(&mut self) -> Option<f64> {
        let cfg = &self.config;
        if cfg.is_empty() {
            return None;
        }
        let (i, d) = propose(&mut self.rng, cfg.len(), self.step_radius);
        let p = cfg.centers[i];
        let q = p + d;
        if !inside_box(cfg, q) {
            return None;
        }
        let blocked = match &self.grid {
            None => blocked_full(cfg, i, q),
            Some(g) => {
                let limit = 4.0 * cfg.radius * cfg.radius;
                g.any_near(q, |j| j != i && cfg.centers[j].dist_sq(q) < limit)
            }
        };
        if blocked {
            return None;
        }
        if let Some(g) = &mut self.grid {
            g.relocate(i, p, q);
        }
        self.config.centers[i] = q;
        Some(q.dist(self.initial[i]))
    }

    pub fn into_config(self) -> Configuration {
        self.config
    }
}

/// Callback that sees the chain's step count and configuration.
pub type Snapshot<'a> = &'a mut dyn FnMut(u64, &Configuration) -> Result<()>;

/// Run `params.steps` proposals. The configuration is audited every
/// `record_interval` steps, and `snapshot` (if given) sees it at the same
/// moments.
pub fn run_chain_with(
    config: &Configuration,
    params: &ChainParams,
    neighbours: Neighbours,
    mut snapshot: Option<Snapshot<'_>>,
) -> Result<(Configuration, ChainStats)> {
    params.validate()?;
    let mut chain = Chain::new(config.clone(), params.step_radius, params.seed, neighbours)?;
    let mut accepted = 0u64;
    let mut max_disp = 0.0f64;
    let mut trace = Vec::new();
    let mut block = 0u64;
    for t in 1..=params.steps {
        if let Some(d) = chain.step() {
            accepted += 1;
            block += 1;
            max_disp = max_disp.max(d);
        }
        if t % params.record_interval == 0 || t == params.steps {
            trace.push(block);
            block = 0;
            check_valid(chain.config())?;
            if let Some(f) = snapshot.as_deref_mut() {
                f(t, chain.config())?;
            }
        }
    }
    let stats = ChainStats {
        proposed: params.steps,
        accepted,
        acceptance_rate: accepted as f64 / params.steps as f64,
        max_center_displacement: max_disp,
        trace,
        seed: params.seed,
        rng: RNG_ALGORITHM,
    };
    Ok((chain.into_config(), stats))
}

pub fn run_chain(config: &Configuration, params: &ChainParams) -> Result<(Configuration, ChainStats)> {
    run_chain_with(config, params, Neighbours::Grid, None)
}

/// Same centers, radius times `factor`.
pub fn shrink_radius(config: &Configuration, factor: f64) -> Result<Configuration> {
    if !(factor > 0.0 && factor <= 1.0) {
        return Err(Error::param("factor", format!("must lie in (0, 1], got {factor}")));
    }
    Ok(Configuration { radius: config.radius * factor, ..config.clone() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeRow {
    pub factor: f64,
    pub stats: ChainStats,
}

/// Run one chain per shrink factor, all from the same seed. Chains run in
/// parallel; rows come back in the order of `factors`.
pub fn escape_experiment(config: &Configuration, factors: &[f64], params: &ChainParams) -> Result<Vec<EscapeRow>> {
    params.validate()?;
    factors
        .par_iter()
        .map(|&factor| {
            let shrunk = shrink_radius(config, factor)?;
            let (_, stats) = run_chain(&shrunk, params)?;
            Ok(EscapeRow { factor, stats })
        })
        .collect()
}

fn valid_position(config: &Configuration, i: usize, q: Point2, rel: f64) -> bool {
    let r = config.radius;
    let min_sq = (2.0 * r * (1.0 - rel)).powi(2);
    config.container.walls().all(|w| w.gap(q, r) >= -r * rel)
        && config.centers.iter().enumerate().all(|(j, &p)| j == i || p.dist_sq(q) >= min_sq)
}

/// Distance from disc `i` to the nearest other position it could occupy
/// with everything else fixed; 0 when the disc is not jammed.
///
/// The admissible region for the disc is the container shrunk by `r` minus
/// the open discs of radius `2r` around the other centers. For a jammed disc
/// its center is an isolated point of that region, and the nearest other
/// point lies on the boundary: at a crossing of two boundary curves, at the
/// point of a circle closest to the center, or at the foot of a wall.
pub fn escape_radius(config: &Configuration, i: usize, tol: &Tolerances) -> Result<f64> {
    let report = verify_stable(config, tol)?;
    if !matches!(report.verdicts[i], Verdict::Jammed) {
        return Ok(0.0);
    }
    Ok(escape_radius_jammed(config, i, tol))
}

fn escape_radius_jammed(config: &Configuration, i: usize, tol: &Tolerances) -> f64 {
    let r = config.radius;
    let p = config.centers[i];
    let rel = tol.tangency_rel;
    let same = r * 1e-7;
    let two_r = 2.0 * r;
    let mut reach = 4.0 * r;
    loop {
        let near: Vec<Point2> = config
            .centers
            .iter()
            .enumerate()
            .filter(|&(j, q)| j != i && q.dist(p) < two_r + reach)
            .map(|(_, &q)| q)
            .collect();
        // Wall lines the center may not cross, as (is_vertical, coordinate).
        let lines: Vec<(bool, f64)> = config
            .container
            .walls()
            .map(|w| match w.side {
                crate::config::Side::Left => (true, w.coord + r),
                crate::config::Side::Right => (true, w.coord - r),
                crate::config::Side::Bottom => (false, w.coord + r),
                crate::config::Side::Top => (false, w.coord - r),
            })
            .collect();

        let mut cands: Vec<Point2> = Vec::new();
        for (a, &ca) in near.iter().enumerate() {
            let u = p - ca;
            if u.norm() > 0.0 {
                cands.push(ca + u.normalized() * two_r);
            }
            for &cb in &near[..a] {
                if let Ok(pts) = circle_circle_intersections(ca, two_r, cb, two_r, 1e-15 * r) {
                    cands.extend(pts);
                }
            }
            for &(vertical, c) in &lines {
                let off = if vertical { c - ca.x } else { c - ca.y };
                if off.abs() <= two_r {
                    let h = (two_r * two_r - off * off).sqrt();
                    for s in [-h, h] {
                        cands.push(if vertical { Point2::new(c, ca.y + s) } else { Point2::new(ca.x + s, c) });
                    }
                }
            }
        }
        for &(vertical, c) in &lines {
            cands.push(if vertical { Point2::new(c, p.y) } else { Point2::new(p.x, c) });
            for &(v2, c2) in &lines {
                if vertical && !v2 {
                    cands.push(Point2::new(c, c2));
                }
            }
        }

        let best = cands
            .into_iter()
            .filter(|q| q.dist(p) > same && valid_position(config, i, *q, rel))
            .map(|q| q.dist(p))
            .fold(f64::INFINITY, f64::min);
        if best <= reach || reach > 1e6 * r {
            return best;
        }
        reach *= 2.0;
    }
}

/// Smallest escape radius over all discs. Proposals shorter than this can
/// never be accepted, so a chain with `step_radius` below it is frozen.
pub fn freezing_radius(config: &Configuration, tol: &Tolerances) -> Result<f64> {
    let report = verify_stable(config, tol)?;
    if report.movable_count > 0 {
        return Ok(0.0);
    }
    Ok((0..config.len())
        .into_par_iter()
        .map(|i| escape_radius_jammed(config, i, tol))
        .reduce(|| f64::INFINITY, f64::min))
}
