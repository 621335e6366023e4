use rayon::prelude::*;
use serde::Serialize;

use super::curve::{top_start, CurveFamily};
use super::{BridgeSlot, Piece, Role, Row};
use crate::config::{Configuration, Container};
use crate::error::{Error, Result};
use crate::geom::{bisect, chord_step, circle_circle_intersections, reflect_across_horizontal, reflect_across_vertical, Point2, Tolerances};

/// Number of log-spaced probes used to bracket the closure residual.
pub const SCAN_PROBES: usize = 64;
/// Decades covered by the probe scan, ending at `eps_hi`.
pub const SCAN_DECADES: f64 = 12.0;
/// Default upper end of the epsilon scan.
pub const DEFAULT_EPS_HI: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    /// `a_{i+1}` and `c_i` are more than 4 apart, so no `b_{i+1}` exists.
    NoMiddlePoint,
    /// `b_{i+1}` sits higher than 2 above the axis, so no `c_{i+1}` exists.
    NoAxisPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Termination {
    /// 1-based index of the step that could not be completed.
    pub index: usize,
    pub reason: TerminationReason,
}

/// Half of a bridge: rows `a` (on the curve), `b` (middle) and `c` (on the
/// axis `y = 0`). Indices are 1-based in the names and 0-based in the vectors.
#[derive(Debug, Clone, Serialize)]
pub struct BridgeChain {
    pub a: Vec<Point2>,
    pub b: Vec<Point2>,
    pub c: Vec<Point2>,
    /// Index of the last constructed `b`.
    pub n: usize,
    pub epsilon_used: f64,
    /// x-coordinate of the mirror line `l` through `b_N`.
    pub mirror_x: f64,
    pub terminated_at: Option<Termination>,
}

impl BridgeChain {
    /// `x(b_N) − x(a_N) − 1`; zero when the mirrored chain closes up.
    pub fn closure_residual(&self) -> f64 {
        let n = self.n;
        self.b[n - 1].x - self.a[n - 1].x - 1.0
    }

    /// Every construction tangency as `(label, distance − 2)`, recomputed from
    /// the stored coordinates.
    pub fn tangency_residuals(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        let mut push = |label: String, p: Point2, q: Point2| out.push((label, p.dist(q) - 2.0));
        push("a1-b1".into(), self.a[0], self.b[0]);
        if !self.c.is_empty() {
            push("b1-c1".into(), self.b[0], self.c[0]);
        }
        for i in 1..self.n {
            let k = i + 1;
            push(format!("a{i}-a{k}"), self.a[i - 1], self.a[i]);
            push(format!("a{k}-b{k}"), self.a[i], self.b[i]);
            push(format!("b{k}-c{i}"), self.b[i], self.c[i - 1]);
            if i < self.c.len() {
                push(format!("b{k}-c{k}"), self.b[i], self.c[i]);
            }
        }
        out
    }

    pub fn max_tangency_residual(&self) -> f64 {
        self.tangency_residuals().iter().map(|(_, r)| r.abs()).fold(0.0, f64::max)
    }
}

/// Grow the half chain until `b_{max_n}` exists or the construction breaks
/// down. `c_i` is built only for `i < max_n`, since the mirrored bridge never
/// uses `c_N`.
pub fn build_half_chain(family: &CurveFamily, max_n: usize, tol: &Tolerances) -> Result<BridgeChain> {
    if max_n < 2 {
        return Err(Error::param("N", "bridge needs N >= 2"));
    }
    family.check_admissible()?;
    let s3 = 3f64.sqrt();
    let mut a = vec![Point2::new(0.0, top_start())];
    let mut b = vec![Point2::new(0.0, s3)];
    let mut c = vec![Point2::new(1.0, 0.0)];
    let curve = |x: f64| family.eval_unchecked(x);
    let mut terminated_at = None;

    while b.len() < max_n {
        let k = b.len() + 1;
        let prev_a = *a.last().unwrap();
        let prev_c = *c.last().unwrap();
        let xa = chord_step(curve, prev_a.x, 2.0)?;
        let next_a = Point2::new(xa, curve(xa));
        if next_a.dist(prev_c) > 4.0 + tol.solver_abs {
            terminated_at = Some(Termination { index: k, reason: TerminationReason::NoMiddlePoint });
            break;
        }
        let pts = circle_circle_intersections(next_a, 2.0, prev_c, 2.0, tol.solver_abs)?;
        // Points come sorted by x; the last one is the right-hand branch.
        let Some(&next_b) = pts.last() else {
            terminated_at = Some(Termination { index: k, reason: TerminationReason::NoMiddlePoint });
            break;
        };
        a.push(next_a);
        b.push(next_b);
        if b.len() == max_n {
            break;
        }
        if next_b.y > 2.0 {
            terminated_at = Some(Termination { index: k, reason: TerminationReason::NoAxisPoint });
            break;
        }
        c.push(Point2::new(next_b.x + (4.0 - next_b.y * next_b.y).sqrt(), 0.0));
    }

    let n = b.len();
    c.truncate(n - 1);
    Ok(BridgeChain { mirror_x: b[n - 1].x, a, b, c, n, epsilon_used: family.epsilon, terminated_at })
}

/// Closure residual at `eps`, or `None` if the chain stops short of `n`.
fn closure_at(family: &CurveFamily, n: usize, eps: f64, tol: &Tolerances) -> Result<Option<f64>> {
    let chain = build_half_chain(&family.with_epsilon(eps), n, tol)?;
    Ok((chain.n == n).then(|| chain.closure_residual()))
}

/// Find `ε*` so that the chain reaches `b_N` with `x(b_N) = x(a_N) + 1`.
///
/// Probes 64 log-spaced values over twelve decades ending at `eps_hi`, takes
/// the first sign change of the residual (a chain that stops short counts as
/// positive) and bisects it to floating-point convergence.
pub fn tune_epsilon(family: &CurveFamily, n: usize, eps_hi: f64, tol: &Tolerances) -> Result<(f64, BridgeChain)> {
    if n < 2 {
        return Err(Error::param("N", "bridge needs N >= 2"));
    }
    if !(eps_hi.is_finite() && eps_hi > 0.0) {
        return Err(Error::param("eps_hi", "must be positive and finite"));
    }
    family.check_admissible()?;
    let fail = |reason: String| Error::TuningFailure { n, eps_hi, reason };

    let probes: Vec<f64> = (0..SCAN_PROBES)
        .map(|k| {
            let t = (SCAN_PROBES - 1 - k) as f64 / (SCAN_PROBES - 1) as f64;
            eps_hi * 10f64.powf(-SCAN_DECADES * t)
        })
        .collect();
    let values: Vec<f64> = probes
        .par_iter()
        .map(|&e| closure_at(family, n, e, tol).map(|g| g.unwrap_or(1.0)))
        .collect::<Result<_>>()?;

    let accept = 10.0 * tol.solver_abs;
    let bracket = values.windows(2).position(|w| w[0] < 0.0 && w[1] >= 0.0);
    let Some(k) = bracket else {
        return Err(fail(format!(
            "no sign change of the closure residual among {SCAN_PROBES} probes (residual at smallest probe {:.3e})",
            values[0]
        )));
    };
    if values[k + 1].abs() <= accept {
        let eps = probes[k + 1];
        return Ok((eps, build_half_chain(&family.with_epsilon(eps), n, tol)?));
    }

    let g = |e: f64| closure_at(family, n, e, tol).ok().flatten().unwrap_or(1.0);
    let (mut lo, mut hi) = (probes[k], probes[k + 1]);
    let eps = bisect(&g, &mut lo, &mut hi);
    let chain = build_half_chain(&family.with_epsilon(eps), n, tol)?;
    if chain.n != n {
        return Err(fail(format!("chain stops at b{} at the bisected epsilon {eps}", chain.n)));
    }
    let residual = chain.closure_residual();
    if residual.abs() > accept {
        return Err(fail(format!("bisection ended on a jump: residual {residual:.3e} at epsilon {eps}")));
    }
    Ok((eps, chain))
}

fn ensure_closed(chain: &BridgeChain, tol: &Tolerances) -> Result<()> {
    let r = chain.closure_residual();
    if r.abs() > 10.0 * tol.solver_abs {
        return Err(Error::Construction(format!("chain is not closed: x(b_N) - x(a_N) - 1 = {r:.3e}")));
    }
    Ok(())
}

fn slot(row: Row, index: usize, lower: bool, far: bool) -> Role {
    Role::Bridge(BridgeSlot { side: 0, row, index, lower, far })
}

/// Upper half-chain points with their roles, in the order a, b, c.
fn upper_half(chain: &BridgeChain) -> Vec<(Point2, Role)> {
    let mut out = Vec::with_capacity(3 * chain.n);
    for (row, pts) in [(Row::A, &chain.a), (Row::B, &chain.b), (Row::C, &chain.c)] {
        out.extend(pts.iter().enumerate().map(|(i, &p)| (p, slot(row, i + 1, false, false))));
    }
    out
}

fn on_mirror_line(chain: &BridgeChain, role: &Role) -> bool {
    matches!(role, Role::Bridge(s) if s.row == Row::B && s.index == chain.n)
}

/// Reject centers closer than `2·solver_abs`.
pub(crate) fn check_no_coincidence(centers: &[Point2], tol: &Tolerances) -> Result<()> {
    for i in 0..centers.len() {
        for j in 0..i {
            if centers[i].dist(centers[j]) <= 2.0 * tol.solver_abs {
                return Err(Error::Construction(format!("discs {j} and {i} coincide at {:?}", centers[i])));
            }
        }
    }
    Ok(())
}

/// The full bridge as a labelled piece: upper half, its mirror in the axis,
/// then the mirror of both across `l`, skipping the two discs on `l`.
pub fn symmetric_bridge_piece(chain: &BridgeChain, tol: &Tolerances) -> Result<Piece> {
    ensure_closed(chain, tol)?;
    let upper = upper_half(chain);
    let mut items = upper.clone();
    for (p, role) in &upper {
        if let Role::Bridge(s) = role {
            if s.row != Row::C {
                items.push((reflect_across_horizontal(*p, 0.0), Role::Bridge(BridgeSlot { lower: true, ..*s })));
            }
        }
    }
    let near = items.clone();
    for (p, role) in &near {
        if on_mirror_line(chain, role) {
            continue;
        }
        if let Role::Bridge(s) = role {
            items.push((reflect_across_vertical(*p, chain.mirror_x), Role::Bridge(BridgeSlot { far: true, ..*s })));
        }
    }
    let (centers, roles): (Vec<_>, Vec<_>) = items.into_iter().unzip();
    check_no_coincidence(&centers, tol)?;
    Ok(Piece { config: Configuration::new(1.0, centers, Container::PLANE)?, roles })
}

/// Planar unit-disc bridge; `10N − 4` discs.
pub fn complete_symmetric_bridge(chain: &BridgeChain, tol: &Tolerances) -> Result<Configuration> {
    Ok(symmetric_bridge_piece(chain, tol)?.config)
}

/// Half-bridge resting on the wall `y = wall_y` (its c-row at `wall_y + 1`),
/// closed by mirroring across `l`; `6N − 3` discs.
pub fn wall_bridge_piece(chain: &BridgeChain, wall_y: f64, tol: &Tolerances) -> Result<Piece> {
    ensure_closed(chain, tol)?;
    let lift = Point2::new(0.0, wall_y + 1.0);
    let upper = upper_half(chain);
    let mut items: Vec<(Point2, Role)> = upper.iter().map(|&(p, r)| (p + lift, r)).collect();
    for &(p, role) in &upper {
        if on_mirror_line(chain, &role) {
            continue;
        }
        if let Role::Bridge(s) = role {
            items.push((reflect_across_vertical(p, chain.mirror_x) + lift, Role::Bridge(BridgeSlot { far: true, ..s })));
        }
    }
    let (centers, roles): (Vec<_>, Vec<_>) = items.into_iter().unzip();
    check_no_coincidence(&centers, tol)?;
    let container = Container { y_min: Some(wall_y), ..Container::PLANE };
    Ok(Piece { config: Configuration::new(1.0, centers, container)?, roles })
}

/// Tune `ε` for `N` and build the wall-resting bridge.
pub fn build_wall_bridge(family: &CurveFamily, n: usize, wall_y: f64, eps_hi: f64, tol: &Tolerances) -> Result<Configuration> {
    if !wall_y.is_finite() {
        return Err(Error::param("wall_y", "must be finite"));
    }
    let (_, chain) = tune_epsilon(family, n, eps_hi, tol)?;
    Ok(wall_bridge_piece(&chain, wall_y, tol)?.config)
}
