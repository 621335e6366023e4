//! Stable configurations in the unit square from four junctions and four
//! bridges.
//!
//! Everything is built in a corner frame: unit discs, junction at the origin,
//! walls at `−1` and `L − 1`. One junction plus the bridge along the bottom
//! wall forms a side piece; the square is four copies of it turned by
//! quarter turns about the container center, then scaled into `[0, 1]²`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::bridge::{check_no_coincidence, tune_epsilon, wall_bridge_piece, BridgeChain, DEFAULT_EPS_HI};
use super::curve::CurveFamily;
use super::junction::{junction_centers, junction_piece, DIAGONAL, FAN_RIGHT};
use super::{BridgeSlot, Piece, Role, Row};
use crate::config::{Configuration, Container};
use crate::error::{Error, Result};
use crate::geom::{bisect, Point2, Tolerances};
use crate::verifier::{overlap_audit, verify_stable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// Half-bridges resting on the walls, pinned by the junction fans.
    WallBridges,
    /// Full symmetric bridges lifted off the walls.
    InteriorBridges,
}

impl Layout {
    pub fn as_str(self) -> &'static str {
        match self {
            Layout::WallBridges => "wall-bridges",
            Layout::InteriorBridges => "interior-bridges",
        }
    }

    /// Smallest bridge length this layout accepts.
    pub fn n_min(self) -> usize {
        4
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Layout {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wall-bridges" => Ok(Layout::WallBridges),
            "interior-bridges" => Ok(Layout::InteriorBridges),
            other => Err(Error::param("layout", format!("unknown layout `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SquareOptions {
    pub family: CurveFamily,
    pub eps_hi: f64,
    pub tol: Tolerances,
}

impl Default for SquareOptions {
    fn default() -> Self {
        SquareOptions { family: CurveFamily::default(), eps_hi: DEFAULT_EPS_HI, tol: Tolerances::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssemblyMetrics {
    pub n: usize,
    pub r: f64,
    pub n_times_r: f64,
    #[serde(rename = "N")]
    pub bridge_n: usize,
    pub epsilon_used: f64,
    /// Factor taking the unit-disc frame to the unit square.
    pub scale: f64,
    pub layout: Layout,
    /// Side length of the container in the unit-disc frame.
    pub side_length: f64,
    /// Bridge offsets from the corner at the near and far end.
    pub near_offset: f64,
    pub far_offset: f64,
}

/// x-position of the row start that puts `moving(t)` at distance 2 from
/// `anchor`, searched on `[anchor.x, anchor.x + 2]`.
fn tangent_offset(anchor: Point2, moving: impl Fn(f64) -> Point2) -> Result<f64> {
    let f = |t: f64| moving(t).dist(anchor) - 2.0;
    let (mut lo, mut hi) = (anchor.x, anchor.x + 2.0);
    if !(f(lo) < 0.0 && f(hi) >= 0.0) {
        return Err(Error::Construction("attachment tangency is not bracketed".into()));
    }
    Ok(bisect(&f, &mut lo, &mut hi))
}

struct SideLayout {
    /// Bridge discs of the side piece in the corner frame.
    items: Vec<(Point2, Role)>,
    near: f64,
    far: f64,
    side_length: f64,
}

fn wall_bridges_side(chain: &BridgeChain, tol: &Tolerances) -> Result<SideLayout> {
    let j = junction_centers();
    let s3 = 3f64.sqrt();
    // Near end: the first a-disc leans on the diagonal junction disc; b1 would
    // land on the fan and is left out, c1 then touches the fan instead.
    let near = tangent_offset(j[DIAGONAL as usize], |t| Point2::new(t, 2.0 + s3))?;
    // Far end: b1 leans on the next corner's fan disc.
    let far = tangent_offset(j[FAN_RIGHT as usize], |t| Point2::new(t, s3))?;
    let bridge = wall_bridge_piece(chain, -1.0, tol)?;
    let shift = Point2::new(near, 0.0);
    let items = bridge
        .config
        .centers
        .iter()
        .zip(&bridge.roles)
        .filter(|(_, role)| !matches!(role, Role::Bridge(s) if s.row == Row::B && s.index == 1 && !s.far))
        .map(|(&p, &role)| (p + shift, role))
        .collect();
    Ok(SideLayout { items, near, far, side_length: 2.0 + near + far + 2.0 * chain.mirror_x })
}

fn interior_bridges_side(chain: &BridgeChain, tol: &Tolerances) -> Result<SideLayout> {
    let j = junction_centers();
    let s3 = 3f64.sqrt();
    // Axis lifted so the lower a1 rests on the wall; the lower b1 leans on the fan.
    let axis = 2.0 + s3;
    let offset = tangent_offset(j[FAN_RIGHT as usize], |t| Point2::new(t, axis - s3))?;
    let full = super::bridge::symmetric_bridge_piece(chain, tol)?;
    let shift = Point2::new(offset, axis);
    let items = full.config.centers.iter().zip(&full.roles).map(|(&p, &role)| (p + shift, role)).collect();
    Ok(SideLayout { items, near: offset, far: offset, side_length: 2.0 + 2.0 * offset + 2.0 * chain.mirror_x })
}

/// Quarter turn `k` about `(m, m)`, done with exact integer cosines.
fn quarter_turn(p: Point2, k: usize, m: f64) -> Point2 {
    let (dx, dy) = (p.x - m, p.y - m);
    let (x, y) = match k % 4 {
        0 => (dx, dy),
        1 => (-dy, dx),
        2 => (-dx, -dy),
        _ => (dy, -dx),
    };
    Point2::new(x + m, y + m)
}

/// Build the stable square for bridge length `n`.
///
/// The result is verified before it is returned: any overlap or movable disc
/// turns into an assembly failure carrying the offending discs and cones.
pub fn assemble_square_piece(n: usize, layout: Layout, opts: &SquareOptions) -> Result<(Piece, AssemblyMetrics)> {
    opts.tol.validate()?;
    if n < layout.n_min() {
        return Err(Error::param("N", format!("layout {layout} needs N >= {}", layout.n_min())));
    }
    let (eps, chain) = tune_epsilon(&opts.family, n, opts.eps_hi, &opts.tol)?;
    let side = match layout {
        Layout::WallBridges => wall_bridges_side(&chain, &opts.tol)?,
        Layout::InteriorBridges => interior_bridges_side(&chain, &opts.tol)?,
    };
    let l = side.side_length;
    let m = (l - 2.0) / 2.0;
    let junction = junction_piece();

    let mut items: Vec<(Point2, Role)> = Vec::new();
    for k in 0..4 {
        for (&p, &role) in junction.config.centers.iter().zip(&junction.roles) {
            let Role::Junction { slot, .. } = role else { unreachable!() };
            items.push((quarter_turn(p, k, m), Role::Junction { corner: k as u8, slot }));
        }
        for &(p, role) in &side.items {
            let Role::Bridge(s) = role else { unreachable!() };
            items.push((quarter_turn(p, k, m), Role::Bridge(BridgeSlot { side: k as u8, ..s })));
        }
    }
    // Pieces may share a disc exactly; keep the first copy.
    let mut merged: Vec<(Point2, Role)> = Vec::with_capacity(items.len());
    for (p, role) in items {
        if !merged.iter().any(|(q, _)| q.dist(p) <= 2.0 * opts.tol.solver_abs) {
            merged.push((p, role));
        }
    }
    let (centers, roles): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
    check_no_coincidence(&centers, &opts.tol)?;

    let s = 1.0 / l;
    let unit_frame = Configuration::new(1.0, centers, Container::rect(-1.0, -1.0, l - 1.0, l - 1.0))?;
    let centers: Vec<Point2> = unit_frame.centers.iter().map(|&p| (p + Point2::new(1.0, 1.0)) * s).collect();
    let config = Configuration::new(s, centers, Container::unit_square())?;

    let failure = |movable, detail: String| Error::AssemblyFailure { n, layout: layout.to_string(), movable, detail };
    let audit = overlap_audit(&config, opts.tol.tangency_rel);
    if !audit.is_clean() {
        return Err(failure(
            Vec::new(),
            format!(
                "pieces collide: {} overlapping pair(s), {} wall crossing(s), max penetration {:.3e}",
                audit.violations.len(),
                audit.wall_violations.len(),
                audit.max_penetration
            ),
        ));
    }
    let report = verify_stable(&config, &opts.tol)?;
    if report.movable_count > 0 {
        return Err(failure(report.movable_discs(), "unresolved escape cones".into()));
    }

    let count = config.len();
    let metrics = AssemblyMetrics {
        n: count,
        r: s,
        n_times_r: count as f64 * s,
        bridge_n: n,
        epsilon_used: eps,
        scale: s,
        layout,
        side_length: l,
        near_offset: side.near,
        far_offset: side.far,
    };
    Ok((Piece { config, roles }, metrics))
}

pub fn assemble_square(n: usize, layout: Layout) -> Result<(Configuration, AssemblyMetrics)> {
    let (piece, metrics) = assemble_square_piece(n, layout, &SquareOptions::default())?;
    Ok((piece.config, metrics))
}
