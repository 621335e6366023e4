//! Builders for every configuration in the crate: bridges, the corner
//! junction, the assembled square, the five-disc square and the 3.12.12
//! tiling.

pub mod bridge;
pub mod curve;
pub mod five_disc;
pub mod junction;
pub mod square;
pub mod tiling;

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};

pub use bridge::{
    build_half_chain, build_wall_bridge, complete_symmetric_bridge, symmetric_bridge_piece, tune_epsilon,
    wall_bridge_piece, BridgeChain, Termination, TerminationReason, DEFAULT_EPS_HI,
};
pub use curve::{BaseCurve, CurveFamily, DEFAULT_LAMBDA};
pub use five_disc::{five_disc_config, five_disc_radius};
pub use junction::junction_piece;
pub use square::{assemble_square, assemble_square_piece, AssemblyMetrics, Layout, SquareOptions};
pub use tiling::{tiling_3_12_12, tiling_density_limit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Row {
    A,
    B,
    C,
}

/// Where a bridge disc came from. `index` is 1-based; `lower` marks the mirror
/// image below the axis and `far` the image across the closing line `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BridgeSlot {
    pub side: u8,
    pub row: Row,
    pub index: usize,
    pub lower: bool,
    pub far: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Bridge(BridgeSlot),
    Junction { corner: u8, slot: u8 },
}

/// A configuration with one role per disc.
#[derive(Debug, Clone)]
pub struct Piece {
    pub config: Configuration,
    pub roles: Vec<Role>,
}

/// Closed axis-aligned rectangle used for density estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn square(half: f64) -> Region {
        Region { x_min: -half, x_max: half, y_min: -half, y_max: half }
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }
}

/// Fraction of `region` covered by discs, counting a disc when its center
/// lies in the region.
pub fn density(config: &Configuration, region: &Region) -> Result<f64> {
    let area = region.area();
    if !(area.is_finite() && area > 0.0 && region.x_max > region.x_min) {
        return Err(Error::param("region", "must have positive finite area"));
    }
    let inside = config
        .centers
        .iter()
        .filter(|p| p.x >= region.x_min && p.x <= region.x_max && p.y >= region.y_min && p.y <= region.y_max)
        .count();
    Ok(inside as f64 * std::f64::consts::PI * config.radius * config.radius / area)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Container;
    use crate::geom::Point2;

    #[test]
    fn density_basics() {
        let one = Configuration::new(1.0, vec![Point2::ORIGIN], Container::PLANE).unwrap();
        let d = density(&one, &Region::square(1.0)).unwrap();
        assert!((d - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let empty = Configuration::new(1.0, vec![], Container::PLANE).unwrap();
        assert_eq!(density(&empty, &Region::square(1.0)).unwrap(), 0.0);
        assert!(density(&one, &Region::square(0.0)).is_err());
    }

    #[test]
    fn tiling_density_converges() {
        let cfg = tiling_3_12_12(40).unwrap();
        let d = density(&cfg, &Region::square(80.0)).unwrap();
        assert!((d - tiling_density_limit()).abs() < 0.005, "{d}");
    }
}
