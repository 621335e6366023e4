//! Equal-radius disc configurations and their containers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point2;

/// Axis-aligned container given by up to four walls. A missing wall means the
/// container is unbounded on that side; no walls at all is the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Container {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
}

impl Container {
    pub const PLANE: Container = Container { x_min: None, x_max: None, y_min: None, y_max: None };

    pub fn rect(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Self {
        Container { x_min: Some(x_min), x_max: Some(x_max), y_min: Some(y_min), y_max: Some(y_max) }
    }

    pub fn unit_square() -> Self {
        Container::rect(0.0, 0.0, 1.0, 1.0)
    }

    pub fn is_plane(&self) -> bool {
        *self == Container::PLANE
    }

    /// Present walls in the fixed order left, right, bottom, top.
    pub fn walls(&self) -> impl Iterator<Item = Wall> + '_ {
        [
            self.x_min.map(|v| Wall { side: Side::Left, coord: v }),
            self.x_max.map(|v| Wall { side: Side::Right, coord: v }),
            self.y_min.map(|v| Wall { side: Side::Bottom, coord: v }),
            self.y_max.map(|v| Wall { side: Side::Top, coord: v }),
        ]
        .into_iter()
        .flatten()
    }

    pub fn scaled(&self, s: f64) -> Container {
        let m = |v: Option<f64>| v.map(|x| x * s);
        Container { x_min: m(self.x_min), x_max: m(self.x_max), y_min: m(self.y_min), y_max: m(self.y_max) }
    }

    pub fn width(&self) -> Option<f64> {
        Some(self.x_max? - self.x_min?)
    }

    pub fn height(&self) -> Option<f64> {
        Some(self.y_max? - self.y_min?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wall {
    pub side: Side,
    pub coord: f64,
}

impl Wall {
    /// Unit normal pointing from the wall into the container.
    pub fn inward_normal(&self) -> Point2 {
        match self.side {
            Side::Left => Point2::new(1.0, 0.0),
            Side::Right => Point2::new(-1.0, 0.0),
            Side::Bottom => Point2::new(0.0, 1.0),
            Side::Top => Point2::new(0.0, -1.0),
        }
    }

    /// Clearance between a disc of radius `r` at `p` and this wall; negative
    /// when the disc crosses it.
    pub fn gap(&self, p: Point2, r: f64) -> f64 {
        match self.side {
            Side::Left => p.x - r - self.coord,
            Side::Right => self.coord - p.x - r,
            Side::Bottom => p.y - r - self.coord,
            Side::Top => self.coord - p.y - r,
        }
    }
}

/// `n` equal discs of a common radius inside a container.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub radius: f64,
    pub centers: Vec<Point2>,
    pub container: Container,
}

impl Configuration {
    pub fn new(radius: f64, centers: Vec<Point2>, container: Container) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::param("radius", "must be positive and finite"));
        }
        if let Some(i) = centers.iter().position(|p| !p.is_finite()) {
            return Err(Error::param("centers", format!("center {i} is not finite")));
        }
        Ok(Configuration { radius, centers, container })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Uniform scaling about the origin (centers, radius and walls).
    pub fn scaled(&self, s: f64) -> Configuration {
        Configuration {
            radius: self.radius * s,
            centers: self.centers.iter().map(|&p| p * s).collect(),
            container: self.container.scaled(s),
        }
    }

    /// Rigid motion of a planar configuration. Walled containers are not
    /// rotated, so this is only meaningful for the plane.
    pub fn transformed(&self, rotation: f64, translation: Point2) -> Configuration {
        Configuration {
            radius: self.radius,
            centers: self.centers.iter().map(|&p| crate::geom::apply_rigid(p, rotation, translation)).collect(),
            container: self.container,
        }
    }

    /// Bounding box of all discs (including their radius).
    pub fn disc_bounds(&self) -> Option<(Point2, Point2)> {
        let r = self.radius;
        let mut it = self.centers.iter();
        let first = it.next()?;
        let (mut lo, mut hi) = (*first, *first);
        for p in it {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo - Point2::new(r, r), hi + Point2::new(r, r)))
    }
}
