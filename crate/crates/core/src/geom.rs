//! Planar primitives shared by the construction, verifier and chain code.
//!
//! Everything here is pure. Branch selection for intersections is left to
//! callers, which pick the point they need by a coordinate predicate.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector at `angle` radians from the positive x-axis.
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2 { x: c, y: s }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn dist_sq(self, o: Point2) -> f64 {
        (self - o).norm_sq()
    }

    /// Angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x).rem_euclid(std::f64::consts::TAU)
    }

    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2 { x: self.x / n, y: self.y / n }
    }

    pub fn rotated(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2 { x: c * self.x - s * self.y, y: s * self.x + c * self.y }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2 { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2 { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2 { x: self.x * k, y: self.y * k }
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2 { x: -self.x, y: -self.y }
    }
}

/// Numerical tolerance profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance on center distances when deciding tangency.
    pub tangency_rel: f64,
    /// Absolute tolerance for root finding.
    pub solver_abs: f64,
    /// Angular slack (radians) for the jamming gap test.
    pub angle_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tangency_rel: 1e-9, solver_abs: 1e-12, angle_slack: 1e-9 }
    }
}

impl Tolerances {
    /// Default profile with a different tangency tolerance.
    pub fn with_tangency(tangency_rel: f64) -> Result<Self> {
        let t = Tolerances { tangency_rel, ..Tolerances::default() };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.tangency_rel, self.solver_abs, self.angle_slack]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !all_positive {
            return Err(Error::param("tolerances", "all tolerances must be finite and strictly positive"));
        }
        if self.tangency_rel <= self.solver_abs {
            return Err(Error::param("tangency_rel", "must exceed solver_abs"));
        }
        Ok(())
    }
}

/// Intersection points of two circles.
///
/// Returns two points (lower x first, ties broken by lower y) when the circles
/// cross, one point at tangency and none otherwise. Tangency is decided with
/// `solver_abs` on the center distance.
pub fn circle_circle_intersections(
    c1: Point2,
    r1: f64,
    c2: Point2,
    r2: f64,
    solver_abs: f64,
) -> Result<Vec<Point2>> {
    if !(c1.is_finite() && c2.is_finite() && r1.is_finite() && r2.is_finite()) {
        return Err(Error::Degenerate("non-finite circle".into()));
    }
    if r1 <= 0.0 || r2 <= 0.0 {
        return Err(Error::Degenerate("circle radius must be positive".into()));
    }
    let delta = c2 - c1;
    let d = delta.norm();
    if d == 0.0 {
        return Err(Error::Degenerate("coincident circle centers".into()));
    }
    let outer = r1 + r2;
    let inner = (r1 - r2).abs();
    if d > outer + solver_abs || d < inner - solver_abs {
        return Ok(Vec::new());
    }
    let u = delta * (1.0 / d);
    if (d - outer).abs() <= solver_abs {
        return Ok(vec![c1 + u * r1]);
    }
    if (d - inner).abs() <= solver_abs {
        let dir = if r1 >= r2 { u } else { -u };
        return Ok(vec![c1 + dir * r1]);
    }
    // Distance from c1 to the radical line along u.
    let along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - along * along).max(0.0).sqrt();
    let foot = c1 + u * along;
    let perp = Point2::new(-u.y, u.x);
    let mut pts = vec![foot + perp * h, foot - perp * h];
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    Ok(pts)
}

/// Smallest `x' > x_start` whose curve point lies at distance `chord` from
/// the curve point at `x_start`.
///
/// The curve must be continuous and non-increasing to the right of
/// `x_start`; then the distance grows monotonically with `x` and the root is
/// bracketed by `[x_start, x_start + chord]`. Plain bisection, run to
/// floating-point convergence.
pub fn chord_step<F: Fn(f64) -> f64>(curve: F, x_start: f64, chord: f64) -> Result<f64> {
    if !(chord > 0.0 && chord.is_finite()) {
        return Err(Error::param("chord", "must be positive and finite"));
    }
    if !x_start.is_finite() {
        return Err(Error::param("x_start", "must be finite"));
    }
    let y_start = curve(x_start);
    let residual = |x: f64| (x - x_start).hypot(curve(x) - y_start) - chord;
    let mut lo = x_start;
    let mut hi = x_start + chord;
    if !(residual(lo) < 0.0 && residual(hi) >= 0.0) {
        return Err(Error::InadmissibleCurve(format!("chord of length {chord} not bracketed from x = {x_start}")));
    }
    Ok(bisect(&residual, &mut lo, &mut hi))
}

/// Bisection on an increasing residual with `f(lo) < 0 <= f(hi)`, run until
/// the bracket cannot shrink further. Returns the endpoint with the smaller
/// absolute residual.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: &F, lo: &mut f64, hi: &mut f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (*lo + *hi);
        if mid <= *lo || mid >= *hi {
            break;
        }
        if f(mid) < 0.0 {
            *lo = mid;
        } else {
            *hi = mid;
        }
    }
    if f(*lo).abs() <= f(*hi).abs() {
        *lo
    } else {
        *hi
    }
}

pub fn reflect_across_vertical(p: Point2, x0: f64) -> Point2 {
    Point2 { x: 2.0 * x0 - p.x, y: p.y }
}

pub fn reflect_across_horizontal(p: Point2, y0: f64) -> Point2 {
    Point2 { x: p.x, y: 2.0 * y0 - p.y }
}

/// Rotate about the origin by `rotation` radians, then translate.
pub fn apply_rigid(p: Point2, rotation: f64, translation: Point2) -> Point2 {
    p.rotated(rotation) + translation
}

#[cfg(test)]
mod tests {
    use super::*;

    const ABS: f64 = 1e-12;

    fn close(a: Point2, b: Point2) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn equal_circles_cross_symmetrically() {
        let pts = circle_circle_intersections(Point2::ORIGIN, 2.0, Point2::new(2.0, 0.0), 2.0, ABS).unwrap();
        assert_eq!(pts.len(), 2);
        let s3 = 3f64.sqrt();
        assert!(close(pts[0], Point2::new(1.0, -s3)));
        assert!(close(pts[1], Point2::new(1.0, s3)));
    }

    #[test]
    fn disjoint_and_tangent_circles() {
        let none = circle_circle_intersections(Point2::ORIGIN, 1.0, Point2::new(4.0, 0.0), 1.0, ABS).unwrap();
        assert!(none.is_empty());
        let one = circle_circle_intersections(Point2::ORIGIN, 2.0, Point2::new(4.0, 0.0), 2.0, ABS).unwrap();
        assert_eq!(one, vec![Point2::new(2.0, 0.0)]);
    }

    #[test]
    fn nested_circles_do_not_meet() {
        let pts = circle_circle_intersections(Point2::ORIGIN, 5.0, Point2::new(1.0, 0.0), 1.0, ABS).unwrap();
        assert!(pts.is_empty());
        let inner = circle_circle_intersections(Point2::ORIGIN, 3.0, Point2::new(1.0, 0.0), 2.0, ABS).unwrap();
        assert_eq!(inner.len(), 1);
        assert!(close(inner[0], Point2::new(3.0, 0.0)));
    }

    #[test]
    fn coincident_centers_rejected() {
        let err = circle_circle_intersections(Point2::ORIGIN, 1.0, Point2::ORIGIN, 2.0, ABS);
        assert!(matches!(err, Err(Error::Degenerate(_))));
    }

    #[test]
    fn chord_step_on_flat_curve() {
        assert_eq!(chord_step(|_| 0.0, 0.0, 2.0).unwrap(), 2.0);
        assert!((chord_step(|_| 0.0, 3.5, 1.0).unwrap() - 4.5).abs() < 1e-15);
    }

    #[test]
    fn chord_step_rejects_undefined_curve() {
        let err = chord_step(|x| if x > 0.5 { f64::NAN } else { 0.0 }, 0.0, 1.0);
        assert!(matches!(err, Err(Error::InadmissibleCurve(_))));
    }

    #[test]
    fn chord_step_hits_requested_distance() {
        let curve = |x: f64| 1.0 + (-x).exp();
        let x = chord_step(curve, 0.3, 1.7).unwrap();
        let d = Point2::new(0.3, curve(0.3)).dist(Point2::new(x, curve(x)));
        assert!((d - 1.7).abs() < ABS);
    }

    #[test]
    fn reflections_and_rotation() {
        assert_eq!(reflect_across_vertical(Point2::new(1.0, 2.0), 3.0), Point2::new(5.0, 2.0));
        assert_eq!(reflect_across_horizontal(Point2::new(1.0, 2.0), 0.0), Point2::new(1.0, -2.0));
        let q = apply_rigid(Point2::new(1.0, 0.0), std::f64::consts::FRAC_PI_2, Point2::ORIGIN);
        assert!(close(q, Point2::new(0.0, 1.0)));
    }

    #[test]
    fn tolerance_profile_validation() {
        assert!(Tolerances::default().validate().is_ok());
        assert!(Tolerances::with_tangency(1e-13).is_err());
        assert!(Tolerances::with_tangency(-1.0).is_err());
    }
}
