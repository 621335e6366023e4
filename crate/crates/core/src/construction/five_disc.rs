use crate::config::{Configuration, Container};
use crate::geom::Point2;

/// Radius at which four corner discs and one central disc all touch:
/// `√2·(1/2 − r) = 2r`.
pub fn five_disc_radius() -> f64 {
    (2f64.sqrt() - 1.0) / 2.0
}

/// Five equal discs in the unit square: one per corner and one in the middle.
pub fn five_disc_config() -> Configuration {
    let r = five_disc_radius();
    let centers = vec![
        Point2::new(0.5, 0.5),
        Point2::new(r, r),
        Point2::new(1.0 - r, r),
        Point2::new(r, 1.0 - r),
        Point2::new(1.0 - r, 1.0 - r),
    ];
    Configuration { radius: r, centers, container: Container::unit_square() }
}
