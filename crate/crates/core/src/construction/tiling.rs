use crate::config::{Configuration, Container};
use crate::error::{Error, Result};
use crate::geom::Point2;

/// Edge length of the tiling, so that neighbouring unit discs touch.
pub const EDGE: f64 = 2.0;

/// Packing fraction of unit discs on the vertices of the 3.12.12 tiling.
pub fn tiling_density_limit() -> f64 {
    (7.0 * 3f64.sqrt() - 12.0) * std::f64::consts::PI
}

/// Unit discs on the vertices of the truncated hexagonal tiling (edge 2)
/// whose centers fall in the window `[−w·EDGE, w·EDGE]²`. The tiling is placed
/// with a vertex at the origin, so the window is centered on a disc.
///
/// The dodecagon centers form a triangular lattice with spacing
/// `EDGE·(2 + √3)`. Each vertex belongs to exactly one of the small triangles,
/// which sit at the centroids of the lattice triangles, so walking the
/// triangles lists every vertex once.
pub fn tiling_3_12_12(window_half_width: usize) -> Result<Configuration> {
    if window_half_width < 2 {
        return Err(Error::param("window", "half-width must be at least 2 edge lengths"));
    }
    let s3 = 3f64.sqrt();
    let half = window_half_width as f64 * EDGE;
    let spacing = EDGE * (2.0 + s3);
    let e1 = Point2::new(spacing, 0.0);
    let e2 = Point2::new(spacing / 2.0, spacing * s3 / 2.0);
    let circum = EDGE / s3;
    let up: Vec<Point2> = [30.0f64, 150.0, 270.0].iter().map(|d| Point2::from_angle(d.to_radians()) * circum).collect();
    let down: Vec<Point2> = up.iter().map(|&v| -v).collect();

    // Put the 30° vertex of the first triangle at the origin.
    let origin = -((e1 + e2) * (1.0 / 3.0) + up[0]);

    let rows = (half / (spacing * s3 / 2.0)).ceil() as i64 + 2;
    let cols = (half / spacing).ceil() as i64 + rows + 2;
    let mut centers = Vec::new();
    for j in -rows..=rows {
        for i in -cols..=cols {
            let base = origin + e1 * i as f64 + e2 * j as f64;
            for (centroid, verts) in [(base + (e1 + e2) * (1.0 / 3.0), &up), (base + (e1 + e2) * (2.0 / 3.0), &down)] {
                for &v in verts.iter() {
                    let p = centroid + v;
                    if p.x.abs() <= half && p.y.abs() <= half {
                        centers.push(p);
                    }
                }
            }
        }
    }
    centers.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
    Configuration::new(1.0, centers, Container::PLANE)
}
