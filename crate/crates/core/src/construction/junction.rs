use super::{Piece, Role};
use crate::config::{Configuration, Container};
use crate::geom::Point2;

/// Slot numbers of the junction discs, in output order.
pub const CORNER: u8 = 0;
pub const UP: u8 = 1;
pub const RIGHT: u8 = 2;
/// Fan disc `(2 + √3, 1)` leaning on the right arm.
pub const FAN_RIGHT: u8 = 3;
/// Fan disc `(1, 2 + √3)` leaning on the upper arm.
pub const FAN_UP: u8 = 4;
/// Diagonal disc `(1 + √3, 1 + √3)`.
pub const DIAGONAL: u8 = 5;

pub(crate) fn junction_centers() -> [Point2; 6] {
    let s3 = 3f64.sqrt();
    [
        Point2::new(0.0, 0.0),
        Point2::new(0.0, 2.0),
        Point2::new(2.0, 0.0),
        Point2::new(2.0 + s3, 1.0),
        Point2::new(1.0, 2.0 + s3),
        Point2::new(1.0 + s3, 1.0 + s3),
    ]
}

/// Pairs of junction slots that touch.
pub const TANGENT_PAIRS: [(u8, u8); 6] =
    [(CORNER, RIGHT), (CORNER, UP), (RIGHT, FAN_RIGHT), (UP, FAN_UP), (FAN_RIGHT, DIAGONAL), (FAN_UP, DIAGONAL)];

/// The six-disc corner piece with walls `x = −1` and `y = −1`.
pub fn junction_piece() -> Piece {
    let container = Container { x_min: Some(-1.0), y_min: Some(-1.0), ..Container::PLANE };
    let config = Configuration { radius: 1.0, centers: junction_centers().to_vec(), container };
    let roles = (0..6).map(|slot| Role::Junction { corner: 0, slot }).collect();
    Piece { config, roles }
}
