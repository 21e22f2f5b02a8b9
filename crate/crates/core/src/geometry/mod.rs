//! Exact scalars, points and the sign predicates built on them.

mod coord;
mod point;
mod predicates;

pub use coord::Coord;
pub(crate) use coord::parse_rational;
pub use point::{Circle, Point, PointSet};
pub use predicates::{
    in_circle, in_circle_exact, orient2d, orient2d_exact, side_of_circle, side_of_circle_exact,
};
pub(crate) use predicates::in_circle_raw;
