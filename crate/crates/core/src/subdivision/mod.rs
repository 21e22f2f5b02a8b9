//! Planar subdivision of one group's lune boundaries, point location in it,
//! and the dual-graph walk that marks occupied lunes.

mod arrangement;
mod traverse;
mod trapmap;

pub use arrangement::{Piece, Vertex};
pub use trapmap::{Adjacent, Located, TrapMap, Trapezoid, NONE};
pub use traverse::{dual_traverse_mark, face_memberships, locate_points, membership, FacePoints, LuneTable};
