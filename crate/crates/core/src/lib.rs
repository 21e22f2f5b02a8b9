//! Lune-based β-skeletons of planar point sets.
//!
//! For β > 2 the skeleton is a subgraph of the Delaunay triangulation. The
//! [`skeleton::batched`] algorithm splits the Delaunay edges into groups,
//! builds a trapezoidal map over the boundary curves of each group's lunes,
//! locates every input point in it and walks the dual graph to find the
//! lunes that contain a point. Brute-force and Delaunay-filter algorithms
//! serve as oracles.

pub mod delaunay;
pub mod error;
pub mod geometry;
pub mod pointgen;
pub mod regions;
pub mod skeleton;
pub mod subdivision;

pub use error::{Error, Result};
pub use geometry::{Coord, Point, PointSet};
pub use regions::{Beta, Closure, Region, Variant};
pub use skeleton::{AlgoConfig, SkeletonGraph};
