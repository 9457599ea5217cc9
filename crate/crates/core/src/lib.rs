pub mod catalog;
pub mod corona;
pub mod geometry;
pub mod io;
pub mod limit;
pub mod scalar;
pub mod tiling;
pub mod vector;

pub use geometry::{convex_hull, orientation, positive_overlap, segments_touch, Hull, Location, Polygon, Segment};
pub use scalar::{QuarticScalar, Rational};
pub use vector::Vec2;
