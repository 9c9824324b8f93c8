//! Planar polygonal domains and the exact geometry on them.

mod domain;
mod hull;
mod io;
mod point;
mod polygon;
mod radial;
mod triangulate;

pub use domain::{EdgeFrame, EdgeSample, PolygonDomain, Side};
pub use hull::{convex_hull_of, ConvexPolygon};
pub use point::{
    orient, reflect, segment_distance, segment_segment_distance, segments_intersect, Direction,
    Point2,
};
pub use polygon::{SimplePolygon, Triangle};
pub use radial::radial_function;
pub(crate) use radial::exit_distance;
pub use triangulate::triangulate_polygon;
pub(crate) use polygon::crossing as crossing_number;
