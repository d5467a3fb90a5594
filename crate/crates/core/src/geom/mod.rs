//! Geometric kernel: points, robust predicates, validated polygons, containment,
//! extents, cigars and carrots.

pub mod cigar;
pub mod hull;
pub mod point;
pub mod polygon;
pub mod predicates;
pub mod tri;

pub use cigar::{
    carrot_membership, cigar_membership, closed_cigar_membership, visibility_witness, visible_region_membership,
};
pub use hull::{clip_halfplane, convex_hull, directional_extent, euclidean_diameter, min_max_extent, min_max_extent_pts, Extents};
pub use point::{point_segment_distance, segment_segment_distance, turn_angle, Point};
pub use polygon::{bbox, signed_area, validate_polygon, BoundaryPos, Containment, Polygon, Tolerance};
pub use predicates::{orient2d, orientation, segments_cross_properly, segments_intersect, Orientation};
pub use tri::{triangulate, AreaSampler};

/// Closed-segment containment in the closed polygon.
pub fn segment_in_polygon(p: &Polygon, a: Point, b: Point) -> bool {
    p.contains_segment(a, b)
}
