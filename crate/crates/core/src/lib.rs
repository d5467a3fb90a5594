//! Decomposition of planar polygons and smooth domains into pieces that are
//! semiconvex, rotund and John, with certificates for each property and an
//! accounting of the boundary length added by the cuts.

pub mod error;
pub mod fixtures;
pub mod geodesic;
pub mod geom;
pub mod john;
pub mod partition;
pub mod pipeline;
pub mod rotund;
pub mod semiconvex;
pub mod smooth;

pub use error::{Error, Result};
pub use geom::{BoundaryPos, Point, Polygon, Tolerance};
