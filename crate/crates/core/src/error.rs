use thiserror::Error;

/// Errors raised by the geometric operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polygon is self-intersecting near edge {0}")]
    SelfIntersecting(usize),
    #[error("polygon has (near) zero area")]
    DegenerateArea,
    #[error("polygon has fewer than three distinct vertices")]
    TooFewVertices,
    #[error("invalid cigar parameter eta = {0}")]
    InvalidEta(f64),
    #[error("curve is empty")]
    EmptyCurve,
    #[error("segment is not contained in the polygon")]
    SegmentNotInPolygon,
    #[error("point lies outside the polygon")]
    PointOutside,
    #[error("chord lies on the polygon boundary")]
    ChordOnBoundary,
    #[error("chord leaves the polygon")]
    ChordExitsPolygon,
    #[error("chord touches the boundary at an interior point")]
    ChordTouchesBoundaryInternally,
    #[error("chord endpoint is not on the boundary")]
    ChordEndpointNotOnBoundary,
    #[error("iteration limit {0} exceeded")]
    IterationLimitExceeded(usize),
    #[error("polygon is not convex")]
    NotConvex,
    #[error("polygon has an interior angle below the slab threshold")]
    AngleTooSharp,
    #[error("input fails the semiconvexity precondition")]
    NotSemiconvexInput,
    #[error("John curve construction failed at step {step}: {reason}")]
    ConstructionFailed { step: u8, reason: String },
    #[error("curve leaves the polygon at parameter {0}")]
    CurveExitsPolygon(f64),
    #[error("ball covers the whole domain")]
    BallCoversDomain,
    #[error("regions are not adjacent")]
    NotAdjacent,
    #[error("shared boundary is too short ({0})")]
    SharedTooShort(f64),
    #[error("domain has {0} holes, more than the allowed maximum")]
    TooManyHoles(usize),
    #[error("could not place a slit for hole {0}")]
    SlitPlacementFailed(usize),
    #[error("boundary frame construction failed: {0}")]
    FrameConstructionFailed(String),
    #[error("unknown fixture kind {0:?}")]
    UnknownKind(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
