use thiserror::Error;

/// Errors raised by the library. Messages are stable; the CLI maps them to exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("identically zero")]
    ZeroPolynomial,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("csd requires d+1 classes")]
    ClassCount,
    #[error("insufficient coordinate range")]
    CoordinateRange,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a simplicial complex")]
    NotClosed,
    #[error("collapse step {step} invalid: {reason}")]
    Collapse { step: usize, reason: String },
    #[error("flip breaks centeredness")]
    FlipBreaksCenteredness,
    #[error("degenerate endpoint")]
    DegenerateEndpoint,
    #[error("degenerate homotopy")]
    DegenerateHomotopy,
    #[error("affine span deficient")]
    AffineSpanDeficient,
    #[error("deficient transform")]
    DeficientTransform,
    #[error("configuration is not centered")]
    NotCentered,
    #[error("too many vectors for circuit enumeration ({0} > {max})", max = crate::gale::MAX_CIRCUIT_VECTORS)]
    TooManyVectors(usize),
    #[error("degenerate sum: {0}")]
    DegenerateSum(String),
    #[error("no totally mixed facets possible at this dimension")]
    DimensionMismatch,
    #[error("point cap exceeded ({0} > {1})")]
    CapExceeded(usize, usize),
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("fans not in relative general position")]
    FansNotGeneric,
    #[error("rank deficiency: {0}")]
    RankDeficient(String),
    #[error("index set not a face")]
    NotAFace,
    #[error("round trip failed: {0}")]
    RoundTrip(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
