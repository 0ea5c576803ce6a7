use thiserror::Error;

/// Errors produced by instance handling and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("vertex identifier {0:?} is reserved")]
    ReservedIdentifier(String),
    #[error("duplicate vertex identifier {0:?}")]
    DuplicateVertex(String),
    #[error("unknown endpoint identifier {0:?}")]
    UnknownEndpoint(String),
    #[error("self-loop on {0:?}")]
    SelfLoop(String),
    #[error("edge ({u:?}, {v:?}) has invalid weight {weight}")]
    InvalidWeight { u: String, v: String, weight: f64 },
    #[error("instance infeasible")]
    InfeasibleInstance,
    #[error("power assignment is not defined on exactly the instance vertex set")]
    MismatchedVertices,
    #[error("negative power {power} on vertex {vertex:?}")]
    NegativePower { vertex: String, power: f64 },
    #[error("direct source-sink edge: no vertex cut exists")]
    DirectSourceSink,
    #[error("cut is not a separator")]
    NotASeparator,
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("discretization needs {needed} copies, exceeding the cap of {cap}")]
    CopyCapExceeded { needed: u128, cap: u64 },
    #[error("weights are not uniform: found {0} and {1}")]
    NonUniformWeights(f64, f64),
    #[error("fractional weight detected: {0}")]
    FractionalWeight(f64),
    #[error("non-positive cost {cost} on vertex {vertex:?}")]
    NonPositiveCost { vertex: String, cost: f64 },
    #[error("missing cost for vertex {0:?}")]
    MissingCost(String),
    #[error("missing power domain for vertex {0:?}")]
    MissingDomain(String),
    #[error("empty power domain for vertex {0:?}")]
    EmptyDomain(String),
    #[error("domain value {value} for vertex {vertex:?} is invalid")]
    InvalidDomainValue { vertex: String, value: f64 },
    #[error("instance has {n} vertices, over the oracle cap of {cap}")]
    OracleOverCap { n: usize, cap: usize },
    #[error("enumeration budget exceeded: {vectors} power vectors over limit {limit}")]
    EnumerationBudget { vectors: u128, limit: u64 },
    #[error("disk {index} has non-positive radius {radius}")]
    InvalidRadius { index: usize, radius: f64 },
    #[error("disk {index} center ({x}, {y}) lies outside the rectangle")]
    DiskOutsideRectangle { index: usize, x: f64, y: f64 },
    #[error("invalid rectangle: x0 < x1 and y0 < y1 required")]
    InvalidRectangle,
    #[error("{expected} shrink values expected, got {got}")]
    ShrinkLengthMismatch { expected: usize, got: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
