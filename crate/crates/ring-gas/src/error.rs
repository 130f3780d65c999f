use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("state and field have different geometries")]
    GeometryMismatch,
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("density profile has length {got}, expected {expected}")]
    ProfileLength { expected: usize, got: usize },
    #[error("density value {0} outside [0, 1]")]
    InvalidDensity(f64),
    #[error("invalid scatterer pattern: {0}")]
    InvalidPattern(String),
    #[error("cannot step backward below time 0")]
    TimeUnderflow,
    #[error("states are not one forward step apart")]
    StatesNotAdjacent,
    #[error("link {0} touches the boundary; pass allow_boundary to inspect it")]
    BoundaryLink(i32),
    #[error("link index {0} out of range")]
    LinkOutOfRange(i32),
    #[error("invalid ensemble config: {0}")]
    InvalidConfig(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
