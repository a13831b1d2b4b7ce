use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A denominator Pochhammer factor vanishes before the series terminates.
    #[error("denominator parameter {parameter} makes term {index} singular before the series terminates")]
    DenominatorPole { parameter: String, index: u64 },

    #[error("series does not terminate: no numerator parameter is a nonpositive integer")]
    NotTerminating,

    #[error("x = {x} lies outside the support {support}")]
    OutOfSupport { x: i64, support: String },

    #[error("degree {n} exceeds the maximum degree {max} of this family")]
    DegreeOutOfRange { n: u32, max: u32 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("truncated lattice sum reached the cap of {cap} points before the tail bound met the tolerance")]
    TruncationCapExceeded { cap: u64 },

    #[error("degenerate parameters: {0} vanishes")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
