use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter set violates one of the admissibility constraints.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index j = {j} out of range 0..={ell}")]
    IndexOutOfRange { j: usize, ell: usize },

    #[error("operator is not in the class of degree-bounded operators (deg A_j <= j)")]
    NotInClassD,

    #[error("expected a second-order operator, got order {0}")]
    NotSecondOrder(usize),

    #[error("singular matrix: {0}")]
    Singular(String),

    /// An internal consistency assertion of the polynomial construction failed.
    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
