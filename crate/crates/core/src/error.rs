use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("deformation parameter q must be nonzero")]
    ZeroDeformation,

    #[error("elements carry different deformation parameters ({left} vs {right})")]
    DeformationMismatch { left: String, right: String },

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid weight spec: {0}")]
    WeightSpec(String),

    #[error("weight index {index} is beyond the {len} stored table entries")]
    WeightOutOfRange { index: usize, len: usize },

    #[error("weight w_{index} = {value} is not a strictly positive real")]
    NonPositiveWeight { index: usize, value: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operators were built from different weights ({left} vs {right})")]
    WeightsMismatch { left: String, right: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable short identifier used in structured CLI and FFI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDeformation => "zero_deformation",
            Error::DeformationMismatch { .. } => "deformation_mismatch",
            Error::BackendMismatch(_) => "backend_mismatch",
            Error::Syntax { .. } => "syntax",
            Error::WeightSpec(_) => "weight_spec",
            Error::WeightOutOfRange { .. } => "weight_out_of_range",
            Error::NonPositiveWeight { .. } => "positivity_violation",
            Error::Domain(_) => "domain",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::WeightsMismatch { .. } => "weights_mismatch",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
