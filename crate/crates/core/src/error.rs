use thiserror::Error;

/// Unified error type for the library.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector must lie in the tangent block m (indices 1..={dim_m}); component {index} is nonzero")]
    NotInTangentBlock { dim_m: usize, index: usize },

    #[error("direction must have unit norm: |v| = {norm}")]
    NonUnit { norm: f64 },

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("exact normalization impossible: squared norm {norm_sq} is not the square of a rational")]
    IrrationalNorm { norm_sq: String },

    #[error("unknown builtin space `{0}` (available: sp2_su2, su2_biinv)")]
    UnknownSpace(String),

    #[error("algebra spec error at {location}: {message}")]
    SpecParse { location: String, message: String },

    #[error("coefficient {value} at bracket [{i},{j}] -> {k} is not recognizable as a small radical")]
    Reconstruction { i: usize, j: usize, k: usize, value: f64 },

    #[error("space is not supported by this operation: {0}")]
    UnsupportedSpace(String),

    #[error("series truncation bound {bound:.3e} exceeds tolerance {tol:.3e} at t = {t}; raise the series order")]
    Truncation { t: f64, bound: f64, tol: f64 },

    #[error("series order {have} is insufficient; the requested coefficient needs order >= {needed}")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("order must satisfy {0}")]
    BadOrder(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GeomError>;
