use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid tolerances: {0}")]
    Tolerance(String),

    #[error("basis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error(
        "pseudoinverse failed the Penrose equations: residuals {residuals:?} exceed {bound:e}"
    )]
    Penrose { residuals: [f64; 4], bound: f64 },

    #[error("matrix is zero, no positive singular value exists")]
    ZeroMatrix,

    #[error("operator is not nonexpansive: norm {norm} > 1 + {tol:e}")]
    NotNonexpansive { norm: f64, tol: f64 },

    #[error("point lies outside the relation domain (distance {distance:e})")]
    OutsideDomain { distance: f64 },

    #[error("closed-range constant undefined for R = Id")]
    UndefinedAlpha,

    #[error("no finite order: {0}")]
    NoFiniteOrder(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
