use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("argument outside the domain of {function}: {detail}")]
    OutOfDomain {
        function: &'static str,
        detail: String,
    },
    #[error("face {index} has zero length")]
    DegenerateFace { index: usize },
    #[error("point ({x}, {y}) is not strictly inside the polygon")]
    PointNotInterior { x: f64, y: f64 },
    #[error("the boundary part F is empty")]
    EmptyFreeBoundary,
    #[error("Steklov problem needs a non-empty Steklov boundary part")]
    NoSteklovBoundary,
    #[error("no sign change found while bracketing zero m={index} of order l={order}")]
    BracketFailure { order: u32, index: u32 },
    #[error("requested {count} eigenpairs but the problem has dimension {dimension}")]
    CountExceedsDimension { count: usize, dimension: usize },
    #[error("triangle {index} is degenerate or negatively oriented")]
    DegenerateTriangle { index: usize },
    #[error("factorization failed: matrix is not positive definite (pivot {pivot})")]
    FactorizationFailure { pivot: usize },
    #[error("eigensolver did not converge (worst relative residual {residual:e})")]
    NonConvergence { residual: f64 },
    #[error("eigenfunction is not normalized (L2 norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("identity is only defined on polygons with straight faces")]
    CurvedBoundary,
    #[error("spectrum has {len} entries, at least {min} required")]
    SpectrumTooShort { len: usize, min: usize },
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("spectra do not match: {0}")]
    MismatchedSpectra(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BracketFailure { .. }
                | Error::FactorizationFailure { .. }
                | Error::NonConvergence { .. }
                | Error::FitFailed(_)
        )
    }
}
