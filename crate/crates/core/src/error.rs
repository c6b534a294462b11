use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not hermitian: max |H - H*| = {defect:e} exceeds {allowed:e}")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("eigen/singular value iteration did not converge (ill-conditioned input)")]
    NoConvergence,

    #[error("matrix is not positive semidefinite: lambda_min = {margin:e}")]
    NotPsd { margin: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tuple is not a member of D({d},{g}): margin {margin:e}")]
    NotMember { d: usize, g: usize, margin: f64 },

    #[error("tuple is maximal; no nontrivial dilation exists")]
    AlreadyMaximal,

    #[error("no finite-dimensional maximal dilation exists for d = {d} >= 2")]
    NoFiniteMaximalDilation { d: usize },

    #[error("isometry blocks are not normalized: ||sum V*V - I||_F = {defect:e}")]
    NotNormalized { defect: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("point {0:?} lies outside the shadow of the body")]
    OutsideShadow(Vec<f64>),

    #[error("direction does not support the body at the point (gap {gap:e})")]
    NotSupporting { gap: f64 },

    #[error("point is not on the boundary of the body (containment margin {margin:e})")]
    NotOnBoundary { margin: f64 },

    #[error("point is not an extreme point of the body")]
    NotExtreme,

    #[error("paraboloid hypothesis failed: {0}")]
    Hypothesis(HypothesisFailure),

    #[error("no refutation witness found in the sweep t = 2^-k, k = 1..{0}")]
    NoWitnessFound(usize),
}

/// Which hypothesis of the paraboloid construction was violated.
#[derive(Debug, Clone, PartialEq)]
pub enum HypothesisFailure {
    /// The last coordinate matrix is not positive semidefinite after recoordinatizing.
    NotSupported { lambda_min: f64 },
    /// The last coordinate matrix vanishes: the body is flat.
    Degenerate,
    /// The last coordinate matrix is positive definite: the point is not attained.
    Definite { lambda_min: f64 },
    /// Some coordinate has a nonzero block on the kernel of the last one.
    ZeroBlock { coordinate: usize, defect: f64 },
}

impl std::fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HypothesisFailure::NotSupported { lambda_min } => write!(
                f,
                "last coordinate is not PSD in standard position (lambda_min = {lambda_min:e})"
            ),
            HypothesisFailure::Degenerate => write!(f, "last coordinate is zero"),
            HypothesisFailure::Definite { lambda_min } => write!(
                f,
                "last coordinate is definite (lambda_min = {lambda_min:e}); point not attained"
            ),
            HypothesisFailure::ZeroBlock { coordinate, defect } => write!(
                f,
                "coordinate {coordinate} has a nonzero kernel block ({defect:e}); point not exposed by this hyperplane"
            ),
        }
    }
}
