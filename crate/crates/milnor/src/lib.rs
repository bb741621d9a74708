//! Classification of left-invariant pseudo-Riemannian metrics on Lie groups.
//!
//! The crate reduces an inner product of signature (p,q) on a Lie algebra to
//! a canonical representative under the isometry-up-to-scaling action, extracts
//! the associated pseudo-orthonormal frame with its one-parameter bracket
//! table, and computes all curvature quantities of the corresponding
//! left-invariant metric (connection, curvature tensor, sectional/Ricci/scalar
//! curvature, Einstein and algebraic Ricci soliton checks).
//!
//! Two families are wired end to end: the solvable algebra of real hyperbolic
//! space (any signature with p,q >= 1) and the 3-dimensional Heisenberg
//! algebra (Lorentzian signature (2,1)). The curvature engine itself accepts
//! arbitrary Lie algebras given by structure constants.

pub mod curvature;
pub mod forms;
pub mod frames;
pub mod lie;
pub mod reduce;
pub mod report;
pub mod selftest;

pub use curvature::{classify_curvature, realize_curvature, CurvatureOptions, CurvatureReport};
pub use forms::{MetricTensor, SignatureMatrix};
pub use frames::{milnor_frame_h3, milnor_frame_rhn, rahmani_form, verify_frame, MilnorFrame};
pub use lie::LieAlgebra;
pub use reduce::{o11_normalize, reduce_metric, O11Normalization, ReductionResult};

/// Default tolerance for residual tests (membership, degeneracy, relations).
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("degenerate metric: eigenvalue {0:e} within tolerance of zero")]
    DegenerateMetric(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("cannot normalize the zero pair (0,0)")]
    ZeroPair,
    #[error("unsupported signature ({0},{1})")]
    UnsupportedSignature(usize, usize),
    #[error("no representative set wired for this algebra")]
    UnsupportedAlgebra,
    #[error("degenerate tangent plane")]
    DegeneratePlane,
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
