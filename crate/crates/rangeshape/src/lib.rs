//! Numerical ranges of complex matrices and the geometry built on top of them.
//!
//! The crate computes the numerical range `W(A) = { <Ax, x> : ||x|| = 1 }` of a
//! square complex matrix as a sampled support profile, the polar dual of that
//! convex set (both as a polygon dual and through its exact linear-matrix-
//! inequality description), the bivariate determinant polynomial
//! `p(xi, eta) = det(I - xi*H - eta*K)` attached to the hermitian parts of a
//! matrix, and real-rootedness / rigid-convexity certificates for such
//! polynomials.  On top of those pieces sits a decision procedure answering
//! whether a planar convex set is the numerical range of a `d x d` matrix, and
//! a search for a complex-symmetric matrix with a prescribed numerical range.
//!
//! Modules mirror that stack:
//!
//! * [`linalg`] - dense complex matrices, hermitian decomposition, a Jacobi
//!   eigensolver, determinants.
//! * [`numrange`] - support profiles, boundary polygons, centering, and
//!   detection of degenerate (segment) ranges.
//! * [`polar`] - polygon polars, spectrahedron membership, sampled polar
//!   boundaries, Hausdorff distance.
//! * [`rigidity`] - bivariate polynomials, determinant-polynomial
//!   interpolation, real-rootedness and rigid-convexity tests.
//! * [`decision`] - shape decisions, symmetric realizations, round-trip
//!   checks.
//! * [`cli`] - the `rangeshape` command-line front end.

pub mod cli;
pub mod decision;
pub mod linalg;
pub mod numrange;
pub mod polar;
pub mod rigidity;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix argument was structurally unusable (wrong shape, non-finite
    /// entries, inconsistent dimensions).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// An operation that requires a hermitian matrix received one whose
    /// deviation from its conjugate transpose exceeds the tolerance.
    #[error("matrix is not hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// The iterative eigensolver failed to reach its convergence threshold
    /// within the sweep budget.
    #[error("eigensolver failed to converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    /// A polygon argument violated the convex-polygon invariants.
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    /// A bivariate polynomial failed structural validation.
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    /// The determinant-polynomial fit left a residual above tolerance, so the
    /// recovered coefficients cannot be trusted.
    #[error("polynomial interpolation is ill-conditioned (relative residual {residual:.3e})")]
    IllConditionedFit { residual: f64 },

    /// The polar of the given polygon is unbounded because the origin is not
    /// in the polygon's interior.  The constraint half-planes `a*x + b*y <= 1`
    /// describing the polar are returned in lieu of a polygon.
    #[error("polar set is unbounded: origin is not interior ({} half-plane constraints)", constraints.len())]
    UnboundedPolar { constraints: Vec<polar::HalfPlane> },

    /// Real-zero testing is anchored at the origin and requires a polynomial
    /// that is strictly positive there.
    #[error("polynomial is not anchored: it must be strictly positive at the origin")]
    NotAnchored,

    /// Power sums overflowed while building the real-rootedness certificate;
    /// the caller should rescale the variable.
    #[error("coefficient scale overflowed the real-rootedness certificate; rescale the variable")]
    ScaleError,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
