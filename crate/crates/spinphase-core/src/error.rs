//! Error types shared across the crate.
//!
//! Errors split into two families, which front ends map to distinct exit
//! codes: input/contract violations (`InvalidInput`, `DimensionMismatch`),
//! and computational failures (everything else: lost gauge tracking, a
//! degenerate reduced spectrum, an eigensolver that refused to converge).

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation precondition was violated.
    InvalidInput(String),
    /// A vector or matrix had the wrong dimension for the operation.
    DimensionMismatch { expected: usize, got: usize },
    /// The Jacobi eigensolver did not converge within the sweep cap.
    /// Carries a rendering of the offending matrix.
    EigenNonConvergence { dim: usize, off_diagonal: f64, matrix: String },
    /// An internally computed quantity failed its own consistency gate
    /// (e.g. analytic eigenvector residual above tolerance).
    ResidualCheck { residual: f64, tolerance: f64 },
    /// `phase_align` saw an overlap magnitude at or below threshold:
    /// a level crossing, or a grid too coarse to track the gauge.
    GaugeTracking { overlap: f64, threshold: f64 },
    /// Two consecutive loop samples were (nearly) orthogonal.
    GridTooCoarse { segment: usize, overlap: f64 },
    /// Reduced density eigenvalues too close to 1/2: the eigenbasis of
    /// the mixed state is ill defined.
    DegenerateReducedSpectrum { gap: f64 },
    /// Reduced density eigenvalues drifted along the path, violating the
    /// constant-population assumption behind the mixed-state phase.
    AdiabaticityViolation { drift: f64 },
    /// Norm drift during time evolution exceeded the step-size budget.
    StepSize { drift: f64 },
    /// The evolution was not close enough to cyclic to extract a phase.
    NotAdiabatic { overlap: f64 },
}

impl Error {
    /// True for errors that indicate bad input rather than a failed
    /// computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::DimensionMismatch { .. }
        )
    }
}

impl core::error::Error for Error {}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::EigenNonConvergence { dim, off_diagonal, matrix } => write!(
                f,
                "eigensolver failed to converge on {dim}x{dim} matrix \
                 (off-diagonal norm {off_diagonal:.3e}): {matrix}"
            ),
            Error::ResidualCheck { residual, tolerance } => write!(
                f,
                "internal consistency: eigenvector residual {residual:.3e} \
                 exceeds {tolerance:.3e}"
            ),
            Error::GaugeTracking { overlap, threshold } => write!(
                f,
                "gauge tracking lost: |overlap| {overlap:.3e} <= threshold \
                 {threshold:.3e} (level crossing or too-coarse grid)"
            ),
            Error::GridTooCoarse { segment, overlap } => write!(
                f,
                "loop grid too coarse: |overlap| {overlap:.3e} at segment {segment}"
            ),
            Error::DegenerateReducedSpectrum { gap } => write!(
                f,
                "reduced spectrum near-degenerate: |p - (1-p)| = {gap:.3e}"
            ),
            Error::AdiabaticityViolation { drift } => write!(
                f,
                "reduced eigenvalues drifted by {drift:.3e} along the path"
            ),
            Error::StepSize { drift } => {
                write!(f, "norm drift {drift:.3e} exceeds step-size budget")
            }
            Error::NotAdiabatic { overlap } => write!(
                f,
                "evolution not cyclic enough: |<psi(0)|psi(T)>| = {overlap:.6}"
            ),
        }
    }
}
