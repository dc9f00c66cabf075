use std::fmt;

use thiserror::Error;

use crate::wedge::{ResonanceReport, StepRecord};

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported order {0}")]
    UnsupportedOrder(u32),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("iteration failed to converge: {0}")]
    IterationFailure(String),

    #[error("evaluation point t = {t} lies within {distance:e} of a branch point")]
    BranchPointProximity { t: f64, distance: f64 },

    #[error("rational approximation failed after {attempts} attempts: {defect}")]
    ApproximationFailure { attempts: usize, defect: FitDefect },

    #[error("coincident zeros in partial fraction expansion (separation {separation:e})")]
    DegeneratePartialFraction { separation: f64 },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("degenerate kernel: |lambda_0| = {0:e}")]
    DegenerateKernel(f64),

    #[error("resonant configuration: {0}")]
    Resonance(ResonanceReport),

    #[error("iterative scheme diverged at step {}", history.last().map(|h| h.iteration).unwrap_or(0))]
    Divergence { history: Vec<StepRecord> },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures (as opposed to bad input) map to a distinct exit status in the CLI.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::IterationFailure(_)
                | Error::ApproximationFailure { .. }
                | Error::DegeneratePartialFraction { .. }
                | Error::QuadratureFailure(_)
                | Error::DegenerateKernel(_)
                | Error::Divergence { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::UnsupportedOrder(_) => "unsupported_order",
            Error::Config(_) => "config",
            Error::Shape(_) => "shape",
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::IterationFailure(_) => "iteration_failure",
            Error::BranchPointProximity { .. } => "branch_point_proximity",
            Error::ApproximationFailure { .. } => "approximation_failure",
            Error::DegeneratePartialFraction { .. } => "degenerate_partial_fraction",
            Error::QuadratureFailure(_) => "quadrature_failure",
            Error::DegenerateKernel(_) => "degenerate_kernel",
            Error::Resonance(_) => "resonance",
            Error::Divergence { .. } => "divergence",
            Error::Io(_) => "io",
        }
    }
}

/// Quality metrics of a rejected rational fit.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct FitDefect {
    pub fit_error: f64,
    pub reciprocal_defect: f64,
    pub zeros_inside: usize,
    pub zeros_outside: usize,
    pub poles_inside: usize,
    pub poles_outside: usize,
    pub near_circle: usize,
}

impl fmt::Display for FitDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fit error {:e}, reciprocal defect {:e}, zeros in/out {}/{}, poles in/out {}/{}, {} near the circle",
            self.fit_error,
            self.reciprocal_defect,
            self.zeros_inside,
            self.zeros_outside,
            self.poles_inside,
            self.poles_outside,
            self.near_circle
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
