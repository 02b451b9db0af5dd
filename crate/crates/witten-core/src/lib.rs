//! Exponentially small eigenvalues of the Witten Laplacian on the circle.
//!
//! For a Morse trigonometric polynomial `f` with `n` minima, the operator
//! `P = -h^2 d^2/dq^2 + (f')^2 - h f''` with periodic boundary conditions has
//! `n` low-lying eigenvalues: the exact zero mode and `n - 1` tunneling modes
//! of the form `A h e^{-c/h}`. This crate computes the rates `c` and
//! prefactors `A` symbolically, by assembling the transfer-matrix quantization
//! condition over an algebra of exponential-polynomial symbols and solving it
//! with a Newton-polygon iteration, and cross-checks them against a
//! from-scratch dense eigensolver on a Fourier-collocation discretization.
//!
//! Pipeline: [`trigpoly`] (potential and its critical points) →
//! [`semiclassical`] (tunneling-cycle and turning-point data) → [`transfer`]
//! (quantization condition, low-lying asymptotics via [`polygon`]) →
//! [`numeric`] (collocation spectra, decay fits, comparison reports).

pub mod numeric;
pub mod polygon;
pub mod potentials;
pub mod report;
pub mod semiclassical;
pub mod transfer;
pub mod transseries;
pub mod trigpoly;

mod gamma;
mod roots;

pub use gamma::gamma_complex;

use thiserror::Error;

/// Errors surfaced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("critical point q = {q} is numerically degenerate: |f''| = {curvature:.3e} below threshold {threshold:.3e}")]
    DegenerateCritical { q: f64, curvature: f64, threshold: f64 },

    #[error("no real critical points found (potential may be constant)")]
    NoCriticalPoints,

    #[error("critical point kinds do not alternate around the circle")]
    NotAlternating,

    #[error("empty transseries has no leading term")]
    EmptySeries,

    #[error("shift substitution requires all degrees nonnegative, found degree {degree}")]
    NegativeDegree { degree: i32 },

    #[error("tunneling rate {rate} at index {index} is not negative; maximum must exceed neighbouring minima")]
    NonPositiveBarrier { index: usize, rate: f64 },

    #[error("f'(q - eps) vanishes at the connection evaluation point q = {q}")]
    ZeroSlope { q: f64 },

    #[error("gamma argument {arg} is within 1e-12 of a non-positive integer")]
    GammaPole { arg: String },

    #[error("integration contour passes within {distance:.3e} of a turning point")]
    ContourTooClose { distance: f64 },

    #[error("constant term of the quantization series fails to cancel: residual {residual:.3e} relative to smallest retained coefficient")]
    ConstantTermSurvives { residual: f64 },

    #[error("edge of slope {slope} has a root of multiplicity > 1 (cluster within {tolerance:.1e}); potential is not generic enough")]
    DegenerateEdge { slope: f64, tolerance: f64 },

    #[error("correction iteration stalled: degree-0 block persists but no positive-slope edge remains (level {level})")]
    NoProgress { level: usize },

    #[error("grid N = {n} too coarse or odd; need even N >= {min}")]
    GridTooCoarse { n: usize, min: usize },

    #[error("eigenvalue iteration failed to converge within {cap} steps")]
    ConvergenceFailure { cap: usize },

    #[error("decay fit needs at least 3 positive samples, got {got}")]
    NonPositiveEigenvalue { got: usize },

    #[error("expected {expected} eigenvalues below threshold at h = {h}, found {found}")]
    CountMismatch { h: f64, expected: usize, found: usize },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),
}

pub type Result<T> = std::result::Result<T, Error>;
