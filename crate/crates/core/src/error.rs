use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis vectors are linearly dependent (smallest singular value {smallest_singular:e})")]
    DegenerateBasis { smallest_singular: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not an orthogonal projection: {reason}")]
    NotAProjection { reason: String },

    #[error(
        "pair is not Fredholm: {ambiguous} eigenvalue(s) of P-Q in the band between tol and gap"
    )]
    NotFredholm { ambiguous: usize },

    #[error("threshold {lam} is within {distance:e} of an eigenvalue")]
    EigenvalueAtThreshold { lam: f64, distance: f64 },

    #[error("potential support radius {support} exceeds box half-width {half_width}")]
    SupportExceedsBox { support: f64, half_width: f64 },

    #[error("shift {z} is (numerically) in the spectrum")]
    SingularShift { z: Complex64 },

    #[error("quadrature with {nquad} nodes is below the minimum of {min}")]
    BadQuadrature { nquad: usize, min: usize },

    #[error("box too small: doubling it moved the result by {change:e} (allowed {allowed:e})")]
    BoxTooSmall { change: f64, allowed: f64 },

    #[error("theta = {theta} makes cot(theta/2) degenerate")]
    ThetaDegenerate { theta: f64 },

    #[error("Hilbert-Schmidt double integral diverges: {reason}")]
    DivergentBound { reason: String },

    #[error("ODE integration failed: {0}")]
    OdeFailure(String),

    #[error("scattering matrix unitarity residual {residual:e} exceeds tolerance")]
    UnitarityViolation { residual: f64 },

    #[error("flow trace under-resolved: phase step {max_step:.3} rad with {points} samples")]
    UnderResolved { max_step: f64, points: usize },

    #[error("{what} = {value} is outside the admissible range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
