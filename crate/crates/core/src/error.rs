//! Error type shared by the solver and verification layers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A boost was requested with |v| >= 1 (or too close to 1 for the
    /// gamma factor to stay well conditioned).
    #[error("superluminal velocity: |v| = {speed} (must satisfy |v| <= 1 - 1e-9)")]
    SuperluminalVelocity { speed: f64 },

    /// Frequency outside the solitary-wave window 0 < omega < m.
    #[error("frequency omega = {omega} outside (0, m) with m = {mass}")]
    FrequencyOutOfRange { omega: f64, mass: f64 },

    /// Invalid model or numerical parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The shooting sweep found no sign change of the blowup classifier.
    #[error("no solution in bracket: swept initial values [{lo}, {hi}] without a sign change")]
    NoBracket { lo: f64, hi: f64 },

    /// The solver finished but could not certify the requested residual.
    #[error("tolerance failure: achieved residual {achieved:.3e} > requested {requested:.3e}")]
    ToleranceFailure { achieved: f64, requested: f64 },

    /// The profile tail underflowed before the decay-fit window.
    #[error("tail underflow: |u|+|v| reached numerical zero before the fit window; shrink r_max")]
    TailUnderflow,

    /// A quadrature refinement loop failed to converge.
    #[error("quadrature non-convergence: last refinements gave {previous:.12e} and {latest:.12e}")]
    QuadratureNonConvergence { previous: f64, latest: f64 },

    /// The self-consistent field loop did not reach its residual target.
    #[error("SCF divergence after {iterations} iterations; residual history tail: {history:?}")]
    ScfDiverged { iterations: usize, history: Vec<f64> },

    /// Shooting failed inside an SCF iteration.
    #[error("SCF iteration {iteration}: inner solve failed: {source}")]
    ScfInnerSolve {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    /// Profile file could not be parsed.
    #[error("profile format error: {0}")]
    ProfileFormat(String),

    /// Profile kind incompatible with the requested operation.
    #[error("profile kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: String, got: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
