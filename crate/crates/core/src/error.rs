//! Error type shared by all modules of the crate.

use std::fmt;

/// Everything that can go wrong while assembling operators, solving
/// eigenproblems, or verifying deficiency identities.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// λ is within tolerance of a Dirichlet eigenvalue of one arc, so the
    /// closed forms α(λ), β(λ) blow up.
    SpectralPole { lambda: f64, theta: f64 },
    /// ε exceeds the guard below which exactly one circle eigenvalue is
    /// negative.
    EpsilonTooLarge { epsilon: f64, max: f64 },
    /// A domain/partition spec file violates an invariant.
    SpecError(String),
    /// Slit side classification is inconsistent (a neighbor classified on
    /// both sides, or a slit node with no usable orientation).
    SlitError(String),
    /// The supplied vector is not an eigenvector of the operator.
    NotAnEigenvector { residual: f64, tol: f64 },
    /// An iterative eigensolver exceeded its iteration budget.
    ConvergenceFailure { iterations: usize, detail: String },
    /// A symmetric factorization hit a zero pivot (shift on the spectrum).
    FactorizationError { pivot: f64, index: usize },
    /// (H − λ) restricted to the interior block is singular to tolerance, so
    /// the Schur complement is not defined.
    InteriorResonance { lambda: f64 },
    /// An eigenvalue sits inside the Morse-index dead band; the caller must
    /// perturb λ.
    ToleranceAmbiguity { eigenvalue: f64, band: f64 },
    /// A σ-sweep produced a decreasing eigenvalue branch.
    MonotonicityViolation { level: usize, sigma: f64, drop: f64 },
    /// The crossing level coincides with a sampled eigenvalue at an endpoint
    /// of the sweep.
    LevelOnSpectrum { level: f64 },
    /// The subdomain ground energies do not agree: not a spectral
    /// equipartition.
    NotEquipartition { residual: f64, tol: f64 },
    /// No ε > 0 separates the partition energy from the neighbouring
    /// eigenvalues of T₀ and T∞.
    EpsilonWindowEmpty,
    /// Bad CLI/file input that is not a spec-level invariant violation.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SpectralPole { lambda, theta } => write!(
                f,
                "spectral pole: sin(sqrt({lambda})*{theta}) vanishes to tolerance"
            ),
            Error::EpsilonTooLarge { epsilon, max } => {
                write!(f, "epsilon {epsilon} exceeds the guard {max}")
            }
            Error::SpecError(msg) => write!(f, "invalid domain spec: {msg}"),
            Error::SlitError(msg) => write!(f, "invalid slit data: {msg}"),
            Error::NotAnEigenvector { residual, tol } => {
                write!(f, "not an eigenvector: residual {residual:e} > tol {tol:e}")
            }
            Error::ConvergenceFailure { iterations, detail } => {
                write!(f, "eigensolver failed to converge after {iterations} steps: {detail}")
            }
            Error::FactorizationError { pivot, index } => {
                write!(f, "factorization breakdown: pivot {pivot:e} at index {index}")
            }
            Error::InteriorResonance { lambda } => {
                write!(f, "lambda {lambda} is an interior Dirichlet eigenvalue")
            }
            Error::ToleranceAmbiguity { eigenvalue, band } => write!(
                f,
                "eigenvalue {eigenvalue:e} inside the +/-{band:e} dead band; perturb lambda"
            ),
            Error::MonotonicityViolation { level, sigma, drop } => write!(
                f,
                "branch {level} decreased by {drop:e} at sigma={sigma}"
            ),
            Error::LevelOnSpectrum { level } => {
                write!(f, "crossing level {level} lies on a sampled spectrum endpoint")
            }
            Error::NotEquipartition { residual, tol } => write!(
                f,
                "subdomain ground energies differ by {residual:e} (tol {tol:e}); not an equipartition"
            ),
            Error::EpsilonWindowEmpty => write!(f, "no epsilon window separates the spectra"),
            Error::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
