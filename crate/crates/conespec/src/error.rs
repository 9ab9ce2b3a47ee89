use thiserror::Error;

/// Errors surfaced by the toolkit.
///
/// Operations that can fail in a recoverable, caller-actionable way return
/// `Result<_, Error>`; queries whose negative answer is a legitimate result
/// (e.g. "no aligning phase exists") return `Option` instead.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("eigensolver failed to converge after {iterations} sweeps (n = {n})")]
    NonConvergence { n: usize, iterations: usize },

    #[error("scalar magnitude overflow: exponent {exponent:.3e} exceeds f64 range")]
    Overflow { exponent: f64 },

    #[error("an eigenvalue of modulus {1:.6e} lies within {2:.3e} of the splitting circle |z| = {0:.6e}")]
    SplitOnSpectrum(f64, f64, f64),

    #[error("{0:.6e}+{1:.6e}i is not within tolerance of any eigenvalue")]
    NotAnEigenvalue(f64, f64),

    #[error("cone has no interior in the sense required: {0}")]
    NotSolid(String),

    #[error("cone representation missing: {0}")]
    RepresentationMissing(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("construction produced a cone inconsistent with its derivation: {0}")]
    ProofMismatch(String),

    #[error("probe vector is not a cone member (violation {violation:.3e})")]
    NotInCone { violation: f64 },

    #[error("expansion of the initial state over the eigenchain basis failed: {0}")]
    ExpansionFailure(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("flow direction failed to settle within {doublings} doublings (last angle change {last_angle:.3e})")]
    NoConvergence { doublings: usize, last_angle: f64 },

    #[error("operator is not positive on the cone: {0}")]
    NotPositive(String),

    #[error("supplied vectors are not eigenvectors at the stated tolerance: {0}")]
    NotEigenvectors(String),

    #[error("unknown instance family `{0}`")]
    UnknownFamily(String),

    #[error("cone is not pointed: {0}")]
    NotPointed(String),

    #[error("transform condition number {cond:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("invalid cone specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
