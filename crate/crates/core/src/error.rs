use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QrgError {
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension {0} exceeds the supported maximum of 1024")]
    DimensionTooLarge(usize),
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("state norm deviates from 1 by {0:e}")]
    NotNormalized(f64),
    #[error("partial trace must keep at least one qubit")]
    EmptyKeep,
    #[error("qubit label {label} out of range 1..={nqubits}")]
    QubitOutOfRange { label: usize, nqubits: usize },
    #[error("bipartition part must be a nonempty proper subset")]
    InvalidBipartition,
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("not a density matrix: {0}")]
    InvalidDensity(String),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("{model} ground state failed validation at gamma={gamma}: residual {residual:e}")]
    GroundStateValidation {
        model: &'static str,
        gamma: f64,
        residual: f64,
    },
    #[error("ground space at gamma={gamma} is not two-dimensional (gap to third level {gap:e})")]
    GroundSpaceDimension { gamma: f64, gap: f64 },
    #[error("zeta coefficient {index} is not finite at gamma={gamma}")]
    ZetaNotFinite { index: usize, gamma: f64 },
    #[error("xi0 = {xi0} is not positive at gamma={gamma}")]
    XiNonPositive { gamma: f64, xi0: f64 },
    #[error("scaling fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("scaling fit requires positive data, got N={n}, y={y}")]
    NonPositiveData { n: f64, y: f64 },
    #[error("scaling fit is degenerate (all ln N equal)")]
    DegenerateFit,
    #[error("derivative peak lies on the search boundary at gamma={0}")]
    PeakOnBoundary(f64),
    #[error("invalid search range [{0}, {1}]")]
    InvalidRange(f64, f64),
    #[error("residual entanglement {0:e} violates monogamy beyond tolerance")]
    MonogamyViolation(f64),
    #[error("pseudo-critical search needs at least one RG step")]
    ZeroSteps,
}

pub type Result<T> = std::result::Result<T, QrgError>;
