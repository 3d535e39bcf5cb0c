use thiserror::Error;

/// Errors raised by the linear-algebra, concurrence and separability layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("state is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (max deviation of U^dag U from I: {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invariant index {alpha} out of range 0..{n}")]
    AlphaOutOfRange { alpha: usize, n: usize },

    #[error("coefficients are not real (largest imaginary part {max_imag:.3e})")]
    NotRealInput { max_imag: f64 },

    #[error("eigenvalue weight p = {p} is outside the open interval (0, 1)")]
    RankDegenerate { p: f64 },

    #[error("eigenvectors are not orthogonal (|<E1|E2>| = {overlap:.3e})")]
    NotOrthogonal { overlap: f64 },

    #[error("second eigenvector is a product state; quadratic system has no pivot")]
    E2Product,

    #[error("a candidate root violates the quadratic system (relative residual {residual:.3e})")]
    CommonRootViolation { residual: f64 },

    #[error("the two roots coincide (|mu2 - mu1| = {gap:.3e})")]
    EqualRoots { gap: f64 },

    #[error("mixing weight p' = {p_prime} outside the admissible open interval")]
    WeightOutOfRange { p_prime: f64 },

    #[error("weight equations violated (residual {residual:.3e})")]
    WeightEquation { residual: f64 },

    #[error("constructed term is not a product state (minor residual {residual:.3e})")]
    NotProduct { residual: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("unsupported rank {rank}: only rank one and rank two states are decided")]
    UnsupportedRank { rank: usize },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dims(rows: usize, cols: usize) -> String {
    format!("{rows}x{cols}")
}
