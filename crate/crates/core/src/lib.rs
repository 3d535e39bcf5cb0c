//! Separability of rank-two bipartite density matrices on Cᴺ ⊗ Cᴺ.
//!
//! The decision works on the eigen-pair form ρ = p|E₁⟩⟨E₁| + (1−p)|E₂⟩⟨E₂|
//! and produces either an explicit two-term product decomposition or the
//! condition that failed. The generalized concurrence of pure states and a
//! partial-transpose oracle are included.

pub mod concurrence;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod separability;

pub use concurrence::{generalized_concurrence, LocalUnitary, PureState};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use separability::{
    check, check_complex, check_rank2, check_real, Branch, Decomposition, DecompositionTerm, Rank2State, Residual,
    Tolerances, Verdict,
};
