//! Dense complex linear algebra: matrices, Kronecker products, Hermitian
//! eigendecomposition, SVD / Schmidt decomposition and partial transposes.

mod eigen;
mod matrix;
mod partial;
mod schmidt;

pub(crate) use eigen::fix_phase;
pub use eigen::{effective_rank, herm_eig, EigenSystem, HERMITIAN_TOL, MAX_SWEEPS};
pub use matrix::{inner, kron, kron_vec, vec_norm, ComplexMatrix, C64};
pub use partial::{partial_transpose, partial_transpose_first};
pub use schmidt::{schmidt_decompose, svd, SchmidtForm, Svd, SINGULAR_CUTOFF};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
