//! Fixed inputs for the benchmarks.

use rank2sep::oracles::{random_product_mixture, random_rank2, Ensemble};
use rank2sep::{ComplexMatrix, Rank2State};

pub const SEED: u64 = 0x5eed;

/// A planted separable density matrix (the slow path: full construction).
pub fn separable_density(n: usize) -> ComplexMatrix {
    random_product_mixture(n, 0.37, SEED).expect("valid parameters").0
}

/// A generic entangled rank-two state (usually rejected at the first condition).
pub fn generic_state(n: usize) -> Rank2State {
    random_rank2(n, 0.37, SEED, Ensemble::Generic).expect("valid parameters")
}

/// A Hermitian N²×N² test matrix.
pub fn hermitian(n: usize) -> ComplexMatrix {
    let s = generic_state(n);
    let rho = s.density_matrix();
    &rho + &ComplexMatrix::identity(n * n).scale_real(0.1)
}
