use super::matrix::ComplexMatrix;
use crate::error::{dims, Error, Result};

fn check_bipartite(rho: &ComplexMatrix, n: usize) -> Result<()> {
    if n == 0 || rho.rows() != n * n || rho.cols() != n * n {
        return Err(Error::DimensionMismatch {
            expected: dims(n * n, n * n),
            found: dims(rho.rows(), rho.cols()),
        });
    }
    Ok(())
}

/// Transpose on the second tensor factor: ⟨i k|ρ^{T_B}|j l⟩ = ⟨i l|ρ|j k⟩.
pub fn partial_transpose(rho: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    check_bipartite(rho, n)?;
    Ok(ComplexMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        rho[(i * n + l, j * n + k)]
    }))
}

/// Transpose on the first tensor factor: ⟨i k|ρ^{T_A}|j l⟩ = ⟨j k|ρ|i l⟩.
pub fn partial_transpose_first(rho: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    check_bipartite(rho, n)?;
    Ok(ComplexMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        rho[(j * n + k, i * n + l)]
    }))
}
