//! Singular value and Schmidt decompositions built on [`herm_eig`].

use super::eigen::herm_eig;
use super::matrix::{inner, vec_norm, ComplexMatrix, C64};
use crate::error::Result;

/// Singular values below this are treated as zero when recovering left vectors.
pub const SINGULAR_CUTOFF: f64 = 1e-12;

/// A = U diag(σ) V†, singular values descending, U and V unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
}

/// Schmidt form of a bipartite coefficient matrix:
/// |Ψ⟩ = Σᵢ √Λᵢ (left column i) ⊗ (right column i).
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left_basis: ComplexMatrix,
    pub right_basis: ComplexMatrix,
}

impl SchmidtForm {
    /// Reassembles the coefficient matrix aⱼₖ = Σᵢ √Λᵢ uⱼᵢ wₖᵢ.
    pub fn reassemble(&self) -> ComplexMatrix {
        let (u, w) = (&self.left_basis, &self.right_basis);
        ComplexMatrix::from_fn(u.rows(), w.rows(), |j, k| {
            self.coefficients
                .iter()
                .enumerate()
                .map(|(i, &l)| u[(j, i)] * w[(k, i)] * l.sqrt())
                .sum()
        })
    }
}

/// SVD of a square matrix via the eigendecomposition of A†A.
///
/// Right singular vectors are eigenvectors of A†A; left vectors are recovered
/// as A v / σ and completed to a unitary basis by Gram–Schmidt against the
/// standard basis where σ ≤ [`SINGULAR_CUTOFF`].
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let gram = &a.adjoint() * a;
    let es = herm_eig(&gram)?;
    let n = a.cols();
    let m = a.rows();
    let singular_values: Vec<f64> = es.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();

    let mut left_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    for (k, &sigma) in singular_values.iter().enumerate().take(m) {
        if sigma > SINGULAR_CUTOFF {
            let av = a.matvec(&es.eigenvector(k));
            let mut u: Vec<C64> = av.iter().map(|z| z / sigma).collect();
            // Re-orthogonalize against earlier columns to absorb roundoff.
            orthogonalize(&mut u, &left_cols);
            let norm = vec_norm(&u);
            left_cols.push(u.iter().map(|z| z / norm).collect());
        } else {
            break;
        }
    }
    complete_basis(&mut left_cols, m);

    let mut left = ComplexMatrix::zeros(m, m);
    for (j, col) in left_cols.iter().enumerate() {
        left.set_column(j, col);
    }
    Ok(Svd {
        singular_values: singular_values.into_iter().take(n.min(m)).collect(),
        left,
        right: es.eigenvectors,
    })
}

fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let overlap = inner(b, v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= overlap * y;
        }
    }
}

/// Extends orthonormal `cols` to a basis of Cᵐ using standard basis vectors.
fn complete_basis(cols: &mut Vec<Vec<C64>>, m: usize) {
    let mut candidate = 0;
    while cols.len() < m && candidate < m {
        let mut e = vec![C64::new(0.0, 0.0); m];
        e[candidate] = C64::new(1.0, 0.0);
        candidate += 1;
        // Two passes of classical Gram–Schmidt.
        orthogonalize(&mut e, cols);
        orthogonalize(&mut e, cols);
        let norm = vec_norm(&e);
        if norm > 1e-6 {
            cols.push(e.iter().map(|z| z / norm).collect());
        }
    }
}

/// Schmidt decomposition of the coefficient matrix `a` (aᵢⱼ = coefficient of eᵢ ⊗ eⱼ).
///
/// Λᵢ are the squared singular values. The right basis is the complex
/// conjugate of the right singular vectors so that reassembly is a plain
/// tensor sum.
pub fn schmidt_decompose(a: &ComplexMatrix) -> Result<SchmidtForm> {
    let svd = svd(a)?;
    Ok(SchmidtForm {
        coefficients: svd.singular_values.iter().map(|s| s * s).collect(),
        left_basis: svd.left,
        right_basis: svd.right.conj(),
    })
}
