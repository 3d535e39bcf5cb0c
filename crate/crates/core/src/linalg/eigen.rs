//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{dims, Error, Result};

/// Maximum number of full Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 200;

/// Relative Hermiticity tolerance accepted by [`herm_eig`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues sorted descending with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V Λ V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(v.rows(), v.rows(), |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k]).sum()
        })
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Eigenvalues come back in descending order. Each eigenvector has its first
/// component of non-negligible modulus rotated onto the positive real axis, so
/// repeated runs on the same input give identical output.
pub fn herm_eig(m: &ComplexMatrix) -> Result<EigenSystem> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: dims(m.rows(), m.cols()),
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 && n > 1 {
        // Entries below this are flushed to zero instead of rotated.
        let negligible = f64::EPSILON * scale / n as f64;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    if a[(p, q)].norm() <= negligible {
                        a[(p, q)] = C64::new(0.0, 0.0);
                        a[(q, p)] = C64::new(0.0, 0.0);
                    } else {
                        rotate(&mut a, &mut v, p, q);
                        rotated = true;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));

    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        fix_phase(&mut col);
        eigenvectors.set_column(dst, &col);
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates the (p, q) entry with a unitary G acting on the p/q plane:
/// A ← G† A G, V ← V G.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase w makes the pivot real: (D† A D)_pq = apq·w = r.
    let w = apq.conj() / r;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // G restricted to (p, q):  [[c, s], [-w s, w c]]
    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = -w * s;
    let gqq = w * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Rotates the first component with modulus above 1e-10 onto the positive real axis.
pub(crate) fn fix_phase(col: &mut [C64]) {
    if let Some(lead) = col.iter().copied().find(|z| z.norm() > 1e-10) {
        let phase = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
}

/// Number of eigenvalues above `tol` times their sum.
pub fn effective_rank(eigenvalues: &[f64], tol: f64) -> usize {
    let total: f64 = eigenvalues.iter().sum();
    eigenvalues.iter().filter(|&&x| x > tol * total).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::inner;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let es = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_keeps_standard_basis() {
        let m = ComplexMatrix::from_real(2, 2, &[0.3, 0.0, 0.0, 0.7]).unwrap();
        let es = herm_eig(&m).unwrap();
        assert_eq!(es.eigenvalues, vec![0.7, 0.3]);
        assert_eq!(es.eigenvector(0), vec![c(0.0), c(1.0)]);
        assert_eq!(es.eigenvector(1), vec![c(1.0), c(0.0)]);
    }

    #[test]
    fn bell_mixture_spectrum() {
        // ρ = ½|Φ+⟩⟨Φ+| + ½|Ψ−⟩⟨Ψ−|; multiply the Bell vectors through by hand
        // first to confirm they are eigenvectors with eigenvalue ½.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = [c(h), c(0.0), c(0.0), c(h)];
        let psi_minus = [c(0.0), c(h), c(-h), c(0.0)];
        let rho = &ComplexMatrix::outer(&phi_plus, &phi_plus).scale_real(0.5)
            + &ComplexMatrix::outer(&psi_minus, &psi_minus).scale_real(0.5);
        for bell in [&phi_plus, &psi_minus] {
            let image = rho.matvec(bell);
            for (x, y) in image.iter().zip(bell.iter()) {
                assert!((x - y * 0.5).norm() < 1e-15);
            }
        }

        let es = herm_eig(&rho).unwrap();
        let expected = [0.5, 0.5, 0.0, 0.0];
        for (got, want) in es.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14, "{:?}", es.eigenvalues);
        }
        assert!((&es.reconstruct() - &rho).frobenius_norm() < 1e-14);
    }

    #[test]
    fn complex_hermitian_orthonormal_vectors() {
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(0.5, -1.0), C64::new(0.0, 0.3)],
            vec![C64::new(0.5, 1.0), C64::new(-1.0, 0.0), C64::new(0.2, 0.2)],
            vec![C64::new(0.0, -0.3), C64::new(0.2, -0.2), C64::new(0.5, 0.0)],
        ])
        .unwrap();
        let es = herm_eig(&m).unwrap();
        assert!(es.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let vhv = &es.eigenvectors.adjoint() * &es.eigenvectors;
        assert!(vhv.identity_deviation() < 1e-13);
        assert!((&es.reconstruct() - &m).frobenius_norm() / m.frobenius_norm() < 1e-13);
        for k in 0..3 {
            let col = es.eigenvector(k);
            let lead = col.iter().find(|z| z.norm() > 1e-10).unwrap();
            assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
            let mv = m.matvec(&col);
            let lambda = inner(&col, &mv);
            assert!((lambda.re - es.eigenvalues[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(herm_eig(&r), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn effective_rank_thresholds() {
        assert_eq!(effective_rank(&[1.0, 0.0, 0.0, 0.0], 1e-10), 1);
        assert_eq!(effective_rank(&[0.6, 0.4, 0.0, 0.0], 1e-10), 2);
        // 1e-12 sits below 1e-10 × (sum = 1).
        assert_eq!(effective_rank(&[0.5, 0.5 - 1e-12, 1e-12, 0.0], 1e-10), 2);
    }
}
