//! Independent checks of separability verdicts.
//!
//! The partial-transpose criterion is necessary for separability in every
//! dimension and sufficient for two qubits, so it serves as a full oracle at
//! N = 2 and a one-sided one for N ≥ 3.

pub mod harness;
mod random;

pub use random::{
    haar_unitary, random_conjugate_pair, random_local_unitary, random_orthogonal_product_pair, random_product_mixture,
    random_product_state, random_pure_state, random_rank2, random_real_unit_vector, random_unit_vector, rng,
    rotate_degenerate_basis, Ensemble, RNG_ALGORITHM,
};

use crate::error::Result;
use crate::linalg::{herm_eig, partial_transpose, ComplexMatrix};
use crate::separability::{check_rank2, Decomposition, Rank2State, Tolerances, Verdict};

/// Default threshold on the smallest partial-transpose eigenvalue.
pub const DEFAULT_PPT_TOL: f64 = 1e-10;

/// Positive-partial-transpose test on the second factor.
///
/// Returns whether λ_min(ρ^{T_B}) ≥ −tol, together with λ_min.
pub fn ppt_test(rho: &ComplexMatrix, n: usize, tol: f64) -> Result<(bool, f64)> {
    let pt = partial_transpose(rho, n)?;
    let es = herm_eig(&pt.hermitian_part())?;
    let min = es.eigenvalues.last().copied().unwrap_or(0.0);
    Ok((min >= -tol, min))
}

/// How a verdict relates to the PPT oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// N = 2 and both say the same thing, or N > 2 and no implication is violated.
    Consistent,
    /// Separable but NPT, or (N = 2) entangled but PPT.
    Inconsistent,
    /// N > 2, entangled verdict on a PPT state: PPT cannot decide.
    OneSidedOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub ppt_holds: bool,
    pub min_pt_eigenvalue: f64,
    /// ‖Σ wᵢ|ψᵢ⟩⟨ψᵢ| − ρ‖_F when a decomposition was supplied.
    pub reconstruction_error: Option<f64>,
    pub agreement: Agreement,
}

fn agreement(n: usize, separable: bool, ppt: bool) -> Agreement {
    match (separable, ppt) {
        (true, true) => Agreement::Consistent,
        (true, false) => Agreement::Inconsistent,
        (false, false) => Agreement::Consistent,
        (false, true) if n == 2 => Agreement::Inconsistent,
        (false, true) => Agreement::OneSidedOnly,
    }
}

/// Checks a claimed decomposition against ρ and the PPT criterion.
///
/// A non-empty decomposition is treated as a separable claim. It is only
/// `Consistent` if it also reconstructs ρ within `tol`.
pub fn verify_decomposition(rho: &ComplexMatrix, decomposition: &Decomposition, tol: f64) -> Result<OracleReport> {
    let n = (rho.rows() as f64).sqrt().round() as usize;
    let (ppt_holds, min) = ppt_test(rho, n, tol)?;
    let reconstruction_error = decomposition.reconstruct().map(|r| (&r - rho).frobenius_norm());
    let separable = !decomposition.terms.is_empty();
    let mut agreement = agreement(n, separable, ppt_holds);
    if reconstruction_error.is_some_and(|e| e > tol) || decomposition.max_product_residual() > tol {
        agreement = Agreement::Inconsistent;
    }
    Ok(OracleReport {
        ppt_holds,
        min_pt_eigenvalue: min,
        reconstruction_error,
        agreement,
    })
}

/// Compares a verdict with the PPT oracle for the matrix it was computed from.
pub fn compare_verdict(rho: &ComplexMatrix, n: usize, verdict: &Verdict, ppt_tol: f64) -> Result<OracleReport> {
    let (ppt_holds, min) = ppt_test(rho, n, ppt_tol)?;
    let reconstruction_error = verdict
        .decomposition
        .as_ref()
        .and_then(Decomposition::reconstruct)
        .map(|r| (&r - rho).frobenius_norm());
    Ok(OracleReport {
        ppt_holds,
        min_pt_eigenvalue: min,
        reconstruction_error,
        agreement: agreement(n, verdict.separable, ppt_holds),
    })
}

/// Runs the rank-two decision and the PPT oracle on the same state.
pub fn cross_validate(state: &Rank2State, tol: &Tolerances) -> Result<(Verdict, OracleReport)> {
    let verdict = check_rank2(state, tol)?;
    let rho = state.density_matrix();
    let report = compare_verdict(&rho, state.dim(), &verdict, DEFAULT_PPT_TOL)?;
    Ok((verdict, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::PureState;
    use crate::linalg::C64;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn werner_like(p: f64) -> ComplexMatrix {
        // p|Φ+⟩⟨Φ+| + (1−p)|01⟩⟨01|
        let z = C64::new(0.0, 0.0);
        let phi = PureState::from_vector(2, &[C64::new(H, 0.0), z, z, C64::new(H, 0.0)]).unwrap();
        let e01 = PureState::from_vector(2, &[z, C64::new(1.0, 0.0), z, z]).unwrap();
        &phi.projector().scale_real(p) + &e01.projector().scale_real(1.0 - p)
    }

    #[test]
    fn ppt_on_known_states() {
        let (holds, min) = ppt_test(&werner_like(1.0), 2, 1e-10).unwrap();
        assert!(!holds);
        assert!((min + 0.5).abs() < 1e-12);
        let (holds, _) = ppt_test(&ComplexMatrix::identity(4).scale_real(0.25), 2, 1e-10).unwrap();
        assert!(holds);
        // Any p > 0 admixture of Φ+ with |01⟩ is NPT.
        let (holds, min) = ppt_test(&werner_like(0.3), 2, 1e-10).unwrap();
        assert!(!holds && min < 0.0);
    }

    #[test]
    fn planted_decomposition_verifies() {
        let (rho, d) = random_product_mixture(3, 0.37, 11).unwrap();
        let r = verify_decomposition(&rho, &d, 1e-9).unwrap();
        assert!(r.ppt_holds);
        assert_eq!(r.agreement, Agreement::Consistent);
        assert!(r.reconstruction_error.unwrap() < 1e-12);
    }

    #[test]
    fn wrong_decomposition_is_flagged() {
        let (rho, mut d) = random_product_mixture(2, 0.37, 11).unwrap();
        d.terms[0].weight = 0.5;
        d.terms[1].weight = 0.5;
        let r = verify_decomposition(&rho, &d, 1e-9).unwrap();
        assert_eq!(r.agreement, Agreement::Inconsistent);
    }

    #[test]
    fn agreement_table() {
        assert_eq!(agreement(2, false, true), Agreement::Inconsistent);
        assert_eq!(agreement(3, false, true), Agreement::OneSidedOnly);
        assert_eq!(agreement(3, true, false), Agreement::Inconsistent);
        assert_eq!(agreement(4, false, false), Agreement::Consistent);
    }
}
