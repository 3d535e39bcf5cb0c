use std::collections::BTreeMap;

use super::criteria::check_complex;
use super::{Branch, Decomposition, DecompositionTerm, Rank2State, Residual, Tolerances, Verdict};
use crate::concurrence::{generalized_concurrence, is_maximally_entangled, product_residual, PureState};
use crate::error::{dims, Error, Result};
use crate::linalg::{effective_rank, herm_eig, ComplexMatrix};

/// Concurrences of the two eigenvectors and the ratio a separable state must
/// satisfy: C(E₁) = ((1−p)/p)·C(E₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceRatio {
    pub c1: f64,
    pub c2: f64,
    /// (1 − p)/p
    pub expected_ratio: f64,
    /// |C(E₁) − ((1−p)/p)·C(E₂)|
    pub residual: f64,
}

impl ConcurrenceRatio {
    pub fn ratio(&self) -> f64 {
        self.c1 / self.c2
    }
}

pub fn concurrence_ratio(state: &Rank2State) -> ConcurrenceRatio {
    let c1 = generalized_concurrence(state.e1());
    let c2 = generalized_concurrence(state.e2());
    let expected_ratio = state.q() / state.p();
    ConcurrenceRatio {
        c1,
        c2,
        expected_ratio,
        residual: (c1 - expected_ratio * c2).abs(),
    }
}

/// Fast path: E₂ maximally entangled, E₁ ⊥ E₂ and p < ½ forces entanglement,
/// since C(E₁) = ((1−p)/p)·C(E₂) > 1 is impossible.
///
/// Returns `None` when the hypotheses do not hold for this labeling.
pub fn corollary_bound(state: &Rank2State, tol: f64) -> Option<Verdict> {
    let p = state.p();
    if p >= 0.5 - tol || !is_maximally_entangled(state.e2(), tol) || state.e1().overlap(state.e2()).norm() > tol {
        return None;
    }
    let ratio = concurrence_ratio(state);
    let mut residuals = BTreeMap::new();
    residuals.insert("corollary_p".to_string(), Residual::new(p, 0.5));
    residuals.insert("concurrence_ratio".to_string(), Residual::new(ratio.residual, tol));
    Some(Verdict::entangled(Branch::EntangledCorollary, residuals))
}

/// Verdict for a rank-one ρ = |ψ⟩⟨ψ|.
pub fn pure_verdict(psi: &PureState, tol: f64) -> Result<Verdict> {
    let residual = product_residual(psi);
    let mut residuals = BTreeMap::new();
    residuals.insert("product_minor".to_string(), Residual::new(residual, tol));
    residuals.insert(
        "concurrence".to_string(),
        Residual::new(generalized_concurrence(psi), tol),
    );
    if residual <= tol {
        let decomposition = Decomposition {
            terms: vec![DecompositionTerm::new(1.0, psi.clone())?],
        };
        Ok(Verdict::separable(Branch::PureProduct, residuals, decomposition))
    } else {
        Ok(Verdict::entangled(Branch::EntangledPure, residuals))
    }
}

/// Rank-two decision: the corollary fast path in either labeling, then the
/// full complex test.
pub fn check_rank2(state: &Rank2State, tol: &Tolerances) -> Result<Verdict> {
    if let Some(v) = corollary_bound(state, tol.residual) {
        return Ok(v);
    }
    if let Some(v) = corollary_bound(&state.swapped(), tol.residual) {
        return Ok(v);
    }
    check_complex(state, tol)
}

/// End-to-end decision for an N²×N² density matrix.
pub fn check(rho: &ComplexMatrix, n: usize, tol: &Tolerances) -> Result<Verdict> {
    let state = extract(rho, n, tol)?;
    match state {
        Extracted::Pure(psi) => pure_verdict(&psi, tol.residual),
        Extracted::Rank2(s) => check_rank2(&s, tol),
    }
}

pub(crate) enum Extracted {
    Pure(PureState),
    Rank2(Rank2State),
}

/// Validates ρ and extracts its eigen-pair representation.
pub(crate) fn extract(rho: &ComplexMatrix, n: usize, tol: &Tolerances) -> Result<Extracted> {
    if n == 0 || rho.rows() != n * n || rho.cols() != n * n {
        return Err(Error::DimensionMismatch {
            expected: dims(n * n, n * n),
            found: dims(rho.rows(), rho.cols()),
        });
    }
    let deviation = rho.hermitian_deviation();
    if deviation > tol.validation {
        return Err(Error::NotDensityMatrix {
            reason: format!("not Hermitian (relative deviation {deviation:.3e})"),
        });
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > tol.validation || trace.im.abs() > tol.validation {
        return Err(Error::NotDensityMatrix {
            reason: format!("trace {:.12} differs from 1 by {:.3e}", trace.re, 1.0 - trace.re),
        });
    }
    let es = herm_eig(&rho.hermitian_part())?;
    let min = es.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol.validation {
        return Err(Error::NotDensityMatrix {
            reason: format!("negative eigenvalue {min:.3e}"),
        });
    }
    let positive: Vec<f64> = es.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
    match effective_rank(&positive, tol.rank) {
        1 => Ok(Extracted::Pure(PureState::from_vector(n, &es.eigenvector(0))?)),
        2 => {
            let (l1, l2) = (positive[0], positive[1]);
            let e1 = PureState::from_vector(n, &es.eigenvector(0))?;
            let e2 = PureState::from_vector(n, &es.eigenvector(1))?;
            Ok(Extracted::Rank2(Rank2State::new(l1 / (l1 + l2), e1, e2)?))
        }
        rank => Err(Error::UnsupportedRank { rank }),
    }
}

/// Eigen-pair form of a rank-two density matrix.
pub fn rank2_from_density(rho: &ComplexMatrix, n: usize, tol: &Tolerances) -> Result<Rank2State> {
    match extract(rho, n, tol)? {
        Extracted::Rank2(s) => Ok(s),
        Extracted::Pure(_) => Err(Error::UnsupportedRank { rank: 1 }),
    }
}
