//! Separability of rank-two states ρ = p|E₁⟩⟨E₁| + (1−p)|E₂⟩⟨E₂|.
//!
//! A vector E₁ + λE₂ is a product state exactly when every 2×2 minor of its
//! coefficient matrix vanishes, which is the quadratic system
//! αᵢⱼᵏˡλ² + βᵢⱼᵏˡλ + γᵢⱼᵏˡ = 0. The state is separable iff that system has
//! two distinct common roots whose product vectors mix back to ρ with a
//! weight strictly inside (0, 1).

mod criteria;
mod decompose;
mod pipeline;
mod quad;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use criteria::{check_complex, check_real, delta1, delta2, relative_delta1, relative_delta2};
pub use decompose::{decompose, weight_equation_residuals, Decomposition, DecompositionTerm};
pub use pipeline::{
    check, check_rank2, concurrence_ratio, corollary_bound, pure_verdict, rank2_from_density, ConcurrenceRatio,
};
pub use quad::{build_quad_system, roots, QuadSystem, Roots};

use crate::concurrence::PureState;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Tolerance on |⟨E₁|E₂⟩| accepted by [`Rank2State::new`].
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Numerical thresholds used by the decision procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance on the algebraic conditions (minor identities,
    /// common roots, weight equations).
    pub residual: f64,
    /// Eigenvalues at or below `rank × trace` count as zero.
    pub rank: f64,
    /// The mixing weight must lie in (δ, 1 − δ).
    pub weight_margin: f64,
    /// Hermiticity, trace and positivity checks on density-matrix input.
    pub validation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-9,
            rank: crate::linalg::DEFAULT_RANK_TOL,
            weight_margin: 1e-9,
            validation: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_residual(residual: f64) -> Self {
        Self {
            residual,
            ..Self::default()
        }
    }
}

/// Two orthonormal eigenvectors with eigenvalues p and 1 − p.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank2State {
    p: f64,
    e1: PureState,
    e2: PureState,
}

impl Rank2State {
    pub fn new(p: f64, e1: PureState, e2: PureState) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::RankDegenerate { p });
        }
        if e1.dim() != e2.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("E2 of dimension {}", e1.dim()),
                found: format!("{}", e2.dim()),
            });
        }
        let overlap = e1.overlap(&e2).norm();
        if overlap > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { overlap });
        }
        Ok(Self { p, e1, e2 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn e1(&self) -> &PureState {
        &self.e1
    }

    pub fn e2(&self) -> &PureState {
        &self.e2
    }

    pub fn dim(&self) -> usize {
        self.e1.dim()
    }

    /// (E₂, E₁, 1 − p): the same density matrix with the labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p: 1.0 - self.p,
            e1: self.e2.clone(),
            e2: self.e1.clone(),
        }
    }

    /// Multiplies the eigenvectors by global phases; ρ is unchanged.
    pub fn with_phases(&self, phi1: f64, phi2: f64) -> Self {
        Self {
            p: self.p,
            e1: self.e1.scaled(C64::from_polar(1.0, phi1)),
            e2: self.e2.scaled(C64::from_polar(1.0, phi2)),
        }
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        &self.e1.projector().scale_real(self.p) + &self.e2.projector().scale_real(1.0 - self.p)
    }
}

/// Which rule produced a [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    BothEigenvectorsProduct,
    Theorem1Eq6,
    Theorem1Eq7,
    Theorem2,
    PureProduct,
    EntangledConditionFail,
    EntangledWeightOutOfRange,
    EntangledEqualRoots,
    EntangledE2ProductE1Not,
    EntangledCorollary,
    EntangledPure,
}

impl Branch {
    pub const ALL: [Branch; 11] = [
        Branch::BothEigenvectorsProduct,
        Branch::Theorem1Eq6,
        Branch::Theorem1Eq7,
        Branch::Theorem2,
        Branch::PureProduct,
        Branch::EntangledConditionFail,
        Branch::EntangledWeightOutOfRange,
        Branch::EntangledEqualRoots,
        Branch::EntangledE2ProductE1Not,
        Branch::EntangledCorollary,
        Branch::EntangledPure,
    ];

    pub fn is_separable(self) -> bool {
        matches!(
            self,
            Branch::BothEigenvectorsProduct
                | Branch::Theorem1Eq6
                | Branch::Theorem1Eq7
                | Branch::Theorem2
                | Branch::PureProduct
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::BothEigenvectorsProduct => "BothEigenvectorsProduct",
            Branch::Theorem1Eq6 => "Theorem1_Eq6",
            Branch::Theorem1Eq7 => "Theorem1_Eq7",
            Branch::Theorem2 => "Theorem2",
            Branch::PureProduct => "PureProduct",
            Branch::EntangledConditionFail => "EntangledConditionFail",
            Branch::EntangledWeightOutOfRange => "EntangledWeightOutOfRange",
            Branch::EntangledEqualRoots => "EntangledEqualRoots",
            Branch::EntangledE2ProductE1Not => "EntangledE2ProductE1Not",
            Branch::EntangledCorollary => "EntangledCorollary",
            Branch::EntangledPure => "EntangledPure",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Branch::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown branch {s:?}"))
    }
}

/// A named condition value next to the threshold it was compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub threshold: f64,
}

impl Residual {
    pub fn new(value: f64, threshold: f64) -> Self {
        Self { value, threshold }
    }

    pub fn passes(&self) -> bool {
        self.value <= self.threshold
    }
}

/// Outcome of a separability decision with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub separable: bool,
    pub branch: Branch,
    pub theta: Option<f64>,
    pub roots: Option<(C64, C64)>,
    pub p_prime: Option<f64>,
    pub residuals: BTreeMap<String, Residual>,
    pub decomposition: Option<Decomposition>,
}

impl Verdict {
    pub(crate) fn entangled(branch: Branch, residuals: BTreeMap<String, Residual>) -> Self {
        debug_assert!(!branch.is_separable());
        Self {
            separable: false,
            branch,
            theta: None,
            roots: None,
            p_prime: None,
            residuals,
            decomposition: None,
        }
    }

    pub(crate) fn separable(
        branch: Branch,
        residuals: BTreeMap<String, Residual>,
        decomposition: Decomposition,
    ) -> Self {
        debug_assert!(branch.is_separable());
        Self {
            separable: true,
            branch,
            theta: None,
            roots: None,
            p_prime: None,
            residuals,
            decomposition: Some(decomposition),
        }
    }

    pub fn residual(&self, name: &str) -> Option<Residual> {
        self.residuals.get(name).copied()
    }
}
