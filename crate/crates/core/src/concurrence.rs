//! Pure bipartite states, their local-unitary invariants and the generalized
//! concurrence C_N.

use crate::error::{dims, Error, Result};
use crate::linalg::{fix_phase, schmidt_decompose, svd, vec_norm, ComplexMatrix, C64};

/// Tolerance on ‖A‖_F = 1 accepted by [`PureState::new`].
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Tolerance on U†U = I accepted by [`LocalUnitary::new`].
pub const UNITARITY_TOL: f64 = 1e-10;

/// Default classification tolerance for product / maximally entangled tests.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Radicands down to this value are clamped to zero before taking a root.
const RADICAND_FLOOR: f64 = -1e-12;

/// A pure state on H ⊗ H given by its N×N coefficient matrix,
/// |Ψ⟩ = Σ aᵢⱼ eᵢ ⊗ eⱼ.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    coefficients: ComplexMatrix,
}

impl PureState {
    /// Wraps a square coefficient matrix with unit Frobenius norm.
    pub fn new(coefficients: ComplexMatrix) -> Result<Self> {
        if !coefficients.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square coefficient matrix".into(),
                found: dims(coefficients.rows(), coefficients.cols()),
            });
        }
        let norm = coefficients.frobenius_norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { coefficients })
    }

    /// Rescales to unit norm first. Fails only on the zero matrix or a non-square input.
    pub fn normalized(coefficients: ComplexMatrix) -> Result<Self> {
        let norm = coefficients.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(coefficients.scale_real(1.0 / norm))
    }

    /// Reads a length-N² state vector in the eᵢ ⊗ eⱼ ↦ i·N + j ordering.
    pub fn from_vector(n: usize, v: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_vec(n, n, v.to_vec())?)
    }

    /// u ⊗ v for unit vectors u, v.
    pub fn product(u: &[C64], v: &[C64]) -> Result<Self> {
        let a = ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j]);
        Self::new(a)
    }

    /// (1/√N) Σ eᵢ ⊗ eᵢ
    pub fn maximally_entangled(n: usize) -> Self {
        Self {
            coefficients: ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt()),
        }
    }

    pub fn dim(&self) -> usize {
        self.coefficients.rows()
    }

    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.coefficients
    }

    pub fn coeff(&self, i: usize, j: usize) -> C64 {
        self.coefficients[(i, j)]
    }

    /// The N²-component state vector.
    pub fn to_vector(&self) -> Vec<C64> {
        self.coefficients.as_slice().to_vec()
    }

    /// |Ψ⟩⟨Ψ|
    pub fn projector(&self) -> ComplexMatrix {
        let v = self.to_vector();
        ComplexMatrix::outer(&v, &v)
    }

    pub fn scaled(&self, phase: C64) -> Self {
        Self {
            coefficients: self.coefficients.scale(phase),
        }
    }

    pub fn overlap(&self, other: &PureState) -> C64 {
        crate::linalg::inner(self.coefficients.as_slice(), other.coefficients.as_slice())
    }
}

/// A unitary on a single factor H.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    matrix: ComplexMatrix,
}

impl LocalUnitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square unitary".into(),
                found: dims(matrix.rows(), matrix.cols()),
            });
        }
        let deviation = (&matrix.adjoint() * &matrix).identity_deviation();
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// (U ⊗ V)|Ψ⟩, i.e. A ↦ U A Vᵀ.
pub fn apply_local_unitary(psi: &PureState, u: &LocalUnitary, v: &LocalUnitary) -> Result<PureState> {
    let n = psi.dim();
    if u.dim() != n || v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} local unitaries"),
            found: format!("{} and {}", dims(u.dim(), u.dim()), dims(v.dim(), v.dim())),
        });
    }
    let a = &(u.matrix() * psi.coefficients()) * &v.matrix().transpose();
    Ok(PureState { coefficients: a })
}

/// I_α = Tr((AA†)^{α+1}) for α ∈ 0..N.
pub fn invariant(psi: &PureState, alpha: usize) -> Result<f64> {
    let n = psi.dim();
    if alpha >= n {
        return Err(Error::AlphaOutOfRange { alpha, n });
    }
    let a = psi.coefficients();
    let h = a * &a.adjoint();
    let mut power = h.clone();
    for _ in 0..alpha {
        power = &power * &h;
    }
    Ok(power.trace().re)
}

/// All invariants I_0 … I_{N−1}.
pub fn invariants(psi: &PureState) -> Vec<f64> {
    (0..psi.dim())
        .map(|alpha| invariant(psi, alpha).expect("alpha in range"))
        .collect()
}

/// Σ over i<j, k<m of |aᵢₖaⱼₘ − aᵢₘaⱼₖ|²: the sum of all squared 2×2 minors.
fn minor_sum(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for m in k + 1..n {
                    s += (a[(i, k)] * a[(j, m)] - a[(i, m)] * a[(j, k)]).norm_sqr();
                }
            }
        }
    }
    s
}

fn clamped_root(radicand: f64) -> Result<f64> {
    if radicand < RADICAND_FLOOR {
        return Err(Error::InternalConsistency(format!(
            "negative concurrence radicand {radicand:.3e}"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// C_N from the invariants: √(N/(N−1) · (I₀² − I₁)).
pub fn concurrence_from_invariants(psi: &PureState) -> Result<f64> {
    let n = psi.dim() as f64;
    if psi.dim() < 2 {
        return Ok(0.0);
    }
    let i0 = invariant(psi, 0)?;
    let i1 = invariant(psi, 1)?;
    clamped_root(n / (n - 1.0) * (i0 * i0 - i1))
}

/// C_N from the minor sum: √(N/(2(N−1)) · Σ_{ijkm} |aᵢₖaⱼₘ − aᵢₘaⱼₖ|²).
///
/// The full sum counts every unordered pair of rows and of columns four
/// times, so it is evaluated over i<j, k<m and scaled accordingly.
pub fn concurrence_from_minors(psi: &PureState) -> f64 {
    let n = psi.dim() as f64;
    if psi.dim() < 2 {
        return 0.0;
    }
    (2.0 * n / (n - 1.0) * minor_sum(psi.coefficients())).sqrt()
}

/// Generalized concurrence C_N ∈ [0, 1].
pub fn generalized_concurrence(psi: &PureState) -> f64 {
    let by_minors = concurrence_from_minors(psi);
    // Compared squared: the invariant form takes a square root of a
    // cancelling difference, so near product states it is only good to √ε.
    debug_assert!(
        concurrence_from_invariants(psi).is_ok_and(|c| (c * c - by_minors * by_minors).abs() < 1e-10),
        "concurrence formulas disagree"
    );
    by_minors.clamp(0.0, 1.0)
}

/// C_N from Schmidt coefficients: √(N/(N−1) · Σ_{i≠j} ΛᵢΛⱼ).
pub fn schmidt_concurrence(lambdas: &[f64]) -> Result<f64> {
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL || lambdas.iter().any(|&l| l < -NORMALIZATION_TOL) {
        return Err(Error::NotNormalized { norm: total });
    }
    let n = lambdas.len() as f64;
    if lambdas.len() < 2 {
        return Ok(0.0);
    }
    let squares: f64 = lambdas.iter().map(|l| l * l).sum();
    Ok(clamped_root(n / (n - 1.0) * (total * total - squares))?.min(1.0))
}

/// max over (i,j,k,l) of |aᵢⱼaₖₗ − aᵢₗaₖⱼ|.
pub fn product_residual(psi: &PureState) -> f64 {
    let a = psi.coefficients();
    let n = psi.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                for l in j + 1..n {
                    worst = worst.max((a[(i, j)] * a[(k, l)] - a[(i, l)] * a[(k, j)]).norm());
                }
            }
        }
    }
    worst
}

pub fn is_product(psi: &PureState, tol: f64) -> bool {
    product_residual(psi) <= tol
}

pub fn is_maximally_entangled(psi: &PureState, tol: f64) -> bool {
    1.0 - generalized_concurrence(psi) <= tol
}

/// Rank-one factorization aᵢⱼ ≈ uᵢvⱼ from the dominant singular triplet.
///
/// `u` carries the singular value, `v` is unit norm with its leading
/// component real and positive.
pub fn product_factors(psi: &PureState) -> Result<(Vec<C64>, Vec<C64>)> {
    let svd = svd(psi.coefficients())?;
    let sigma = svd.singular_values[0];
    let mut v: Vec<C64> = svd.right.column(0).iter().map(C64::conj).collect();
    let before = v.iter().copied().find(|z| z.norm() > 1e-10);
    fix_phase(&mut v);
    // Undo the phase applied to v on the left factor so u⊗v is unchanged.
    let phase = match before {
        Some(lead) => lead / lead.norm(),
        None => C64::new(1.0, 0.0),
    };
    let u: Vec<C64> = svd.left.column(0).iter().map(|z| z * sigma * phase).collect();
    debug_assert!((vec_norm(&v) - 1.0).abs() < 1e-12);
    Ok((u, v))
}

/// Schmidt coefficients of a pure state.
pub fn schmidt_coefficients(psi: &PureState) -> Result<Vec<f64>> {
    Ok(schmidt_decompose(psi.coefficients())?.coefficients)
}
