use super::{Rank2State, Tolerances};
use crate::concurrence::{product_factors, product_residual, PureState};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// One weighted product term w·|u⊗v⟩⟨u⊗v|.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub state: PureState,
    /// (u, v) with state coefficients uᵢvⱼ.
    pub factors: (Vec<C64>, Vec<C64>),
}

impl DecompositionTerm {
    pub fn new(weight: f64, state: PureState) -> Result<Self> {
        let factors = product_factors(&state)?;
        Ok(Self { weight, state, factors })
    }
}

/// A convex combination of product pure states.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
}

impl Decomposition {
    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// Σ wᵢ |ψᵢ⟩⟨ψᵢ|
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let first = self.terms.first()?;
        let d = first.state.dim() * first.state.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for t in &self.terms {
            acc = &acc + &t.state.projector().scale_real(t.weight);
        }
        Some(acc)
    }

    /// Largest 2×2 minor residual |aᵢⱼaₖₗ − aᵢₗaₖⱼ| over all terms.
    pub fn max_product_residual(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| product_residual(&t.state))
            .fold(0.0, f64::max)
    }
}

/// Residuals of the two weight equations
/// p′/(1+|μ₁|²) + (1−p′)/(1+|μ₂|²) = p and μ₁p′/(1+|μ₁|²) + μ₂(1−p′)/(1+|μ₂|²) = 0.
pub fn weight_equation_residuals(p: f64, p_prime: f64, mu1: C64, mu2: C64) -> (f64, f64) {
    let d1 = 1.0 + mu1.norm_sqr();
    let d2 = 1.0 + mu2.norm_sqr();
    let first = (p_prime / d1 + (1.0 - p_prime) / d2 - p).abs();
    let second = (mu1 * p_prime / d1 + mu2 * (1.0 - p_prime) / d2).norm();
    (first, second)
}

/// p′ = μ₂(1+|μ₁|²) / (z − μ₁μ₂z̄) with z = μ₂ − μ₁; complex in general.
pub(crate) fn mixing_weight(mu1: C64, mu2: C64) -> C64 {
    let z = mu2 - mu1;
    mu2 * (1.0 + mu1.norm_sqr()) / (z - mu1 * mu2 * z.conj())
}

/// p recovered from the roots: (1 − μ₁μ₂ z̄/z)⁻¹.
pub(crate) fn implied_p(mu1: C64, mu2: C64) -> C64 {
    let z = mu2 - mu1;
    (C64::new(1.0, 0.0) - mu1 * mu2 * z.conj() / z).inv()
}

pub(crate) fn roots_coincide(mu1: C64, mu2: C64, tol: f64) -> bool {
    (mu2 - mu1).norm() <= tol * (1.0 + mu1.norm() + mu2.norm())
}

/// Builds ρ = p′|Ẽ₁⟩⟨Ẽ₁| + (1−p′)|Ẽ₂⟩⟨Ẽ₂| with Ẽₖ = (E₁ + μₖE₂)/√(1+|μₖ|²).
///
/// Both roots must already be known common roots of the quadratic system.
/// The weight equations are re-verified and each term is checked to be a
/// product state.
pub fn decompose(state: &Rank2State, mu1: C64, mu2: C64, tol: &Tolerances) -> Result<Decomposition> {
    if roots_coincide(mu1, mu2, tol.residual) {
        return Err(Error::EqualRoots {
            gap: (mu2 - mu1).norm(),
        });
    }
    let w = mixing_weight(mu1, mu2);
    let p_prime = w.re;
    let delta = tol.weight_margin;
    if w.im.abs() > tol.residual || !(p_prime > delta && p_prime < 1.0 - delta) {
        return Err(Error::WeightOutOfRange { p_prime });
    }
    let (r1, r2) = weight_equation_residuals(state.p(), p_prime, mu1, mu2);
    if r1.max(r2) > tol.residual {
        return Err(Error::WeightEquation { residual: r1.max(r2) });
    }

    let mut terms = Vec::with_capacity(2);
    for (weight, mu) in [(p_prime, mu1), (1.0 - p_prime, mu2)] {
        let combo = state.e1().coefficients() + &state.e2().coefficients().scale(mu);
        let tilde = PureState::new(combo.scale_real(1.0 / (1.0 + mu.norm_sqr()).sqrt()))?;
        let residual = product_residual(&tilde);
        if residual > tol.residual {
            return Err(Error::NotProduct { residual });
        }
        terms.push(DecompositionTerm::new(weight, tilde)?);
    }
    Ok(Decomposition { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bell_pair() -> Rank2State {
        let z = c(0.0, 0.0);
        Rank2State::new(
            0.5,
            PureState::from_vector(2, &[c(H, 0.0), z, z, c(H, 0.0)]).unwrap(),
            PureState::from_vector(2, &[c(H, 0.0), z, z, c(-H, 0.0)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn bell_pair_decomposition() {
        let tol = Tolerances::default();
        let s = bell_pair();
        let d = decompose(&s, c(-1.0, 0.0), c(1.0, 0.0), &tol).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert!((d.terms[0].weight - 0.5).abs() < 1e-15);
        assert!((d.terms[1].weight - 0.5).abs() < 1e-15);
        // Ẽ₁ = (E₁ − E₂)/√2 = |11⟩, Ẽ₂ = (E₁ + E₂)/√2 = |00⟩
        assert!((d.terms[0].state.coeff(1, 1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((d.terms[1].state.coeff(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        let (u, v) = &d.terms[0].factors;
        assert!((u[1].norm() - 1.0).abs() < 1e-15 && (v[1].norm() - 1.0).abs() < 1e-15);
        let (r1, r2) = weight_equation_residuals(0.5, 0.5, c(-1.0, 0.0), c(1.0, 0.0));
        assert_eq!((r1, r2), (0.0, 0.0));
        let err = (&d.reconstruct().unwrap() - &s.density_matrix()).frobenius_norm();
        assert!(err < 1e-15);
    }

    #[test]
    fn equal_roots_rejected() {
        let tol = Tolerances::default();
        assert!(matches!(
            decompose(&bell_pair(), c(1.0, 0.0), c(1.0, 0.0), &tol),
            Err(Error::EqualRoots { .. })
        ));
    }

    #[test]
    fn weight_formula_matches_linear_solve() {
        // p′ from the second weight equation solved directly:
        // p′ = b/(b − a), a = μ₁/(1+|μ₁|²), b = μ₂/(1+|μ₂|²).
        for (mu1, mu2) in [
            (c(-0.3, 0.0), c(2.0, 0.0)),
            (c(0.1, -0.7), c(0.4, 0.9)),
            (c(0.0, -2.0), c(0.0, 0.5)),
        ] {
            let a = mu1 / (1.0 + mu1.norm_sqr());
            let b = mu2 / (1.0 + mu2.norm_sqr());
            let direct = b / (b - a);
            assert!((mixing_weight(mu1, mu2) - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn implied_p_bell_pair() {
        assert!((implied_p(c(-1.0, 0.0), c(1.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
    }
}
