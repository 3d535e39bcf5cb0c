//! Decision rules: the real-coefficient Δ₁/Δ₂ test and the general complex
//! test with a phase e^{iθ}.

use std::collections::BTreeMap;

use super::decompose::{decompose, implied_p, mixing_weight, roots_coincide, Decomposition, DecompositionTerm};
use super::quad::{build_quad_system, roots, QuadSystem};
use super::{Branch, Rank2State, Residual, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::linalg::C64;

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum()
}

/// Σ over (i,j),(m,n),(k,l) of |βᵢⱼᵏˡαₘₙᵏˡ − αᵢⱼᵏˡβₘₙᵏˡ|².
fn pairwise_beta_alpha(sys: &QuadSystem) -> f64 {
    let n = sys.dim();
    let mut s = 0.0;
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let b = sys.beta(i, j, k, l);
                    let a = sys.alpha(i, j, k, l);
                    for m in 0..n {
                        for nn in 0..n {
                            s += (b * sys.alpha(m, nn, k, l) - a * sys.beta(m, nn, k, l)).norm_sqr();
                        }
                    }
                }
            }
        }
    }
    s
}

/// max over (i,j),(m,n),(k,l) of |βᵢⱼᵏˡαₘₙᵏˡ − αᵢⱼᵏˡβₘₙᵏˡ|, divided by
/// max|α| times the largest entry of all three tensors. Normalizing by max|β|
/// instead would turn a vanishing β into 0/0 noise.
fn pairwise_beta_alpha_relative_max(sys: &QuadSystem) -> f64 {
    let overall = sys.max_abs_alpha().max(sys.max_abs_beta()).max(sys.max_abs_gamma());
    let scale = sys.max_abs_alpha() * overall;
    if scale == 0.0 {
        return 0.0;
    }
    let n = sys.dim();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let b = sys.beta(i, j, k, l);
                    let a = sys.alpha(i, j, k, l);
                    for m in 0..n {
                        for nn in 0..n {
                            worst = worst.max((b * sys.alpha(m, nn, k, l) - a * sys.beta(m, nn, k, l)).norm());
                        }
                    }
                }
            }
        }
    }
    worst / scale
}

fn gamma_vs_alpha(sys: &QuadSystem, factor: C64) -> f64 {
    sys.gammas()
        .iter()
        .zip(sys.alphas())
        .map(|(g, a)| (g - factor * a).norm_sqr())
        .sum()
}

/// Δ₁ = Σ|γ − (1−p⁻¹)α|² + Σ|βᵢⱼᵏˡαₘₙᵏˡ − αᵢⱼᵏˡβₘₙᵏˡ|².
pub fn delta1(sys: &QuadSystem, p: f64) -> f64 {
    let c = C64::new(1.0 - 1.0 / p, 0.0);
    gamma_vs_alpha(sys, c) + pairwise_beta_alpha(sys)
}

/// Δ₂ = Σ|γ + (1−p⁻¹)α|² + Σ|β|².
pub fn delta2(sys: &QuadSystem, p: f64) -> f64 {
    let c = C64::new(1.0 - 1.0 / p, 0.0);
    gamma_vs_alpha(sys, -c) + norm_sqr(sys.betas())
}

/// Scale-free Δ₁: each sum divided by the matching product of tensor norms,
/// then square-rooted so it compares linearly against a tolerance.
pub fn relative_delta1(sys: &QuadSystem, p: f64) -> f64 {
    let c = 1.0 - 1.0 / p;
    let (na, nb, ng) = (norm_sqr(sys.alphas()), norm_sqr(sys.betas()), norm_sqr(sys.gammas()));
    let first = ratio(gamma_vs_alpha(sys, C64::new(c, 0.0)), ng + c * c * na);
    let second = ratio(pairwise_beta_alpha(sys), na * (na + nb + ng));
    (first + second).sqrt()
}

/// Scale-free Δ₂, normalized like [`relative_delta1`].
pub fn relative_delta2(sys: &QuadSystem, p: f64) -> f64 {
    let c = 1.0 - 1.0 / p;
    let (na, nb, ng) = (norm_sqr(sys.alphas()), norm_sqr(sys.betas()), norm_sqr(sys.gammas()));
    let first = ratio(gamma_vs_alpha(sys, C64::new(-c, 0.0)), ng + c * c * na);
    let second = ratio(nb, na + nb + ng);
    (first + second).sqrt()
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn both_product(state: &Rank2State, residuals: BTreeMap<String, Residual>) -> Result<Verdict> {
    let decomposition = Decomposition {
        terms: vec![
            DecompositionTerm::new(state.p(), state.e1().clone())?,
            DecompositionTerm::new(state.q(), state.e2().clone())?,
        ],
    };
    Ok(Verdict::separable(
        Branch::BothEigenvectorsProduct,
        residuals,
        decomposition,
    ))
}

fn degenerate_residuals(sys: &QuadSystem, tol: f64) -> BTreeMap<String, Residual> {
    let mut r = BTreeMap::new();
    r.insert("max_alpha".into(), Residual::new(sys.max_abs_alpha(), tol));
    r.insert("max_gamma".into(), Residual::new(sys.max_abs_gamma(), tol));
    r
}

/// Maps a failure inside an otherwise passing branch onto an entangled verdict.
fn failure_branch(err: &Error) -> Option<Branch> {
    match err {
        Error::CommonRootViolation { .. }
        | Error::WeightEquation { .. }
        | Error::NotProduct { .. }
        | Error::E2Product => Some(Branch::EntangledConditionFail),
        Error::EqualRoots { .. } => Some(Branch::EntangledEqualRoots),
        Error::WeightOutOfRange { .. } => Some(Branch::EntangledWeightOutOfRange),
        _ => None,
    }
}

fn entangled_from(err: Error, mut residuals: BTreeMap<String, Residual>, tol: f64) -> Result<Verdict> {
    let branch = failure_branch(&err).ok_or_else(|| err.clone())?;
    let value = match err {
        Error::CommonRootViolation { residual }
        | Error::WeightEquation { residual }
        | Error::NotProduct { residual } => residual,
        Error::EqualRoots { gap } => gap,
        Error::WeightOutOfRange { p_prime } => p_prime,
        _ => 1.0,
    };
    residuals.insert("failed_step".into(), Residual::new(value, tol));
    Ok(Verdict::entangled(branch, residuals))
}

/// Real-coefficient decision: separable iff Δ₁ or Δ₂ vanishes.
///
/// On the Δ₁ branch the roots are real with μ₁ < 0 < μ₂; on the Δ₂ branch
/// they are purely imaginary and the weight is ½. Either way the
/// decomposition is constructed and verified.
pub fn check_real(state: &Rank2State, tol: &Tolerances) -> Result<Verdict> {
    let max_imag = state
        .e1()
        .coefficients()
        .max_imag()
        .max(state.e2().coefficients().max_imag());
    if max_imag > tol.residual {
        return Err(Error::NotRealInput { max_imag });
    }
    real_decision(state, tol, true)
}

fn real_decision(state: &Rank2State, tol: &Tolerances, allow_swap: bool) -> Result<Verdict> {
    let eps = tol.residual;
    let sys = build_quad_system(state);
    if sys.max_abs_alpha() <= eps {
        let residuals = degenerate_residuals(&sys, eps);
        if sys.max_abs_gamma() <= eps {
            return both_product(state, residuals);
        }
        if allow_swap {
            let swapped = real_decision(&state.swapped(), tol, false)?;
            if swapped.separable {
                return Ok(swapped);
            }
        }
        return Ok(Verdict::entangled(Branch::EntangledE2ProductE1Not, residuals));
    }

    let p = state.p();
    let d1 = relative_delta1(&sys, p);
    let d2 = relative_delta2(&sys, p);
    let mut residuals = BTreeMap::new();
    residuals.insert("delta1".to_string(), Residual::new(d1, eps));
    residuals.insert("delta2".to_string(), Residual::new(d2, eps));

    let branch = if d1 <= eps {
        Branch::Theorem1Eq6
    } else if d2 <= eps {
        Branch::Theorem1Eq7
    } else {
        return Ok(Verdict::entangled(Branch::EntangledConditionFail, residuals));
    };

    let r = match roots(&sys, eps) {
        Ok(r) => r,
        Err(e) => return entangled_from(e, residuals, eps),
    };
    residuals.insert("common_root".into(), Residual::new(r.residual, eps));
    let scale = 1.0 + r.mu1.norm().max(r.mu2.norm());
    let shape = match branch {
        // real roots of opposite sign; same-sign roots score at least 1
        Branch::Theorem1Eq6 => {
            let imag = r.mu1.im.abs().max(r.mu2.im.abs()) / scale;
            let signs_ok = r.mu1.re < 0.0 && r.mu2.re > 0.0;
            if signs_ok {
                imag
            } else {
                1.0 + imag
            }
        }
        // purely imaginary roots
        _ => r.mu1.re.abs().max(r.mu2.re.abs()) / scale,
    };
    residuals.insert("root_shape".into(), Residual::new(shape, eps));
    if shape > eps {
        return Ok(Verdict::entangled(Branch::EntangledConditionFail, residuals));
    }

    let decomposition = match decompose(state, r.mu1, r.mu2, tol) {
        Ok(d) => d,
        Err(e) => return entangled_from(e, residuals, eps),
    };
    let p_prime = decomposition.terms[0].weight;
    let mut verdict = Verdict::separable(branch, residuals, decomposition);
    verdict.roots = Some((r.mu1, r.mu2));
    verdict.p_prime = Some(p_prime);
    verdict.theta = Some(if branch == Branch::Theorem1Eq6 {
        0.0
    } else {
        std::f64::consts::PI
    });
    Ok(verdict)
}

/// General decision for complex coefficients.
///
/// With c = 1 − p⁻¹ the state is separable iff, for a single phase e^{iθ},
/// γ = e^{iθ}cα entrywise, βᵢⱼᵏˡαₘₙᵏˡ = αᵢⱼᵏˡβₘₙᵏˡ, the pivot roots are
/// distinct common roots with z = μ₂ − μ₁ = e^{iθ}z̄, and the weight
/// p′ = μ₂(1+|μ₁|²)/(z − μ₁μ₂z̄) is real and strictly inside (0, 1).
pub fn check_complex(state: &Rank2State, tol: &Tolerances) -> Result<Verdict> {
    complex_decision(state, tol, true)
}

fn complex_decision(state: &Rank2State, tol: &Tolerances, allow_swap: bool) -> Result<Verdict> {
    let eps = tol.residual;
    let sys = build_quad_system(state);

    if sys.max_abs_alpha() <= eps {
        let residuals = degenerate_residuals(&sys, eps);
        if sys.max_abs_gamma() <= eps {
            return both_product(state, residuals);
        }
        // E₂ is product but E₁ is not: retry with the labels exchanged.
        if allow_swap {
            let swapped = complex_decision(&state.swapped(), tol, false)?;
            if swapped.separable {
                return Ok(swapped);
            }
        }
        return Ok(Verdict::entangled(Branch::EntangledE2ProductE1Not, residuals));
    }

    let p = state.p();
    let c = C64::new(1.0 - 1.0 / p, 0.0);
    let pivot = sys.pivot();
    let mut residuals = BTreeMap::new();

    let raw_phase = sys.gammas()[pivot] / (c * sys.alphas()[pivot]);
    let modulus_gap = (raw_phase.norm() - 1.0).abs();
    residuals.insert("phase_modulus".to_string(), Residual::new(modulus_gap, eps));
    if modulus_gap > eps {
        return Ok(Verdict::entangled(Branch::EntangledConditionFail, residuals));
    }
    let phase = raw_phase / raw_phase.norm();
    let theta = phase.arg();

    let eq14_scale = sys.max_abs_gamma().max(c.norm() * sys.max_abs_alpha());
    let eq14 = sys
        .gammas()
        .iter()
        .zip(sys.alphas())
        .map(|(g, a)| (g - phase * c * a).norm())
        .fold(0.0, f64::max)
        / eq14_scale;
    residuals.insert("gamma_alpha".into(), Residual::new(eq14, eps));
    if eq14 > eps {
        return Ok(with_theta(
            Verdict::entangled(Branch::EntangledConditionFail, residuals),
            theta,
        ));
    }

    let eq15 = pairwise_beta_alpha_relative_max(&sys);
    residuals.insert("beta_alpha".into(), Residual::new(eq15, eps));
    if eq15 > eps {
        return Ok(with_theta(
            Verdict::entangled(Branch::EntangledConditionFail, residuals),
            theta,
        ));
    }

    let r = match roots(&sys, eps) {
        Ok(r) => r,
        Err(e) => return entangled_from(e, residuals, eps).map(|v| with_theta(v, theta)),
    };
    residuals.insert("common_root".into(), Residual::new(r.residual, eps));
    let (mu1, mu2) = (r.mu1, r.mu2);

    if roots_coincide(mu1, mu2, eps) {
        residuals.insert("root_gap".into(), Residual::new((mu2 - mu1).norm(), eps));
        let mut v = Verdict::entangled(Branch::EntangledEqualRoots, residuals);
        v.roots = Some((mu1, mu2));
        return Ok(with_theta(v, theta));
    }

    let z = mu2 - mu1;
    let z_phase = (z - phase * z.conj()).norm() / z.norm();
    residuals.insert("z_phase".into(), Residual::new(z_phase, eps));

    let weight = mixing_weight(mu1, mu2);
    residuals.insert("p_prime_imag".into(), Residual::new(weight.im.abs(), eps));
    let p_gap = (implied_p(mu1, mu2) - C64::new(p, 0.0)).norm();
    residuals.insert("p_consistency".into(), Residual::new(p_gap, eps));

    let finish = |mut v: Verdict| {
        v.roots = Some((mu1, mu2));
        v.p_prime = Some(weight.re);
        with_theta(v, theta)
    };

    if z_phase > eps || weight.im.abs() > eps || p_gap > eps {
        return Ok(finish(Verdict::entangled(Branch::EntangledConditionFail, residuals)));
    }
    let delta = tol.weight_margin;
    if !(weight.re > delta && weight.re < 1.0 - delta) {
        residuals.insert(
            "p_prime_margin".into(),
            Residual::new(weight.re.min(1.0 - weight.re), delta),
        );
        return Ok(finish(Verdict::entangled(Branch::EntangledWeightOutOfRange, residuals)));
    }

    match decompose(state, mu1, mu2, tol) {
        Ok(d) => Ok(finish(Verdict::separable(Branch::Theorem2, residuals, d))),
        Err(e) => entangled_from(e, residuals, eps).map(finish),
    }
}

fn with_theta(mut v: Verdict, theta: f64) -> Verdict {
    v.theta = Some(theta);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::PureState;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn vecstate(n: usize, v: &[C64]) -> PureState {
        PureState::from_vector(n, v).unwrap()
    }

    fn bell(kind: &str) -> PureState {
        let z = c(0.0, 0.0);
        let h = c(H, 0.0);
        let v = match kind {
            "phi+" => [h, z, z, h],
            "phi-" => [h, z, z, -h],
            "psi+" => [z, h, h, z],
            "psi-" => [z, h, -h, z],
            _ => unreachable!(),
        };
        vecstate(2, &v)
    }

    #[test]
    fn bell_pair_delta_values() {
        let s = Rank2State::new(0.5, bell("phi+"), bell("phi-")).unwrap();
        let sys = build_quad_system(&s);
        assert!(delta1(&sys, 0.5) < 1e-30);
        // Δ₂ = Σ|γ − α|² = Σ|2γ|²; the nonzero γ entries are ±½ at the four
        // quadruples (0,0,1,1), (1,1,0,0), (0,1,1,0), (1,0,0,1).
        assert!((delta2(&sys, 0.5) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn corollary_instance_both_deltas_positive() {
        let s = Rank2State::new(0.25, bell("psi-"), bell("phi+")).unwrap();
        let sys = build_quad_system(&s);
        assert!(delta1(&sys, 0.25) > 0.1);
        assert!(delta2(&sys, 0.25) > 0.1);
        let v = check_real(&s, &Tolerances::default()).unwrap();
        assert!(!v.separable);
    }

    #[test]
    fn bell_pair_real_branch() {
        let s = Rank2State::new(0.5, bell("phi+"), bell("phi-")).unwrap();
        let v = check_real(&s, &Tolerances::default()).unwrap();
        assert!(v.separable);
        assert_eq!(v.branch, Branch::Theorem1Eq6);
        let (mu1, mu2) = v.roots.unwrap();
        assert!((mu1 - c(-1.0, 0.0)).norm() < 1e-15 && (mu2 - c(1.0, 0.0)).norm() < 1e-15);
        assert!((v.p_prime.unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn imaginary_root_branch() {
        // ½|Φ−⟩⟨Φ−| + ½|Ψ+⟩⟨Ψ+| = ½(|x⟩⟨x| + |x̄⟩⟨x̄|), x = (1,i)⊗(1,i)/2, roots ±i
        let s = Rank2State::new(0.5, bell("phi-"), bell("psi+")).unwrap();
        let v = check_real(&s, &Tolerances::default()).unwrap();
        assert_eq!(v.branch, Branch::Theorem1Eq7);
        let (mu1, mu2) = v.roots.unwrap();
        assert!((mu1 - c(0.0, -1.0)).norm() < 1e-15 && (mu2 - c(0.0, 1.0)).norm() < 1e-15);
        assert!((v.p_prime.unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complex_pair_theorem2() {
        let z = c(0.0, 0.0);
        let e1 = vecstate(2, &[c(H, 0.0), z, z, c(0.0, H)]);
        let e2 = vecstate(2, &[c(H, 0.0), z, z, c(0.0, -H)]);
        let s = Rank2State::new(0.5, e1, e2).unwrap();
        let v = check_complex(&s, &Tolerances::default()).unwrap();
        assert!(v.separable);
        assert_eq!(v.branch, Branch::Theorem2);
        assert!(v.theta.unwrap().abs() < 1e-15);
        assert!((v.p_prime.unwrap() - 0.5).abs() < 1e-15);
        let d = v.decomposition.unwrap();
        // Ẽ₁ = (E₁ − E₂)/√2 = i|11⟩, Ẽ₂ = (E₁ + E₂)/√2 = |00⟩
        assert!((d.terms[0].state.coeff(1, 1).norm() - 1.0).abs() < 1e-15);
        assert!((d.terms[1].state.coeff(0, 0).norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            check_real(&s, &Tolerances::default()),
            Err(Error::NotRealInput { .. })
        ));
    }

    #[test]
    fn both_product_branch() {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let s = Rank2State::new(0.3, vecstate(2, &[one, z, z, z]), vecstate(2, &[z, z, z, one])).unwrap();
        for v in [
            check_real(&s, &Tolerances::default()).unwrap(),
            check_complex(&s, &Tolerances::default()).unwrap(),
        ] {
            assert_eq!(v.branch, Branch::BothEigenvectorsProduct);
            let d = v.decomposition.unwrap();
            assert_eq!(d.terms[0].weight, 0.3);
            assert_eq!(d.terms[1].weight, 0.7);
        }
    }

    #[test]
    fn product_e2_with_entangled_e1() {
        let z = c(0.0, 0.0);
        let s = Rank2State::new(0.5, bell("phi+"), vecstate(2, &[z, c(1.0, 0.0), z, z])).unwrap();
        for v in [
            check_real(&s, &Tolerances::default()).unwrap(),
            check_complex(&s, &Tolerances::default()).unwrap(),
        ] {
            assert!(!v.separable);
            assert_eq!(v.branch, Branch::EntangledE2ProductE1Not);
        }
        // Labels exchanged: E₁ product, E₂ entangled. The only product vectors
        // in the range are E₁ and one other, so p′ is forced to 1.
        let v = check_complex(&s.swapped(), &Tolerances::default()).unwrap();
        assert!(!v.separable);
    }
}
