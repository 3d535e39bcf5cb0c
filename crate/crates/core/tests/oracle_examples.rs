use std::f64::consts::FRAC_1_SQRT_2 as H;

use rank2sep::oracles::{
    cross_validate, ppt_test, random_product_mixture, random_rank2, verify_decomposition, Agreement, Ensemble,
};
use rank2sep::separability::{Decomposition, DecompositionTerm};
use rank2sep::{check, Branch, PureState, Rank2State, Tolerances, C64};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn basis(i: usize) -> PureState {
    let mut v = vec![re(0.0); 4];
    v[i] = re(1.0);
    PureState::from_vector(2, &v).unwrap()
}

fn phi_plus() -> PureState {
    PureState::from_vector(2, &[re(H), re(0.0), re(0.0), re(H)]).unwrap()
}

fn psi_minus() -> PureState {
    PureState::from_vector(2, &[re(0.0), re(H), re(-H), re(0.0)]).unwrap()
}

fn classical() -> (rank2sep::ComplexMatrix, Decomposition) {
    let d = Decomposition {
        terms: vec![
            DecompositionTerm::new(0.5, basis(0)).unwrap(),
            DecompositionTerm::new(0.5, basis(3)).unwrap(),
        ],
    };
    (d.reconstruct().unwrap(), d)
}

#[test]
fn ppt_flags_quarter_singlet_mixture() {
    let rho = Rank2State::new(0.25, psi_minus(), phi_plus()).unwrap().density_matrix();
    let (holds, min) = ppt_test(&rho, 2, 1e-10).unwrap();
    assert!(!holds);
    // Bell-diagonal weights wᵢ give partial-transpose eigenvalues ½ − wᵢ; here ½ − 0.75
    assert!((min + 0.25).abs() < 1e-12);
}

#[test]
fn classical_decomposition_checks_out() {
    let (rho, d) = classical();
    let r = verify_decomposition(&rho, &d, 1e-9).unwrap();
    assert!(r.reconstruction_error.unwrap() < 1e-12);
    assert_eq!(r.agreement, Agreement::Consistent);
}

#[test]
fn perturbed_weights_are_inconsistent() {
    let (rho, mut d) = classical();
    d.terms[0].weight = 0.6;
    d.terms[1].weight = 0.4;
    assert_eq!(
        verify_decomposition(&rho, &d, 1e-9).unwrap().agreement,
        Agreement::Inconsistent
    );
}

#[test]
fn entangled_term_is_inconsistent() {
    let (rho, _) = classical();
    let d = Decomposition {
        terms: vec![DecompositionTerm::new(1.0, phi_plus()).unwrap()],
    };
    assert_eq!(
        verify_decomposition(&rho, &d, 1e-9).unwrap().agreement,
        Agreement::Inconsistent
    );
}

#[test]
fn cross_validation_examples() {
    let tol = Tolerances::default();
    let (rho, _) = random_product_mixture(2, 0.4, 5).unwrap();
    let state = rank2sep::separability::rank2_from_density(&rho, 2, &tol).unwrap();
    let (v, r) = cross_validate(&state, &tol).unwrap();
    assert!(v.separable);
    assert_eq!(r.agreement, Agreement::Consistent);

    let state = random_rank2(3, 0.3, 5, Ensemble::MaximallyEntangledE2).unwrap();
    let (v, r) = cross_validate(&state, &tol).unwrap();
    assert_eq!(v.branch, Branch::EntangledCorollary);
    assert_eq!(r.agreement, Agreement::Consistent);

    for seed in 0..50 {
        let state = random_rank2(3, 0.45, seed, Ensemble::Generic).unwrap();
        let (_, r) = cross_validate(&state, &tol).unwrap();
        assert_ne!(r.agreement, Agreement::Inconsistent);
    }
}

#[test]
fn half_phi_plus_half_psi_minus_is_separable() {
    // ½(|Φ+⟩⟨Φ+| + |Ψ−⟩⟨Ψ−|): degenerate spectrum, product vectors with imaginary roots
    let rho = Rank2State::new(0.5, phi_plus(), psi_minus()).unwrap().density_matrix();
    let v = check(&rho, 2, &Tolerances::default()).unwrap();
    assert!(v.separable, "{:?}", v.branch);
    let err = (&v.decomposition.unwrap().reconstruct().unwrap() - &rho).frobenius_norm();
    assert!(err < 1e-12);
    assert!(ppt_test(&rho, 2, 1e-10).unwrap().0);
}
