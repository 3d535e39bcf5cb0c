//! Small seeded self-test suites, shared by the CLI `selftest` command.

use rand::Rng;

use super::{
    compare_verdict, random_product_mixture, random_rank2, rng, verify_decomposition, Agreement, Ensemble,
    DEFAULT_PPT_TOL,
};
use crate::concurrence::{generalized_concurrence, PureState};
use crate::linalg::C64;
use crate::separability::{check, check_rank2, Branch, Rank2State, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(what());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs every suite with `trials` random instances each.
pub fn run_all(seed: u64, trials: usize, tol: &Tolerances) -> Vec<SuiteReport> {
    vec![
        goldens(tol),
        two_qubit_agreement(seed, trials, tol),
        planted_completeness(seed.wrapping_add(1), trials, tol),
        corollary(seed.wrapping_add(2), trials, tol),
        relabeling(seed.wrapping_add(3), trials, tol),
    ]
}

pub fn goldens(tol: &Tolerances) -> SuiteReport {
    let mut r = SuiteReport::new("goldens");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let re = |x: f64| C64::new(x, 0.0);

    let phi_plus = PureState::from_vector(2, &[re(h), z, z, re(h)]).unwrap();
    let phi_minus = PureState::from_vector(2, &[re(h), z, z, re(-h)]).unwrap();
    let prod = PureState::from_vector(2, &[re(1.0), z, z, z]).unwrap();
    r.record((generalized_concurrence(&phi_plus) - 1.0).abs() < 1e-12, || {
        "C(Φ+) != 1".into()
    });
    r.record(generalized_concurrence(&prod) < 1e-12, || "C(|00⟩) != 0".into());
    let ghz3 = PureState::maximally_entangled(3);
    r.record((generalized_concurrence(&ghz3) - 1.0).abs() < 1e-12, || {
        "C(max, N=3) != 1".into()
    });

    let bell = Rank2State::new(0.5, phi_plus, phi_minus).unwrap();
    match check_rank2(&bell, tol) {
        Ok(v) => {
            let roots_ok = v
                .roots
                .is_some_and(|(a, b)| (a - re(-1.0)).norm() < 1e-10 && (b - re(1.0)).norm() < 1e-10);
            r.record(v.separable && roots_ok, || format!("Bell pair: {:?}", v.branch));
        }
        Err(e) => r.record(false, || format!("Bell pair: {e}")),
    }
    r
}

pub fn two_qubit_agreement(seed: u64, trials: usize, tol: &Tolerances) -> SuiteReport {
    let mut r = SuiteReport::new("two_qubit_ppt_agreement");
    let mut g = rng(seed);
    for t in 0..trials {
        let s: u64 = g.random();
        let rho = match t % 3 {
            0 => random_rank2(2, g.random_range(0.05..0.95), s, Ensemble::Generic).map(|x| x.density_matrix()),
            1 => random_product_mixture(2, g.random_range(0.05..0.95), s).map(|x| x.0),
            _ => random_rank2(2, g.random_range(0.05..0.45), s, Ensemble::MaximallyEntangledE2)
                .map(|x| x.density_matrix()),
        };
        let outcome = rho.and_then(|rho| {
            let v = check(&rho, 2, tol)?;
            compare_verdict(&rho, 2, &v, DEFAULT_PPT_TOL)
        });
        match outcome {
            Ok(rep) => r.record(rep.agreement == Agreement::Consistent, || {
                format!("seed {s}: disagreement, λmin(ρ^TB) = {:.3e}", rep.min_pt_eigenvalue)
            }),
            Err(e) => r.record(false, || format!("seed {s}: {e}")),
        }
    }
    r
}

pub fn planted_completeness(seed: u64, trials: usize, tol: &Tolerances) -> SuiteReport {
    let mut r = SuiteReport::new("planted_completeness");
    let mut g = rng(seed);
    for t in 0..trials {
        let n = 2 + t % 3;
        let s: u64 = g.random();
        let p_prime = g.random_range(0.05..0.95);
        let outcome = random_product_mixture(n, p_prime, s).and_then(|(rho, _)| {
            let v = check(&rho, n, tol)?;
            let d = v.decomposition.unwrap_or_default();
            Ok((v.separable, verify_decomposition(&rho, &d, 1e-8)?))
        });
        match outcome {
            Ok((sep, rep)) => r.record(sep && rep.agreement == Agreement::Consistent, || {
                format!(
                    "N={n} seed {s}: separable={sep}, reconstruction {:?}",
                    rep.reconstruction_error
                )
            }),
            Err(e) => r.record(false, || format!("N={n} seed {s}: {e}")),
        }
    }
    r
}

pub fn corollary(seed: u64, trials: usize, tol: &Tolerances) -> SuiteReport {
    let mut r = SuiteReport::new("corollary");
    let mut g = rng(seed);
    for t in 0..trials {
        let n = 2 + t % 3;
        let s: u64 = g.random();
        let p = g.random_range(0.05..0.45);
        let outcome = random_rank2(n, p, s, Ensemble::MaximallyEntangledE2).and_then(|st| check_rank2(&st, tol));
        match outcome {
            Ok(v) => r.record(v.branch == Branch::EntangledCorollary, || {
                format!("N={n} seed {s}: {}", v.branch)
            }),
            Err(e) => r.record(false, || format!("N={n} seed {s}: {e}")),
        }
    }
    r
}

/// Swapping labels and rephasing eigenvectors must not change the verdict.
pub fn relabeling(seed: u64, trials: usize, tol: &Tolerances) -> SuiteReport {
    let mut r = SuiteReport::new("relabeling_symmetry");
    let mut g = rng(seed);
    for t in 0..trials {
        let n = 2 + t % 3;
        let s: u64 = g.random();
        let state = if t % 2 == 0 {
            random_rank2(n, g.random_range(0.05..0.95), s, Ensemble::Generic)
        } else {
            random_product_mixture(n, g.random_range(0.05..0.95), s)
                .and_then(|(rho, _)| crate::separability::rank2_from_density(&rho, n, tol))
        };
        let (phi1, phi2) = (
            g.random_range(0.0..std::f64::consts::TAU),
            g.random_range(0.0..std::f64::consts::TAU),
        );
        let outcome = state.and_then(|st| {
            let a = check_rank2(&st, tol)?.separable;
            let b = check_rank2(&st.swapped(), tol)?.separable;
            let c = check_rank2(&st.with_phases(phi1, phi2), tol)?.separable;
            Ok((a, b, c))
        });
        match outcome {
            Ok((a, b, c)) => r.record(a == b && b == c, || format!("N={n} seed {s}: {a}/{b}/{c}")),
            Err(e) => r.record(false, || format!("N={n} seed {s}: {e}")),
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_small_run() {
        for report in run_all(2024, 30, &Tolerances::default()) {
            assert!(report.ok(), "{}: {:?}", report.name, report.failures);
        }
    }
}
