use rank2sep::{check, check_rank2, Tolerances};
use rank2sep_bench::{generic_state, separable_density};

#[test]
fn fixtures_exercise_both_outcomes() {
    let tol = Tolerances::default();
    for n in 2..=5 {
        assert!(check(&separable_density(n), n, &tol).unwrap().separable);
        assert!(!check_rank2(&generic_state(n), &tol).unwrap().separable);
    }
}
