//! Seeded generators for test and benchmark instances.
//!
//! All randomness comes from ChaCha20 (the `rand_chacha` stream cipher RNG)
//! seeded through `SeedableRng::seed_from_u64`, so a seed replays the same
//! stream on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::concurrence::{apply_local_unitary, LocalUnitary, PureState};
use crate::error::Result;
use crate::linalg::{inner, kron_vec, vec_norm, ComplexMatrix, C64};
use crate::separability::{Decomposition, DecompositionTerm, Rank2State};

/// Name of the generator recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha20Rng::seed_from_u64";

/// Overlap above which two sampled directions count as collinear.
const COLLINEAR: f64 = 1.0 - 1e-6;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector in Cᵈ (normalized complex Gaussian).
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_normal(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Uniformly distributed unit vector in Rᵈ.
pub fn random_real_unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| C64::new(rng.sample(StandardNormal), 0.0)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
        for _ in 0..2 {
            for b in &cols {
                let ov = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= ov * y;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LocalUnitary {
    LocalUnitary::new(haar_unitary(rng, n)).expect("Gram-Schmidt output is unitary")
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PureState {
    PureState::from_vector(n, &random_unit_vector(rng, n * n)).expect("unit vector")
}

pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PureState {
    let u = random_unit_vector(rng, n);
    let v = random_unit_vector(rng, n);
    PureState::product(&u, &v).expect("unit factors")
}

/// Component of `v` orthogonal to `against`, normalized; `None` when nearly collinear.
fn orthogonal_part(v: &[C64], against: &[C64]) -> Option<Vec<C64>> {
    let ov = inner(against, v);
    if ov.norm() > COLLINEAR {
        return None;
    }
    let w: Vec<C64> = v.iter().zip(against).map(|(x, y)| x - ov * y).collect();
    let norm = vec_norm(&w);
    Some(w.into_iter().map(|z| z / norm).collect())
}

/// ρ = p′|u⊗v⟩⟨u⊗v| + (1−p′)|x⊗y⟩⟨x⊗y| with Haar-random unit factors, and
/// the planted decomposition that produced it.
pub fn random_product_mixture(n: usize, p_prime: f64, seed: u64) -> Result<(ComplexMatrix, Decomposition)> {
    let mut rng = rng(seed);
    loop {
        let first = random_product_state(&mut rng, n);
        let second = random_product_state(&mut rng, n);
        if first.overlap(&second).norm() > COLLINEAR {
            continue;
        }
        let rho = &first.projector().scale_real(p_prime) + &second.projector().scale_real(1.0 - p_prime);
        let planted = Decomposition {
            terms: vec![
                DecompositionTerm::new(p_prime, first)?,
                DecompositionTerm::new(1.0 - p_prime, second)?,
            ],
        };
        return Ok((rho, planted));
    }
}

/// Families of random rank-two states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// E₂ Haar-random, E₁ Haar-random projected orthogonal to it.
    Generic,
    /// E₂ = (U⊗V)(1/√N)Σ eᵢ⊗eᵢ for Haar U, V; E₁ random orthogonal.
    MaximallyEntangledE2,
    /// Real Gaussian coefficients for both eigenvectors.
    RealCoefficients,
}

pub fn random_rank2(n: usize, p: f64, seed: u64, ensemble: Ensemble) -> Result<Rank2State> {
    let mut rng = rng(seed);
    let d = n * n;
    let e2 = match ensemble {
        Ensemble::Generic => random_unit_vector(&mut rng, d),
        Ensemble::RealCoefficients => random_real_unit_vector(&mut rng, d),
        Ensemble::MaximallyEntangledE2 => {
            let u = random_local_unitary(&mut rng, n);
            let v = random_local_unitary(&mut rng, n);
            apply_local_unitary(&PureState::maximally_entangled(n), &u, &v)?.to_vector()
        }
    };
    let e1 = loop {
        let raw = match ensemble {
            Ensemble::RealCoefficients => random_real_unit_vector(&mut rng, d),
            _ => random_unit_vector(&mut rng, d),
        };
        if let Some(e1) = orthogonal_part(&raw, &e2) {
            break e1;
        }
    };
    Rank2State::new(p, PureState::from_vector(n, &e1)?, PureState::from_vector(n, &e2)?)
}

/// ½(|x⟩⟨x| + |x̄⟩⟨x̄|) for a random complex product x: a real density
/// matrix whose product vectors are E₁ ± iμE₂, i.e. purely imaginary roots.
pub fn random_conjugate_pair(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng(seed);
    loop {
        let u = random_unit_vector(&mut rng, n);
        let v = random_unit_vector(&mut rng, n);
        let x = kron_vec(&u, &v);
        let xbar: Vec<C64> = x.iter().map(C64::conj).collect();
        if inner(&xbar, &x).norm() > COLLINEAR {
            continue;
        }
        let rho = &ComplexMatrix::outer(&x, &x) + &ComplexMatrix::outer(&xbar, &xbar);
        return rho.scale_real(0.5);
    }
}

/// Two orthogonal random product states mixed ½/½, so the nonzero eigenvalue is degenerate.
pub fn random_orthogonal_product_pair(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng(seed);
    let u = random_unit_vector(&mut rng, n);
    let v = random_unit_vector(&mut rng, n);
    let x = loop {
        if let Some(x) = orthogonal_part(&random_unit_vector(&mut rng, n), &u) {
            break x;
        }
    };
    let y = random_unit_vector(&mut rng, n);
    let a = kron_vec(&u, &v);
    let b = kron_vec(&x, &y);
    (&ComplexMatrix::outer(&a, &a) + &ComplexMatrix::outer(&b, &b)).scale_real(0.5)
}

/// Rotates the eigenbasis of a state with p = ½ by a Haar 2×2 unitary.
pub fn rotate_degenerate_basis<R: Rng + ?Sized>(rng: &mut R, state: &Rank2State) -> Result<Rank2State> {
    let w = haar_unitary(rng, 2);
    let (a1, a2) = (state.e1().coefficients(), state.e2().coefficients());
    let f1 = &a1.scale(w[(0, 0)]) + &a2.scale(w[(1, 0)]);
    let f2 = &a1.scale(w[(0, 1)]) + &a2.scale(w[(1, 1)]);
    Rank2State::new(state.p(), PureState::normalized(f1)?, PureState::normalized(f2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::is_maximally_entangled;
    use crate::linalg::{effective_rank, herm_eig};

    #[test]
    fn haar_unitary_is_unitary() {
        let mut r = rng(7);
        for n in 2..6 {
            let u = haar_unitary(&mut r, n);
            assert!((&u.adjoint() * &u).identity_deviation() < 1e-13);
        }
    }

    #[test]
    fn product_mixture_is_deterministic_and_rank_two() {
        let (a, _) = random_product_mixture(2, 0.3, 42).unwrap();
        let (b, _) = random_product_mixture(2, 0.3, 42).unwrap();
        assert_eq!(a, b);
        let bits_a: Vec<u64> = a
            .as_slice()
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect();
        let bits_b: Vec<u64> = b
            .as_slice()
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect();
        assert_eq!(bits_a, bits_b);
        let (c, _) = random_product_mixture(2, 0.3, 43).unwrap();
        assert_ne!(a, c);
        for seed in 0..20 {
            let (rho, _) = random_product_mixture(3, 0.4, seed).unwrap();
            let es = herm_eig(&rho).unwrap();
            assert_eq!(effective_rank(&es.eigenvalues, 1e-10), 2);
        }
    }

    #[test]
    fn ensembles_hold_their_promises() {
        for seed in 0..10 {
            let s = random_rank2(3, 0.3, seed, Ensemble::MaximallyEntangledE2).unwrap();
            assert!(is_maximally_entangled(s.e2(), 1e-9));
            let s = random_rank2(3, 0.3, seed, Ensemble::RealCoefficients).unwrap();
            assert_eq!(s.e1().coefficients().max_imag(), 0.0);
            assert_eq!(s.e2().coefficients().max_imag(), 0.0);
            let s = random_rank2(3, 0.3, seed, Ensemble::Generic).unwrap();
            assert!(s.e1().overlap(s.e2()).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugate_pair_is_real() {
        let rho = random_conjugate_pair(3, 5);
        assert!(rho.max_imag() < 1e-16);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
    }
}
