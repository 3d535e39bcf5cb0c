use super::Rank2State;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// The coefficient tensors of αᵢⱼᵏˡλ² + βᵢⱼᵏˡλ + γᵢⱼᵏˡ = 0, i.e. the 2×2
/// minors of the coefficient matrix of E₁ + λE₂ expanded in λ.
///
/// α comes from E₂ alone, γ from E₁ alone, β mixes the two.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSystem {
    n: usize,
    alpha: Vec<C64>,
    beta: Vec<C64>,
    gamma: Vec<C64>,
}

pub type Quadruple = (usize, usize, usize, usize);

impl QuadSystem {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn alpha(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.alpha[self.idx(i, j, k, l)]
    }

    pub fn beta(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.beta[self.idx(i, j, k, l)]
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.gamma[self.idx(i, j, k, l)]
    }

    pub fn alphas(&self) -> &[C64] {
        &self.alpha
    }

    pub fn betas(&self) -> &[C64] {
        &self.beta
    }

    pub fn gammas(&self) -> &[C64] {
        &self.gamma
    }

    pub fn quadruple(&self, flat: usize) -> Quadruple {
        let n = self.n;
        (flat / (n * n * n), (flat / (n * n)) % n, (flat / n) % n, flat % n)
    }

    pub fn max_abs_alpha(&self) -> f64 {
        max_abs(&self.alpha)
    }

    pub fn max_abs_beta(&self) -> f64 {
        max_abs(&self.beta)
    }

    pub fn max_abs_gamma(&self) -> f64 {
        max_abs(&self.gamma)
    }

    pub fn max_imag(&self) -> f64 {
        self.alpha
            .iter()
            .chain(&self.beta)
            .chain(&self.gamma)
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    /// Index of the entry maximizing |α|.
    pub fn pivot(&self) -> usize {
        self.alpha
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Evaluates every equation at λ and returns the largest residual relative
    /// to the largest coefficient scale |α||λ|² + |β||λ| + |γ| over the set.
    pub fn common_root_residual(&self, lambda: C64) -> f64 {
        let l2 = lambda * lambda;
        let ln = lambda.norm();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for ((a, b), g) in self.alpha.iter().zip(&self.beta).zip(&self.gamma) {
            worst = worst.max((a * l2 + b * lambda + g).norm());
            scale = scale.max(a.norm() * ln * ln + b.norm() * ln + g.norm());
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn build_quad_system(state: &Rank2State) -> QuadSystem {
    let n = state.dim();
    let a1 = state.e1().coefficients();
    let a2 = state.e2().coefficients();
    let len = n * n * n * n;
    let mut alpha = Vec::with_capacity(len);
    let mut beta = Vec::with_capacity(len);
    let mut gamma = Vec::with_capacity(len);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    alpha.push(a2[(i, j)] * a2[(k, l)] - a2[(i, l)] * a2[(k, j)]);
                    gamma.push(a1[(i, j)] * a1[(k, l)] - a1[(i, l)] * a1[(k, j)]);
                    beta.push(
                        a1[(i, j)] * a2[(k, l)] + a2[(i, j)] * a1[(k, l)]
                            - a2[(i, l)] * a1[(k, j)]
                            - a1[(i, l)] * a2[(k, j)],
                    );
                }
            }
        }
    }
    QuadSystem { n, alpha, beta, gamma }
}

/// The two roots of the pivot equation, verified against the whole system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roots {
    pub mu1: C64,
    pub mu2: C64,
    pub pivot: Quadruple,
    /// Largest relative residual of either root over the full equation set.
    pub residual: f64,
}

/// Roots of a λ² + b λ + c = 0 (a ≠ 0) without cancellation.
pub(crate) fn solve_quadratic(a: C64, b: C64, c: C64) -> (C64, C64) {
    let sq = (b * b - a * c * 4.0).sqrt();
    // Pick the sign that adds |b| and √disc constructively.
    let q = if (b.conj() * sq).re >= 0.0 {
        -(b + sq) * 0.5
    } else {
        -(b - sq) * 0.5
    };
    if q.norm() == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    (q / a, c / q)
}

/// Orders roots so that μ₂ is the larger: by real part, falling back to the
/// imaginary part when the real parts agree within `tol`.
fn order_roots(r1: C64, r2: C64, tol: f64) -> (C64, C64) {
    let scale = 1.0 + r1.norm().max(r2.norm());
    let swap = if (r1.re - r2.re).abs() > tol * scale {
        r1.re > r2.re
    } else {
        r1.im > r2.im
    };
    if swap {
        (r2, r1)
    } else {
        (r1, r2)
    }
}

/// Solves the pivot equation (largest |α|) and checks both roots against
/// every equation in the set.
pub fn roots(sys: &QuadSystem, tol: f64) -> Result<Roots> {
    let pivot = sys.pivot();
    let a = sys.alpha[pivot];
    if a.norm() <= tol {
        return Err(Error::E2Product);
    }
    let (r1, r2) = solve_quadratic(a, sys.beta[pivot], sys.gamma[pivot]);
    let (mu1, mu2) = order_roots(r1, r2, tol);
    let residual = sys.common_root_residual(mu1).max(sys.common_root_residual(mu2));
    if residual > tol {
        return Err(Error::CommonRootViolation { residual });
    }
    Ok(Roots {
        mu1,
        mu2,
        pivot: sys.quadruple(pivot),
        residual,
    })
}
