//! Symmetric reduction of the `2p`-particle chain, `p` odd.
//!
//! On the invariant set `q_p = q_{2p} = 0`, `q_{2p-i} = -q_i`, the chain
//! dynamics of the first `p - 1` particles is a fixed-end FPU chain:
//!
//! ```text
//! M q̈ + K q = α N(q),   N_i(q) = (q_{i+1} - q_i)² - (q_i - q_{i-1})²,
//! ```
//!
//! with `q_0 = q_p = 0`, `K` the tridiagonal `(2, -1)` matrix and
//! `M = diag(1, 1/a, 1, 1/a, …)`.

use nalgebra::DMatrix;

use crate::chain::{FullChainSystem, FullState};
use crate::error::{check_dim, Error, Result};
use crate::potential;
use crate::tensor::QuadTensor;

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    pub p: usize,
    pub a: f64,
    pub alpha: f64,
    /// Diagonal of the mass matrix.
    pub masses: Vec<f64>,
    /// Stiffness matrix (tridiagonal, 2 on the diagonal).
    pub stiffness: DMatrix<f64>,
    /// α-free quadratic part `N(q)`; row `i` holds the coefficients of `q_j q_k`.
    pub quadratic: QuadTensor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub q: Vec<f64>,
    pub v: Vec<f64>,
}

impl ReducedState {
    pub fn new(q: Vec<f64>, v: Vec<f64>) -> Self {
        Self { q, v }
    }

    pub fn at_rest(q: Vec<f64>) -> Self {
        let v = vec![0.0; q.len()];
        Self { q, v }
    }
}

pub fn build_reduced(p: usize, a: f64, alpha: f64) -> Result<ReducedSystem> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidParameter(format!("p must be odd and at least 3, got {p}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("mass parameter a must be positive, got {a}")));
    }
    let n = p - 1;
    let masses = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { 1.0 / a }).collect();
    let stiffness = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    });
    // Row i: q_{i+1}² - 2 q_i q_{i+1} + 2 q_{i-1} q_i - q_{i-1}², dropping q_0 and q_p.
    let mut quadratic = QuadTensor::zeros(n);
    for i in 0..n {
        if i + 1 < n {
            quadratic.add(i, i + 1, i + 1, 1.0);
            quadratic.add(i, i, i + 1, -2.0);
        }
        if i > 0 {
            quadratic.add(i, i - 1, i, 2.0);
            quadratic.add(i, i - 1, i - 1, -1.0);
        }
    }
    Ok(ReducedSystem { p, a, alpha, masses, stiffness, quadratic })
}

impl ReducedSystem {
    /// Number of degrees of freedom, `p - 1`.
    pub fn dim(&self) -> usize {
        self.p - 1
    }

    fn check(&self, s: &ReducedState) -> Result<()> {
        check_dim(self.dim(), s.q.len())?;
        check_dim(self.dim(), s.v.len())
    }

    /// `q̈ = M⁻¹(-K q + α N(q))` evaluated from the tensor form.
    pub fn accel_into(&self, q: &[f64], out: &mut [f64]) {
        self.quadratic.eval_into(q, out);
        let n = self.dim();
        for i in 0..n {
            let mut kq = 2.0 * q[i];
            if i > 0 {
                kq -= q[i - 1];
            }
            if i + 1 < n {
                kq -= q[i + 1];
            }
            out[i] = (self.alpha * out[i] - kq) / self.masses[i];
        }
    }

    pub fn eval_accel(&self, s: &ReducedState) -> Result<Vec<f64>> {
        self.check(s)?;
        let mut out = vec![0.0; self.dim()];
        self.accel_into(&s.q, &mut out);
        Ok(out)
    }

    /// Fixed-end potential `Σ_{i=0}^{p-1} V(q_{i+1} - q_i)` with `q_0 = q_p = 0`.
    pub fn potential_energy(&self, q: &[f64]) -> f64 {
        fixed_end_potential(q, self.alpha)
    }

    pub fn kinetic_energy(&self, v: &[f64]) -> f64 {
        self.masses.iter().zip(v).map(|(m, v)| 0.5 * m * v * v).sum()
    }

    pub fn energy(&self, s: &ReducedState) -> Result<f64> {
        self.check(s)?;
        Ok(self.kinetic_energy(&s.v) + self.potential_energy(&s.q))
    }
}

/// Potential of a fixed-end chain with interior displacements `q`:
/// `Σ_{i=0}^{n} V(q_{i+1} - q_i)` with `q_0 = q_{n+1} = 0`.
pub fn fixed_end_potential(q: &[f64], alpha: f64) -> f64 {
    let n = q.len();
    let at = |i: usize| if i == 0 || i == n + 1 { 0.0 } else { q[i - 1] };
    (0..=n).map(|i| potential(at(i + 1) - at(i), alpha, 0.0)).sum()
}

/// Lifts a reduced state to the symmetric `2p`-particle state:
/// `q_p = q_{2p} = 0` and `q_{2p-i} = -q_i` (1-based).
pub fn lift_symmetric(s: &ReducedState) -> FullState {
    let lift = |x: &[f64]| {
        let n = x.len();
        let mut full = Vec::with_capacity(2 * n + 2);
        full.extend_from_slice(x);
        full.push(0.0);
        full.extend(x.iter().rev().map(|v| -v));
        full.push(0.0);
        full
    };
    FullState { q: lift(&s.q), v: lift(&s.v) }
}

/// Largest violation of the symmetry relations by the full-chain
/// accelerations of the lifted state.
pub fn symmetry_residual(sys: &FullChainSystem, s: &ReducedState) -> Result<f64> {
    let n = s.q.len();
    check_dim(sys.len(), 2 * n + 2)?;
    check_dim(n, s.v.len())?;
    let full = lift_symmetric(s);
    let acc = sys.eval_accel(&full)?;
    let p = n + 1;
    let mut worst = acc[p - 1].abs().max(acc[2 * p - 1].abs());
    for i in 0..n {
        worst = worst.max((acc[i] + acc[2 * p - 2 - i]).abs());
    }
    Ok(worst)
}
