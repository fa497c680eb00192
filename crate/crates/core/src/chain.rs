//! The full periodic chain with alternating masses.
//!
//! Particles are indexed from 0 internally; particle `j` (0-based) carries
//! mass `1` when `j` is even and `1/a` when `j` is odd, which is the
//! "odd masses 1, even masses 1/a" pattern in 1-based numbering. Particle
//! `N-1` is coupled to particle `0`.

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg::jacobi_eigen;
use crate::{potential, potential_deriv};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    /// The chain has `2 * n_pairs` particles.
    pub n_pairs: usize,
    /// Inverse of the heavy mass.
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ChainParams {
    pub fn new(n_pairs: usize, a: f64, alpha: f64) -> Self {
        Self { n_pairs, a, alpha, beta: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::InvalidParameter(format!("mass parameter a must be positive, got {}", self.a)));
        }
        if self.n_pairs < 2 {
            return Err(Error::InvalidParameter(format!(
                "chain needs at least 2 pairs (4 particles), got {}",
                self.n_pairs
            )));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter("alpha and beta must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullChainSystem {
    pub params: ChainParams,
    pub masses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub q: Vec<f64>,
    pub v: Vec<f64>,
}

impl FullState {
    pub fn zeros(n: usize) -> Self {
        Self { q: vec![0.0; n], v: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

pub fn build_chain(params: ChainParams) -> Result<FullChainSystem> {
    params.validate()?;
    let masses = (0..2 * params.n_pairs)
        .map(|j| if j % 2 == 0 { 1.0 } else { 1.0 / params.a })
        .collect();
    Ok(FullChainSystem { params, masses })
}

impl FullChainSystem {
    /// Number of particles.
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    fn check(&self, s: &FullState) -> Result<()> {
        check_dim(self.len(), s.q.len())?;
        check_dim(self.len(), s.v.len())
    }

    /// Accelerations `q̈_j = (V'(q_{j+1} - q_j) - V'(q_j - q_{j-1})) / m_j`.
    pub fn accel_into(&self, q: &[f64], out: &mut [f64]) {
        let n = self.len();
        let ChainParams { alpha, beta, .. } = self.params;
        // force[j] = V'(q_{j+1} - q_j): spring between j and j+1
        let spring = |j: usize| potential_deriv(q[(j + 1) % n] - q[j], alpha, beta);
        let mut left = spring(n - 1);
        for j in 0..n {
            let right = spring(j);
            out[j] = (right - left) / self.masses[j];
            left = right;
        }
    }

    pub fn eval_accel(&self, s: &FullState) -> Result<Vec<f64>> {
        self.check(s)?;
        let mut out = vec![0.0; self.len()];
        self.accel_into(&s.q, &mut out);
        Ok(out)
    }

    pub fn potential_energy(&self, q: &[f64]) -> f64 {
        let n = q.len();
        let ChainParams { alpha, beta, .. } = self.params;
        (0..n).map(|j| potential(q[(j + 1) % n] - q[j], alpha, beta)).sum()
    }

    pub fn kinetic_energy(&self, v: &[f64]) -> f64 {
        self.masses.iter().zip(v).map(|(m, v)| 0.5 * m * v * v).sum()
    }

    pub fn hamiltonian(&self, s: &FullState) -> Result<f64> {
        self.check(s)?;
        Ok(self.kinetic_energy(&s.v) + self.potential_energy(&s.q))
    }

    /// Total momentum `Σ m_j v_j`.
    pub fn momentum(&self, v: &[f64]) -> f64 {
        self.masses.iter().zip(v).map(|(m, v)| m * v).sum()
    }

    /// Periodic stiffness matrix of the linearization about the origin.
    pub fn stiffness(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut k = DMatrix::zeros(n, n);
        for j in 0..n {
            k[(j, j)] += 2.0;
            k[(j, (j + 1) % n)] -= 1.0;
            k[((j + 1) % n, j)] -= 1.0;
        }
        k
    }

    /// Squared frequencies of the linearized chain, sorted descending,
    /// including the zero eigenvalue of uniform translation.
    pub fn linear_spectrum(&self) -> Vec<f64> {
        let n = self.len();
        let k = self.stiffness();
        let inv_sqrt: Vec<f64> = self.masses.iter().map(|m| 1.0 / m.sqrt()).collect();
        let sym = DMatrix::from_fn(n, n, |i, j| inv_sqrt[i] * k[(i, j)] * inv_sqrt[j]);
        let (w, _) = jacobi_eigen(&sym);
        let mut w: Vec<f64> = w.iter().copied().collect();
        w.sort_by(|a, b| b.total_cmp(a));
        w
    }
}

/// Repeats a state `k` times along the chain (`k = 1` is the identity).
pub fn embed_state(s: &FullState, k: usize) -> FullState {
    let repeat = |x: &[f64]| x.iter().copied().cycle().take(x.len() * k).collect();
    FullState { q: repeat(&s.q), v: repeat(&s.v) }
}

/// The first `n` particles of a state.
pub fn restrict_state(s: &FullState, n: usize) -> FullState {
    FullState { q: s.q[..n].to_vec(), v: s.v[..n].to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six() -> FullChainSystem {
        build_chain(ChainParams::new(3, 0.01, 1.0)).unwrap()
    }

    #[test]
    fn masses_alternate() {
        let sys = six();
        assert_eq!(sys.len(), 6);
        for (j, m) in sys.masses.iter().enumerate() {
            let expected = if j % 2 == 0 { 1.0 } else { 100.0 };
            assert!((m - expected).abs() < 1e-12);
        }
        assert_eq!(build_chain(ChainParams::new(2, 0.01, 1.0)).unwrap().len(), 4);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(build_chain(ChainParams::new(3, -1.0, 1.0)).is_err());
        assert!(build_chain(ChainParams::new(3, 0.0, 1.0)).is_err());
        assert!(build_chain(ChainParams::new(1, 0.01, 1.0)).is_err());
    }

    #[test]
    fn equilibrium_and_translation() {
        let sys = six();
        let acc = sys.eval_accel(&FullState::zeros(6)).unwrap();
        assert!(acc.iter().all(|&a| a == 0.0));
        let s = FullState { q: vec![0.37; 6], v: vec![0.0; 6] };
        let acc = sys.eval_accel(&s).unwrap();
        assert!(acc.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn dimension_mismatch() {
        let sys = six();
        assert!(matches!(
            sys.eval_accel(&FullState::zeros(4)),
            Err(Error::DimensionMismatch { expected: 6, got: 4 })
        ));
        assert!(sys.hamiltonian(&FullState::zeros(5)).is_err());
    }

    #[test]
    fn hamiltonian_values() {
        let sys = six();
        assert_eq!(sys.hamiltonian(&FullState::zeros(6)).unwrap(), 0.0);
        let mut s = FullState::zeros(6);
        s.v[0] = 1.0;
        assert!((sys.hamiltonian(&s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn accel_matches_finite_difference_single_displacement() {
        let sys = six();
        let mut q = vec![0.0; 6];
        q[0] = 0.1;
        let mut acc = vec![0.0; 6];
        sys.accel_into(&q, &mut acc);
        let h = 1e-6;
        for j in 0..6 {
            let mut qp = q.clone();
            let mut qm = q.clone();
            qp[j] += h;
            qm[j] -= h;
            let grad = (sys.potential_energy(&qp) - sys.potential_energy(&qm)) / (2.0 * h);
            assert!((acc[j] + grad / sys.masses[j]).abs() < 1e-6, "j={j}");
        }
    }

    #[test]
    fn spectrum_six_particles() {
        let a: f64 = 0.01;
        let w = six().linear_spectrum();
        let r = (a * a - a + 1.0).sqrt();
        let expected = [2.0 * (1.0 + a), a + 1.0 + r, a + 1.0 + r, a + 1.0 - r, a + 1.0 - r, 0.0];
        for (got, want) in w.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn spectrum_groups() {
        for n_pairs in [2, 4, 5, 9] {
            let a = 0.01;
            let w = build_chain(ChainParams::new(n_pairs, a, 1.0)).unwrap().linear_spectrum();
            let zeros = w.iter().filter(|x| x.abs() < 1e-12).count();
            assert_eq!(zeros, 1);
            assert_eq!(w.iter().filter(|&&x| x > 2.0 - 1e-12).count(), n_pairs);
            assert_eq!(w.iter().filter(|&&x| x.abs() < 4.0 * a + 1e-12).count(), n_pairs);
        }
    }

    #[test]
    fn embed_identity_and_zero() {
        let s = FullState { q: vec![1.0, 2.0, 3.0, 4.0], v: vec![0.5, 0.0, 0.0, -0.5] };
        assert_eq!(embed_state(&s, 1), s);
        let e = embed_state(&s, 2);
        assert_eq!(e.q, vec![1.0, 2.0, 3.0, 4.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(restrict_state(&e, 4), s);
        assert_eq!(embed_state(&FullState::zeros(4), 3), FullState::zeros(12));
    }
}
