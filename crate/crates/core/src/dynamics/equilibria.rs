//! Equilibria of the quadratic systems: grid-seeded Newton iteration and
//! linear classification.

use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::linalg::general_eigenvalues;
use crate::reduction::ReducedSystem;
use crate::spectral::QuasiHarmonicSystem;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_STEP_TOL: f64 = 1e-13;
/// Accepted residual of the static equations.
pub const EQUILIBRIUM_RESIDUAL_TOL: f64 = 1e-12;
const DEDUP_DIST: f64 = 1e-8;
const IMAG_REL_TOL: f64 = 1e-8;
/// Largest dimension searched exhaustively on the grid.
pub const MAX_GRID_DIM: usize = 6;

/// Static equations `F(x) = 0` of a second-order system `ẍ = G(x)`.
pub trait StaticSystem: Sync {
    fn dim(&self) -> usize;
    /// Unscaled static force (for the reduced system `αN(q) - Kq`).
    fn force(&self, x: &[f64]) -> Vec<f64>;
    fn force_jacobian(&self, x: &[f64]) -> DMatrix<f64>;
    /// `∂G/∂x`.
    fn accel_jacobian(&self, x: &[f64]) -> DMatrix<f64>;
}

impl StaticSystem for ReducedSystem {
    fn dim(&self) -> usize {
        ReducedSystem::dim(self)
    }

    fn force(&self, q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; q.len()];
        self.quadratic.eval_into(q, &mut out);
        let kq = &self.stiffness * DVector::from_column_slice(q);
        out.iter().zip(kq.iter()).map(|(n, k)| self.alpha * n - k).collect()
    }

    fn force_jacobian(&self, q: &[f64]) -> DMatrix<f64> {
        self.quadratic.jacobian(q) * self.alpha - &self.stiffness
    }

    fn accel_jacobian(&self, q: &[f64]) -> DMatrix<f64> {
        let mut j = self.force_jacobian(q);
        for (i, m) in self.masses.iter().enumerate() {
            j.row_mut(i).scale_mut(1.0 / m);
        }
        j
    }
}

impl StaticSystem for QuasiHarmonicSystem {
    fn dim(&self) -> usize {
        QuasiHarmonicSystem::dim(self)
    }

    fn force(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.rhs_into(x, self.alpha, &mut out);
        out
    }

    fn force_jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut j = self.coupling.jacobian(x) * self.alpha;
        for (i, l) in self.lambdas.iter().enumerate() {
            j[(i, i)] -= l;
        }
        j
    }

    fn accel_jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        self.force_jacobian(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    pub point: Vec<f64>,
    /// Max-norm of the static force at `point`.
    pub residual: f64,
    /// Eigenvalues of the linearised first-order system, sorted by
    /// (real part, imaginary part).
    pub eigenvalues: Vec<Complex<f64>>,
    pub pure_imaginary: usize,
    pub positive_real: usize,
    pub negative_real: usize,
    /// Largest distance from an eigenvalue's negative and conjugate to the
    /// nearest member of the spectrum.
    pub pairing_error: f64,
}

impl EquilibriumReport {
    /// Linearly stable in the sense that the whole spectrum is imaginary.
    pub fn is_center(&self) -> bool {
        self.pure_imaginary == self.eigenvalues.len()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

pub fn classify_equilibrium(sys: &dyn StaticSystem, point: &[f64]) -> Result<EquilibriumReport> {
    check_dim(sys.dim(), point.len())?;
    let residual = max_abs(&sys.force(point));
    if !(residual <= 1e-10) {
        return Err(Error::NotEquilibrium(residual));
    }
    // first-order eigenvalues s satisfy s² = μ with μ an eigenvalue of ∂G/∂x
    let mut eigenvalues = Vec::with_capacity(2 * point.len());
    for mu in general_eigenvalues(&sys.accel_jacobian(point)) {
        let s = mu.sqrt();
        eigenvalues.push(s);
        eigenvalues.push(-s);
    }
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = eigenvalues.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let thr = IMAG_REL_TOL * scale;
    let pure_imaginary = eigenvalues.iter().filter(|s| s.re.abs() <= thr).count();
    let positive_real = eigenvalues.iter().filter(|s| s.re > thr).count();
    let negative_real = eigenvalues.iter().filter(|s| s.re < -thr).count();
    let nearest = |t: Complex<f64>| eigenvalues.iter().map(|s| (s - t).norm()).fold(f64::INFINITY, f64::min);
    let pairing_error = eigenvalues.iter().map(|&s| nearest(-s).max(nearest(s.conj()))).fold(0.0, f64::max);
    Ok(EquilibriumReport {
        point: point.to_vec(),
        residual,
        eigenvalues,
        pure_imaginary,
        positive_real,
        negative_real,
        pairing_error,
    })
}

/// Newton iteration from `seed`; `None` if it fails to converge.
pub fn newton(sys: &dyn StaticSystem, seed: &[f64]) -> Option<Vec<f64>> {
    let n = seed.len();
    let mut x = DVector::from_column_slice(seed);
    for _ in 0..NEWTON_MAX_ITER {
        let f = DVector::from_vec(sys.force(x.as_slice()));
        let step = sys.force_jacobian(x.as_slice()).lu().solve(&f)?;
        x -= &step;
        if !x.iter().all(|v| v.is_finite()) || x.amax() > 1e6 {
            return None;
        }
        if step.amax() <= NEWTON_STEP_TOL * x.amax().max(1.0) {
            let out: Vec<f64> = x.iter().copied().collect();
            debug_assert_eq!(out.len(), n);
            return (max_abs(&sys.force(&out)) <= EQUILIBRIUM_RESIDUAL_TOL).then_some(out);
        }
    }
    None
}

/// All equilibria reached by Newton from a uniform grid on
/// `[-half_width, half_width]^n`, deduplicated and sorted lexicographically.
pub fn find_equilibria(sys: &dyn StaticSystem, half_width: f64, grid_per_dim: usize) -> Result<Vec<EquilibriumReport>> {
    let n = sys.dim();
    if n > MAX_GRID_DIM {
        return Err(Error::InvalidParameter(format!("grid search limited to dimension {MAX_GRID_DIM}, got {n}")));
    }
    if grid_per_dim < 2 || !(half_width > 0.0) {
        return Err(Error::InvalidParameter("grid needs at least 2 points and a positive half-width".into()));
    }
    let total = grid_per_dim.pow(n as u32);
    let coord = |k: usize| -half_width + 2.0 * half_width * k as f64 / (grid_per_dim - 1) as f64;
    let found: Vec<Vec<f64>> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let seed: Vec<f64> = (0..n)
                .map(|_| {
                    let c = coord(idx % grid_per_dim);
                    idx /= grid_per_dim;
                    c
                })
                .collect();
            newton(sys, &seed)
        })
        .collect();

    let mut unique: Vec<Vec<f64>> = Vec::new();
    for x in found {
        let dup = unique.iter().any(|u| u.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) <= DEDUP_DIST);
        if !dup {
            unique.push(x);
        }
    }
    unique.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    unique.iter().map(|x| classify_equilibrium(sys, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::build_reduced;

    fn close(x: &[f64], y: &[f64]) -> bool {
        x.iter().zip(y).all(|(a, b)| (a - b).abs() < 1e-9)
    }

    #[test]
    fn p3_has_four_equilibria() {
        let sys = build_reduced(3, 0.01, 1.0).unwrap();
        let eqs = find_equilibria(&sys, 4.0, 9).unwrap();
        let pts: Vec<_> = eqs.iter().map(|e| e.point.clone()).collect();
        assert_eq!(pts.len(), 4, "{pts:?}");
        for want in [[0.0, 0.0], [1.0, 2.0], [1.0, -1.0], [-2.0, -1.0]] {
            assert!(pts.iter().any(|p| close(p, &want)), "missing {want:?}");
        }
        for e in &eqs {
            assert!(e.residual <= EQUILIBRIUM_RESIDUAL_TOL);
            assert!(e.pairing_error < 1e-9);
        }
    }

    #[test]
    fn origin_is_a_center() {
        let sys = build_reduced(5, 0.01, 1.0).unwrap();
        let r = classify_equilibrium(&sys, &[0.0; 4]).unwrap();
        assert!(r.is_center());
        assert_eq!(r.eigenvalues.len(), 8);
    }

    #[test]
    fn saddle_center_at_1_2() {
        let sys = build_reduced(3, 0.01, 1.0).unwrap();
        let r = classify_equilibrium(&sys, &[1.0, 2.0]).unwrap();
        assert_eq!((r.pure_imaginary, r.positive_real, r.negative_real), (2, 1, 1));
        let im = r.eigenvalues.iter().map(|s| s.im.abs()).fold(0.0, f64::max);
        let re = r.eigenvalues.iter().map(|s| s.re.abs()).fold(0.0, f64::max);
        assert!((im - 2.4525).abs() < 1e-3 && (re - 0.1223).abs() < 1e-3, "{:?}", r.eigenvalues);
    }

    #[test]
    fn rejects_non_equilibrium() {
        let sys = build_reduced(3, 0.01, 1.0).unwrap();
        assert!(matches!(classify_equilibrium(&sys, &[0.5, 0.5]), Err(Error::NotEquilibrium(_))));
        assert!(classify_equilibrium(&sys, &[0.0]).is_err());
    }
}
