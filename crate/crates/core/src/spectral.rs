//! Normal modes of the reduced system and its quasi-harmonic form
//! `ẍ_i + λ_i x_i = α Σ_{j≤k} C_{i,jk} x_j x_k`.
//!
//! The generalized problem `K v = λ M v` is solved on the symmetric matrix
//! `M^{-1/2} K M^{-1/2}` with cyclic Jacobi; with `Q` its orthogonal
//! eigenvector matrix the modal transformation is `T = M^{-1/2} Q` and
//! `T⁻¹ = Qᵀ M^{1/2}`, so no explicit inversion is needed and the columns
//! of `T` have unit `M`-norm.
//!
//! Modes are kept in *pair order*: `(acoustic, optical)` for pair index
//! `j = 1, 2, …, (p-1)/2`, where the pair `j` eigenvalues are those of
//! `[[2a, 2a cos(πj/p)], [2 cos(πj/p), 2]]`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg::jacobi_eigen;
use crate::reduction::{fixed_end_potential, ReducedSystem};
use crate::tensor::QuadTensor;

/// Tolerance for matching computed eigenvalues to their closed forms.
pub const PAIR_MATCH_TOL: f64 = 1e-9;
/// Tensor entries below this fraction of the largest entry are dropped.
pub const TENSOR_PRUNE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Acoustic,
    Optical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeLabel {
    pub kind: ModeKind,
    /// 1-based pair index.
    pub pair: usize,
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ModeKind::Acoustic => "acoustic",
            ModeKind::Optical => "optical",
        };
        write!(f, "{kind}:{}", self.pair)
    }
}

impl std::str::FromStr for ModeLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, pair) = s.split_once(':').ok_or_else(|| format!("bad mode label '{s}'"))?;
        let kind = match kind {
            "acoustic" => ModeKind::Acoustic,
            "optical" => ModeKind::Optical,
            _ => return Err(format!("bad mode kind '{kind}'")),
        };
        let pair = pair.parse().map_err(|_| format!("bad pair index in '{s}'"))?;
        Ok(Self { kind, pair })
    }
}

/// Closed-form `(acoustic, optical)` eigenvalues of pair `j` (1-based).
///
/// The acoustic root is taken from the determinant `4a sin²(πj/p)` divided
/// by the optical root, which keeps full relative accuracy for small `a`.
pub fn pair_eigenvalues(a: f64, p: usize, j: usize) -> Result<(f64, f64)> {
    if j == 0 || 2 * j > p.saturating_sub(1) {
        return Err(Error::InvalidParameter(format!("pair index {j} out of range for p = {p}")));
    }
    let s2 = (PI * j as f64 / p as f64).sin().powi(2);
    let h = 1.0 + a;
    let optical = h + (h * h - 4.0 * a * s2).sqrt();
    let acoustic = 4.0 * a * s2 / optical;
    Ok((acoustic, optical))
}

/// Closed-form eigenvalues of all pairs, in pair order.
pub fn pair_spectrum(a: f64, p: usize) -> Vec<f64> {
    (1..=(p - 1) / 2)
        .flat_map(|j| {
            let (ac, op) = pair_eigenvalues(a, p, j).expect("pair index in range");
            [ac, op]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalBasis {
    pub lambdas: Vec<f64>,
    /// Columns are the mode shapes: `q = T x`.
    pub t: DMatrix<f64>,
    pub t_inv: DMatrix<f64>,
    pub labels: Vec<ModeLabel>,
}

impl ModalBasis {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn to_modal(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), q.len())?;
        Ok(mat_vec(&self.t_inv, q))
    }

    pub fn from_modal(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(mat_vec(&self.t, x))
    }

    /// `max |M⁻¹ K T - T Λ|`.
    pub fn conjugation_residual(&self, sys: &ReducedSystem) -> f64 {
        let n = self.dim();
        let kt = &sys.stiffness * &self.t;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for c in 0..n {
                let r = kt[(i, c)] / sys.masses[i] - self.t[(i, c)] * self.lambdas[c];
                worst = worst.max(r.abs());
            }
        }
        worst
    }
}

pub(crate) fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum()).collect()
}

pub fn eigendecompose(sys: &ReducedSystem) -> Result<ModalBasis> {
    let n = sys.dim();
    let inv_sqrt: Vec<f64> = sys.masses.iter().map(|m| 1.0 / m.sqrt()).collect();
    let sym = DMatrix::from_fn(n, n, |i, j| inv_sqrt[i] * sys.stiffness[(i, j)] * inv_sqrt[j]);
    let (w, q) = jacobi_eigen(&sym);

    let mut sorted: Vec<f64> = w.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    if let Some(pair) = sorted.windows(2).find(|p| p[1] - p[0] < PAIR_MATCH_TOL) {
        return Err(Error::DegenerateSpectrum(pair[0], pair[1]));
    }

    let mut columns = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for j in 1..=n / 2 {
        let (ac, op) = pair_eigenvalues(sys.a, sys.p, j)?;
        for (target, kind) in [(ac, ModeKind::Acoustic), (op, ModeKind::Optical)] {
            let (idx, dist) = (0..n)
                .filter(|&c| !used[c])
                .map(|c| (c, (w[c] - target).abs()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .ok_or(Error::UnmatchedEigenvalue(target))?;
            if dist > PAIR_MATCH_TOL {
                return Err(Error::UnmatchedEigenvalue(target));
            }
            used[idx] = true;
            columns.push(idx);
            labels.push(ModeLabel { kind, pair: j });
        }
    }

    let lambdas: Vec<f64> = columns.iter().map(|&c| w[c]).collect();
    let mut t = DMatrix::zeros(n, n);
    let mut t_inv = DMatrix::zeros(n, n);
    for (col, &c) in columns.iter().enumerate() {
        let shape: Vec<f64> = (0..n).map(|i| inv_sqrt[i] * q[(i, c)]).collect();
        let dominant = shape.iter().copied().max_by(|x, y| x.abs().total_cmp(&y.abs())).unwrap_or(1.0);
        let m_norm = shape
            .iter()
            .zip(&sys.masses)
            .map(|(v, m)| m * v * v)
            .sum::<f64>()
            .sqrt();
        let scale = dominant.signum() / m_norm;
        for i in 0..n {
            t[(i, col)] = shape[i] * scale;
            // row `col` of Qᵀ M^{1/2}, with the inverse scaling
            t_inv[(col, i)] = q[(i, c)] * sys.masses[i].sqrt() / scale / m_norm / m_norm;
        }
    }
    Ok(ModalBasis { lambdas, t, t_inv, labels })
}

/// Link from modal coordinates back to the reduced system, used for the
/// conserved energy.
#[derive(Debug, Clone, PartialEq)]
pub struct PullBack {
    /// Particle masses of the reduced system.
    pub masses: Vec<f64>,
    /// `q = map · x`.
    pub map: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiHarmonicSystem {
    pub p: usize,
    pub a: f64,
    pub alpha: f64,
    pub lambdas: Vec<f64>,
    pub labels: Vec<ModeLabel>,
    /// α-free coupling tensor `C`.
    pub coupling: QuadTensor,
    pub pullback: Option<PullBack>,
}

pub fn to_quasi_harmonic(sys: &ReducedSystem, basis: &ModalBasis) -> Result<QuasiHarmonicSystem> {
    check_dim(sys.dim(), basis.dim())?;
    let n = sys.dim();
    let w = DMatrix::from_fn(n, n, |i, r| basis.t_inv[(i, r)] / sys.masses[r]);
    let mut coupling = sys.quadratic.transform(&w, &basis.t);
    coupling.prune(TENSOR_PRUNE_REL * coupling.max_abs());
    Ok(QuasiHarmonicSystem {
        p: sys.p,
        a: sys.a,
        alpha: sys.alpha,
        lambdas: basis.lambdas.clone(),
        labels: basis.labels.clone(),
        coupling,
        pullback: Some(PullBack { masses: sys.masses.clone(), map: basis.t.clone() }),
    })
}

/// Builds reduction, modal basis and quasi-harmonic form in one go.
pub fn quasi_harmonic(p: usize, a: f64, alpha: f64) -> Result<(ReducedSystem, ModalBasis, QuasiHarmonicSystem)> {
    let sys = crate::reduction::build_reduced(p, a, alpha)?;
    let basis = eigendecompose(&sys)?;
    let qh = to_quasi_harmonic(&sys, &basis)?;
    Ok((sys, basis, qh))
}

/// `ẍ = -Λ x + α C(x, x)`.
pub fn eval_qh_rhs(sys: &QuasiHarmonicSystem, x: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_dim(sys.dim(), x.len())?;
    let mut out = vec![0.0; sys.dim()];
    sys.rhs_into(x, alpha, &mut out);
    Ok(out)
}

impl QuasiHarmonicSystem {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn rhs_into(&self, x: &[f64], alpha: f64, out: &mut [f64]) {
        self.coupling.eval_into(x, out);
        for i in 0..out.len() {
            out[i] = alpha * out[i] - self.lambdas[i] * x[i];
        }
    }

    /// Energy of the underlying reduced system, if the link is known.
    pub fn energy(&self, x: &[f64], v: &[f64]) -> Option<f64> {
        let pb = self.pullback.as_ref()?;
        let q = mat_vec(&pb.map, x);
        let qv = mat_vec(&pb.map, v);
        let kinetic: f64 = pb.masses.iter().zip(&qv).map(|(m, v)| 0.5 * m * v * v).sum();
        Some(kinetic + fixed_end_potential(&q, self.alpha))
    }

    /// Mode renumbering and rescaling: new mode `b` is old mode `order[b]`
    /// with `x_old = scales[b] · x_new`. A partial `order` restricts the
    /// system to those modes.
    pub fn reframed(&self, order: &[usize], scales: &[f64]) -> Self {
        assert_eq!(order.len(), scales.len());
        let coupling = self.coupling.select(order).rescaled(scales);
        let pullback = self.pullback.as_ref().map(|pb| PullBack {
            masses: pb.masses.clone(),
            map: DMatrix::from_fn(pb.map.nrows(), order.len(), |i, b| pb.map[(i, order[b])] * scales[b]),
        });
        Self {
            p: self.p,
            a: self.a,
            alpha: self.alpha,
            lambdas: order.iter().map(|&o| self.lambdas[o]).collect(),
            labels: order.iter().map(|&o| self.labels[o]).collect(),
            coupling,
            pullback,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::build_reduced;

    #[test]
    fn pair_eigenvalues_p3() {
        let (ac, op) = pair_eigenvalues(0.01, 3, 1).unwrap();
        assert!((ac - 0.0149623).abs() < 5e-8);
        assert!((op - 2.0050377).abs() < 5e-8);
        assert!((ac + op - 2.02).abs() < 1e-12);
        assert!(pair_eigenvalues(0.01, 3, 2).is_err());
        assert!(pair_eigenvalues(0.01, 3, 0).is_err());
    }

    #[test]
    fn pair_eigenvalues_p5_closed_form() {
        let a: f64 = 0.01;
        let s5 = 5f64.sqrt();
        // pair 1 uses (1 - √5), pair 2 uses (1 + √5)
        for (j, sign) in [(1, -1.0), (2, 1.0)] {
            let r = (1.0 - 0.5 * (1.0 + sign * s5) * a + a * a).sqrt();
            let (ac, op) = pair_eigenvalues(a, 5, j).unwrap();
            assert!((ac - (a + 1.0 - r)).abs() < 1e-14);
            assert!((op - (a + 1.0 + r)).abs() < 1e-14);
        }
    }

    #[test]
    fn pair_eigenvalues_p9_set() {
        let expected = [0.019391, 2.00061, 0.0149623, 2.00504, 0.00821511, 2.01178, 0.00231905, 2.01768];
        let mut got = pair_spectrum(0.01, 9);
        let mut want = expected.to_vec();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 5e-6, "{g} vs {w}");
        }
    }

    #[test]
    fn basis_p3() {
        let sys = build_reduced(3, 0.01, 1.0).unwrap();
        let b = eigendecompose(&sys).unwrap();
        assert!((b.lambdas[0] - 0.0149623).abs() < 5e-8);
        assert!((b.lambdas[1] - 2.00504).abs() < 5e-6);
        assert_eq!(b.labels[0], ModeLabel { kind: ModeKind::Acoustic, pair: 1 });
        assert_eq!(b.labels[1], ModeLabel { kind: ModeKind::Optical, pair: 1 });
        assert!(b.conjugation_residual(&sys) < 1e-10);
        let id = &b.t_inv * &b.t;
        assert!((id - DMatrix::identity(2, 2)).amax() < 1e-12);
        // unit M-norm and dominant component positive
        for c in 0..2 {
            let col = b.t.column(c);
            let mn: f64 = (0..2).map(|i| sys.masses[i] * col[i] * col[i]).sum();
            assert!((mn - 1.0).abs() < 1e-12);
            let dom = col.iter().copied().max_by(|x, y| x.abs().total_cmp(&y.abs())).unwrap();
            assert!(dom > 0.0);
        }
    }

    #[test]
    fn alpha_zero_rhs_is_linear() {
        let (_, _, qh) = quasi_harmonic(3, 0.01, 0.0).unwrap();
        let (_, _, qh1) = quasi_harmonic(3, 0.01, 1.0).unwrap();
        assert_eq!(qh.coupling, qh1.coupling);
        let x = [0.3, -0.2];
        let r = eval_qh_rhs(&qh, &x, 0.0).unwrap();
        assert_eq!(r, vec![-qh.lambdas[0] * 0.3, qh.lambdas[1] * 0.2]);
        assert_eq!(eval_qh_rhs(&qh, &[0.0, 0.0], 1.0).unwrap(), vec![0.0, 0.0]);
        assert!(eval_qh_rhs(&qh, &[0.0], 1.0).is_err());
    }

    #[test]
    fn mode_label_round_trip() {
        let l = ModeLabel { kind: ModeKind::Optical, pair: 7 };
        assert_eq!(l.to_string().parse::<ModeLabel>().unwrap(), l);
        assert!("sideways:1".parse::<ModeLabel>().is_err());
    }
}
