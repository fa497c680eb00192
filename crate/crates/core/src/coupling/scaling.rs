//! Normalization-independent comparison of two quasi-harmonic systems.
//!
//! Mode shapes are only defined up to a factor, and under `x_i = s_i y_i`
//! the coupling becomes `C_{i,jk} s_j s_k / s_i`. The fit matches modes by
//! eigenvalue, chooses per-mode signs, and solves a weighted least-squares
//! problem in `log |s|`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spectral::QuasiHarmonicSystem;

/// Maximum eigenvalue difference tolerated when matching modes.
pub const LAMBDA_MATCH_TOL: f64 = 1e-4;
const BRUTE_FORCE_SIGNS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Reference mode `b` corresponds to our mode `order[b]`.
    pub order: Vec<usize>,
    /// `x_ours[order[b]] = scales[b] · x_ref[b]`; negative entries are sign flips.
    pub scales: Vec<f64>,
    /// Reference entries whose sign could not be matched.
    pub sign_conflicts: usize,
    /// `max |C_scaled - C_ref| / max |C_ref|` over the union of entries.
    pub residual: f64,
    /// Largest eigenvalue difference among matched modes.
    pub lambda_mismatch: f64,
    /// Entry attaining the residual, in reference numbering.
    pub worst_entry: Option<(usize, usize, usize)>,
}

impl ScalingFit {
    pub fn flipped(&self) -> Vec<usize> {
        (0..self.scales.len()).filter(|&b| self.scales[b] < 0.0).collect()
    }

    /// Our system expressed in the reference frame.
    pub fn apply(&self, ours: &QuasiHarmonicSystem) -> QuasiHarmonicSystem {
        ours.reframed(&self.order, &self.scales)
    }

    /// Maps a reference-frame vector into our coordinates.
    pub fn to_ours(&self, x_ref: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.order.len()];
        for (b, &o) in self.order.iter().enumerate() {
            x[o] = self.scales[b] * x_ref[b];
        }
        x
    }
}

/// Matches modes of `ours` to `reference` by nearest eigenvalue.
pub fn match_modes(ours: &[f64], reference: &[f64]) -> Result<(Vec<usize>, f64)> {
    if ours.len() != reference.len() {
        return Err(Error::DimensionMismatch { expected: reference.len(), got: ours.len() });
    }
    let mut used = vec![false; ours.len()];
    let mut order = Vec::with_capacity(ours.len());
    let mut worst: f64 = 0.0;
    for &target in reference {
        let (idx, d) = (0..ours.len())
            .filter(|&i| !used[i])
            .map(|i| (i, (ours[i] - target).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("same length");
        if d > LAMBDA_MATCH_TOL {
            return Err(Error::InvalidParameter(format!("eigenvalue {target} has no match within {LAMBDA_MATCH_TOL}")));
        }
        used[idx] = true;
        order.push(idx);
        worst = worst.max(d);
    }
    Ok((order, worst))
}

pub fn scaling_equivalence(ours: &QuasiHarmonicSystem, reference: &QuasiHarmonicSystem, tau_rel: f64) -> Result<ScalingFit> {
    let n = reference.dim();
    let (order, lambda_mismatch) = match_modes(&ours.lambdas, &reference.lambdas)?;
    let aligned = ours.coupling.select(&order);
    let ref_max = reference.coupling.max_abs();
    if ref_max == 0.0 {
        return Err(Error::InvalidParameter("reference coupling is identically zero".into()));
    }
    let tau = tau_rel * ref_max;

    // (i, j, k, ours, reference) for every reference entry above threshold
    let terms: Vec<(usize, usize, usize, f64, f64)> = reference
        .coupling
        .entries()
        .filter(|e| e.3.abs() > tau)
        .map(|(i, j, k, r)| (i, j, k, aligned.get(i, j, k), r))
        .collect();

    let conflicts = |flip: &[bool]| {
        terms
            .iter()
            .filter(|&&(i, j, k, o, r)| {
                let s = flip[i] ^ flip[j] ^ flip[k];
                o == 0.0 || ((o < 0.0) ^ s) != (r < 0.0)
            })
            .count()
    };
    let flip = choose_signs(n, &conflicts);
    let sign_conflicts = conflicts(&flip);

    let rows: Vec<_> = terms.iter().filter(|t| t.3 != 0.0).collect();
    let mut a = DMatrix::zeros(rows.len(), n);
    let mut b = DVector::zeros(rows.len());
    for (row, &&(i, j, k, o, r)) in rows.iter().enumerate() {
        let w = r.abs() / ref_max;
        a[(row, j)] += w;
        a[(row, k)] += w;
        a[(row, i)] -= w;
        b[row] = w * (r.abs().ln() - o.abs().ln());
    }
    let u = if rows.is_empty() {
        DVector::zeros(n)
    } else {
        a.svd(true, true).solve(&b, 1e-12).map_err(|e| Error::InvalidParameter(e.to_string()))?
    };
    let scales: Vec<f64> = (0..n).map(|m| if flip[m] { -u[m].exp() } else { u[m].exp() }).collect();

    let scaled = aligned.rescaled(&scales);
    let mut residual: f64 = 0.0;
    let mut worst_entry = None;
    let mut consider = |i, j, k, d: f64| {
        let d = d / ref_max;
        if d > residual {
            residual = d;
            worst_entry = Some((i, j, k));
        }
    };
    for (i, j, k, v) in scaled.entries() {
        consider(i, j, k, (v - reference.coupling.get(i, j, k)).abs());
    }
    for (i, j, k, r) in reference.coupling.entries() {
        if scaled.get(i, j, k) == 0.0 {
            consider(i, j, k, r.abs());
        }
    }
    Ok(ScalingFit { order, scales, sign_conflicts, residual, lambda_mismatch, worst_entry })
}

/// Per-mode sign flips minimizing `conflicts`, preferring fewer flips.
fn choose_signs(n: usize, conflicts: &dyn Fn(&[bool]) -> usize) -> Vec<bool> {
    let none = vec![false; n];
    if conflicts(&none) == 0 {
        return none;
    }
    if n <= BRUTE_FORCE_SIGNS {
        let mut best = (usize::MAX, u32::MAX, 0u32);
        for mask in 0u32..(1u32 << n) {
            let flip: Vec<bool> = (0..n).map(|m| mask >> m & 1 == 1).collect();
            let key = (conflicts(&flip), mask.count_ones(), mask);
            if key < best {
                best = key;
            }
        }
        return (0..n).map(|m| best.2 >> m & 1 == 1).collect();
    }
    // coordinate descent for large systems
    let mut flip = none;
    let mut current = conflicts(&flip);
    loop {
        let mut improved = false;
        for m in 0..n {
            flip[m] = !flip[m];
            let c = conflicts(&flip);
            if c < current {
                current = c;
                improved = true;
            } else {
                flip[m] = !flip[m];
            }
        }
        if !improved {
            return flip;
        }
    }
}
