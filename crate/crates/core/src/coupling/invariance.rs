//! Invariant coordinate submanifolds `V(Y) = {x_i = ẋ_i = 0, i ∈ Y}`.
//!
//! `V(Y)` is invariant iff no equation `r ∈ Y` contains a term `x_j x_k`
//! with both `j, k ∉ Y`.

use std::collections::BTreeSet;

use crate::coupling::squares::SquareMap;
use crate::error::{Error, Result};
use crate::spectral::QuasiHarmonicSystem;

/// Largest number of cycles for which all unions are enumerated.
pub const MAX_ENUMERATED_CYCLES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCandidate {
    /// Frozen modes `Y` (0-based, sorted).
    pub frozen: Vec<usize>,
    pub invariant: bool,
    /// Largest `|C_{r,jk}|` with `r ∈ Y` and `j, k ∉ Y`.
    pub max_violation: f64,
    /// The equation and monomial attaining `max_violation`.
    pub worst_term: Option<(usize, usize, usize)>,
}

impl InvariantCandidate {
    /// Modes that survive on `V(Y)`.
    pub fn kept(&self, n: usize) -> Vec<usize> {
        let frozen: BTreeSet<_> = self.frozen.iter().copied().collect();
        (0..n).filter(|m| !frozen.contains(m)).collect()
    }
}

pub fn check_invariance(sys: &QuasiHarmonicSystem, frozen: &[usize], tau_rel: f64) -> Result<InvariantCandidate> {
    let n = sys.dim();
    let set: BTreeSet<usize> = frozen.iter().copied().collect();
    if set.is_empty() || set.len() >= n || set.iter().any(|&m| m >= n) {
        return Err(Error::InvalidParameter(format!(
            "frozen set must be a nonempty proper subset of the {n} modes"
        )));
    }
    let mut max_violation: f64 = 0.0;
    let mut worst_term = None;
    for &r in &set {
        for e in sys.coupling.row(r) {
            if !set.contains(&e.j) && !set.contains(&e.k) && e.value.abs() > max_violation {
                max_violation = e.value.abs();
                worst_term = Some((r, e.j, e.k));
            }
        }
    }
    let tau = tau_rel * sys.coupling.max_abs();
    Ok(InvariantCandidate {
        frozen: set.into_iter().collect(),
        invariant: max_violation <= tau,
        max_violation,
        worst_term,
    })
}

/// Tests every nonempty proper union of ρ-cycles, taken pair-wise (both
/// modes of each pair in the union are frozen).
pub fn enumerate_invariant_candidates(
    sys: &QuasiHarmonicSystem,
    squares: &SquareMap,
    tau_rel: f64,
) -> Result<Vec<InvariantCandidate>> {
    let cycles = squares.rho.cycles().cycles;
    let c = cycles.len();
    if c > MAX_ENUMERATED_CYCLES {
        return Err(Error::InvalidParameter(format!("{c} cycles is too many to enumerate all unions")));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << c) - 1 {
        let mut frozen = Vec::new();
        for (b, cycle) in cycles.iter().enumerate() {
            if mask >> b & 1 == 1 {
                for &pair in cycle {
                    let (ac, op) = squares.pair_modes[pair];
                    frozen.push(ac);
                    frozen.push(op);
                }
            }
        }
        out.push(check_invariance(sys, &frozen, tau_rel)?);
    }
    Ok(out)
}

/// Restriction of `sys` to `kept`, provided the complement is invariant.
/// `kept` equal to all modes returns the system unchanged.
pub fn extract_subsystem(sys: &QuasiHarmonicSystem, kept: &[usize], tau_rel: f64) -> Result<QuasiHarmonicSystem> {
    let n = sys.dim();
    let kept_set: BTreeSet<usize> = kept.iter().copied().collect();
    if kept_set.is_empty() || kept_set.iter().any(|&m| m >= n) {
        return Err(Error::InvalidParameter("kept set must be a nonempty subset of the modes".into()));
    }
    let order: Vec<usize> = kept_set.into_iter().collect();
    if order.len() < n {
        let frozen: Vec<usize> = (0..n).filter(|m| !order.contains(m)).collect();
        let cand = check_invariance(sys, &frozen, tau_rel)?;
        if !cand.invariant {
            return Err(Error::NotInvariant(cand.max_violation));
        }
    }
    Ok(sys.reframed(&order, &vec![1.0; order.len()]))
}

/// Pairs `(outer, inner)` of indices into `manifolds` where the surviving
/// modes of `inner` are a proper subset of those of `outer`.
pub fn containments(manifolds: &[InvariantCandidate], n: usize) -> Vec<(usize, usize)> {
    let kept: Vec<BTreeSet<usize>> = manifolds.iter().map(|m| m.kept(n).into_iter().collect()).collect();
    let mut out = Vec::new();
    for (o, outer) in kept.iter().enumerate() {
        for (i, inner) in kept.iter().enumerate() {
            if o != i && inner.len() < outer.len() && inner.is_subset(outer) {
                out.push((o, i));
            }
        }
    }
    out
}
