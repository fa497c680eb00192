//! Structure of the quadratic coupling tensor.

pub mod invariance;
pub mod perm;
pub mod scaling;
pub mod squares;

pub use invariance::{check_invariance, containments, enumerate_invariant_candidates, extract_subsystem, InvariantCandidate};
pub use perm::{cycle_decomposition, CycleDecomposition, Permutation};
pub use scaling::{scaling_equivalence, ScalingFit};
pub use squares::{jan_check, square_map, JanRow, SquareMap, PRESENCE_TAU};

use crate::error::Result;
use crate::spectral::QuasiHarmonicSystem;

/// Everything the coupling analysis derives from one quasi-harmonic system.
#[derive(Debug, Clone)]
pub struct CouplingAnalysis {
    pub squares: SquareMap,
    pub cycles: CycleDecomposition,
    pub jan: Vec<JanRow>,
    pub candidates: Vec<InvariantCandidate>,
    /// Indices into `candidates` of the invariant ones.
    pub invariant: Vec<usize>,
    /// `(outer, inner)` indices into `invariant`.
    pub containments: Vec<(usize, usize)>,
}

impl CouplingAnalysis {
    pub fn jan_agrees(&self) -> bool {
        self.jan.iter().all(JanRow::agrees)
    }

    pub fn invariant_manifolds(&self) -> Vec<&InvariantCandidate> {
        self.invariant.iter().map(|&i| &self.candidates[i]).collect()
    }

    /// Mode counts of the invariant manifolds, ascending.
    pub fn invariant_mode_counts(&self, n: usize) -> Vec<usize> {
        let mut counts: Vec<usize> = self.invariant_manifolds().iter().map(|c| c.kept(n).len()).collect();
        counts.sort_unstable();
        counts
    }
}

pub fn analyze(sys: &QuasiHarmonicSystem, tau_rel: f64) -> Result<CouplingAnalysis> {
    let squares = square_map(sys, tau_rel)?;
    let cycles = squares.rho.cycles();
    let jan = jan_check(sys.p, &squares.rho);
    let candidates = enumerate_invariant_candidates(sys, &squares, tau_rel)?;
    let invariant: Vec<usize> = (0..candidates.len()).filter(|&i| candidates[i].invariant).collect();
    let inv: Vec<InvariantCandidate> = invariant.iter().map(|&i| candidates[i].clone()).collect();
    let containments = containments(&inv, sys.dim());
    Ok(CouplingAnalysis { squares, cycles, jan, candidates, invariant, containments })
}
