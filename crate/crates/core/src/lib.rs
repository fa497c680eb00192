//! Alternating-mass periodic FPU α-chains.
//!
//! The crate builds the periodic chain with masses alternating between `1`
//! and `1/a`, reduces it to the symmetric `(p-1)`-degree-of-freedom system
//! for `N = 2p` particles, transforms that system to quasi-harmonic normal
//! mode form and analyses the quadratic coupling tensor (forcing squares,
//! the pair permutation and its cycles, invariant submanifolds). The
//! [`dynamics`] module integrates any of these systems with an adaptive
//! Runge–Kutta 8(7) pair.

pub mod chain;
pub mod cli;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod reduction;
pub mod scenario;
pub mod spectral;
pub mod sweep;
pub mod tensor;

pub use chain::{build_chain, ChainParams, FullChainSystem, FullState};
pub use error::{Error, Result};
pub use reduction::{build_reduced, ReducedState, ReducedSystem};
pub use spectral::{eigendecompose, pair_eigenvalues, ModalBasis, ModeKind, ModeLabel, QuasiHarmonicSystem};
pub use tensor::QuadTensor;

/// FPU potential `V(z) = z²/2 + αz³/3 + βz⁴/4`.
#[inline]
pub fn potential(z: f64, alpha: f64, beta: f64) -> f64 {
    let z2 = z * z;
    0.5 * z2 + alpha * z2 * z / 3.0 + beta * z2 * z2 / 4.0
}

/// Derivative `V'(z) = z + αz² + βz³`.
#[inline]
pub fn potential_deriv(z: f64, alpha: f64, beta: f64) -> f64 {
    z + alpha * z * z + beta * z * z * z
}
