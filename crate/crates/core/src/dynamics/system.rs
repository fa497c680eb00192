use crate::chain::FullChainSystem;
use crate::reduction::ReducedSystem;
use crate::spectral::QuasiHarmonicSystem;

/// Which coordinates a system is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinates {
    /// Particle displacements `q`.
    Particle,
    /// Normal-mode amplitudes `x`.
    Modal,
    /// Named oscillators of a cartoon system.
    Oscillator,
}

/// A second-order autonomous system `ẍ = f(x)`.
pub trait Dynamics: Sync {
    fn dim(&self) -> usize;

    fn accel(&self, x: &[f64], out: &mut [f64]);

    /// Conserved energy, when the system has one.
    fn energy(&self, _x: &[f64], _v: &[f64]) -> Option<f64> {
        None
    }

    fn coordinates(&self) -> Coordinates;

    /// Column name of coordinate `i` (0-based); velocities use `v` + the suffix.
    fn coordinate_name(&self, i: usize) -> String {
        match self.coordinates() {
            Coordinates::Particle => format!("q{}", i + 1),
            Coordinates::Modal | Coordinates::Oscillator => format!("x{}", i + 1),
        }
    }

    fn velocity_name(&self, i: usize) -> String {
        format!("v{}", i + 1)
    }
}

impl Dynamics for FullChainSystem {
    fn dim(&self) -> usize {
        self.len()
    }

    fn accel(&self, x: &[f64], out: &mut [f64]) {
        self.accel_into(x, out);
    }

    fn energy(&self, x: &[f64], v: &[f64]) -> Option<f64> {
        Some(self.kinetic_energy(v) + self.potential_energy(x))
    }

    fn coordinates(&self) -> Coordinates {
        Coordinates::Particle
    }
}

impl Dynamics for ReducedSystem {
    fn dim(&self) -> usize {
        ReducedSystem::dim(self)
    }

    fn accel(&self, x: &[f64], out: &mut [f64]) {
        self.accel_into(x, out);
    }

    fn energy(&self, x: &[f64], v: &[f64]) -> Option<f64> {
        Some(self.kinetic_energy(v) + self.potential_energy(x))
    }

    fn coordinates(&self) -> Coordinates {
        Coordinates::Particle
    }
}

impl Dynamics for QuasiHarmonicSystem {
    fn dim(&self) -> usize {
        QuasiHarmonicSystem::dim(self)
    }

    fn accel(&self, x: &[f64], out: &mut [f64]) {
        self.rhs_into(x, self.alpha, out);
    }

    fn energy(&self, x: &[f64], v: &[f64]) -> Option<f64> {
        QuasiHarmonicSystem::energy(self, x, v)
    }

    fn coordinates(&self) -> Coordinates {
        Coordinates::Modal
    }
}
