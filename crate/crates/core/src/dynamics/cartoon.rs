//! Two model Hamiltonians with widely separated frequencies.
//!
//! 1: `ẍ + ω₁²x = xy`, `ÿ + ω₂²y = x²/2`.
//! 2: `ẍ + ω₁²x = 0.2yz`, `ÿ + ω₂²y = 0.2xz + 0.25(z² + 2yz)`,
//!    `z̈ + ω₃²z = 0.2xy + 0.25(y² + 2yz)`.

use crate::dynamics::system::{Coordinates, Dynamics};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CartoonSystem {
    pub id: u8,
    pub omegas: Vec<f64>,
}

pub fn cartoon_system(id: u8, omegas: &[f64]) -> Result<CartoonSystem> {
    let dim = match id {
        1 => 2,
        2 => 3,
        _ => return Err(Error::InvalidParameter(format!("unknown cartoon {id}, expected 1 or 2"))),
    };
    if omegas.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: omegas.len() });
    }
    Ok(CartoonSystem { id, omegas: omegas.to_vec() })
}

impl CartoonSystem {
    /// Squared frequencies.
    pub fn lambdas(&self) -> Vec<f64> {
        self.omegas.iter().map(|w| w * w).collect()
    }

    fn cubic_potential(&self, x: &[f64]) -> f64 {
        match self.id {
            1 => -0.5 * x[0] * x[0] * x[1],
            _ => {
                let (a, y, z) = (x[0], x[1], x[2]);
                -0.2 * a * y * z - 0.25 * (y * z * z + y * y * z)
            }
        }
    }
}

impl Dynamics for CartoonSystem {
    fn dim(&self) -> usize {
        self.omegas.len()
    }

    fn accel(&self, x: &[f64], out: &mut [f64]) {
        match self.id {
            1 => {
                out[0] = x[0] * x[1];
                out[1] = 0.5 * x[0] * x[0];
            }
            _ => {
                let (a, y, z) = (x[0], x[1], x[2]);
                out[0] = 0.2 * y * z;
                out[1] = 0.2 * a * z + 0.25 * (z * z + 2.0 * y * z);
                out[2] = 0.2 * a * y + 0.25 * (y * y + 2.0 * y * z);
            }
        }
        for i in 0..out.len() {
            out[i] -= self.omegas[i] * self.omegas[i] * x[i];
        }
    }

    fn energy(&self, x: &[f64], v: &[f64]) -> Option<f64> {
        let harmonic: f64 = (0..x.len()).map(|i| 0.5 * (v[i] * v[i] + self.omegas[i].powi(2) * x[i] * x[i])).sum();
        Some(harmonic + self.cubic_potential(x))
    }

    fn coordinates(&self) -> Coordinates {
        Coordinates::Oscillator
    }

    fn coordinate_name(&self, i: usize) -> String {
        ["x", "y", "z"][i].to_string()
    }

    fn velocity_name(&self, i: usize) -> String {
        ["vx", "vy", "vz"][i].to_string()
    }
}
