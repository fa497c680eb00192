//! Lowest-order forced response of a mode driven by the square of another.
//!
//! With the driver at `A cos(ω_r t)` the driven mode obeys
//! `ẍ + λ_d x = α c A² cos²(ω_r t)`, `c = C_{d,rr}`, whose solution from rest is
//! `x = K0 (1 - cos ω_d t) + K2 (cos 2ω_r t - cos ω_d t)`.

use crate::error::{Error, Result};
use crate::spectral::QuasiHarmonicSystem;

const RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderResponse {
    pub k0: f64,
    pub k2: f64,
    pub omega_driven: f64,
    pub omega_driver: f64,
}

impl FirstOrderResponse {
    pub fn eval(&self, t: f64) -> f64 {
        let cd = (self.omega_driven * t).cos();
        self.k0 * (1.0 - cd) + self.k2 * ((2.0 * self.omega_driver * t).cos() - cd)
    }

    /// Mean value `K0` about which the driven mode oscillates.
    pub fn offset(&self) -> f64 {
        self.k0
    }
}

pub fn first_order_response(
    sys: &QuasiHarmonicSystem,
    driven: usize,
    driver: usize,
    amplitude: f64,
) -> Result<FirstOrderResponse> {
    let n = sys.dim();
    if driven >= n || driver >= n || driven == driver {
        return Err(Error::InvalidParameter(format!("driven {driven} and driver {driver} must be distinct modes below {n}")));
    }
    let (ld, lr) = (sys.lambdas[driven], sys.lambdas[driver]);
    let detuning = ld - 4.0 * lr;
    if detuning.abs() <= RESONANCE_TOL * ld.abs().max(lr.abs()) {
        return Err(Error::Resonance);
    }
    let force = sys.alpha * sys.coupling.get(driven, driver, driver) * amplitude * amplitude;
    Ok(FirstOrderResponse {
        k0: force / (2.0 * ld),
        k2: force / (2.0 * detuning),
        omega_driven: ld.sqrt(),
        omega_driver: lr.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::quasi_harmonic;

    #[test]
    fn zero_amplitude_is_zero() {
        let (_, _, qh) = quasi_harmonic(3, 0.01, 1.0).unwrap();
        let r = first_order_response(&qh, 0, 1, 0.0).unwrap();
        for t in [0.0, 1.0, 77.0] {
            assert_eq!(r.eval(t), 0.0);
        }
    }

    #[test]
    fn satisfies_forced_equation() {
        let (_, _, qh) = quasi_harmonic(3, 0.01, 1.0).unwrap();
        let amp = 0.2;
        let r = first_order_response(&qh, 0, 1, amp).unwrap();
        assert_eq!(r.eval(0.0), 0.0);
        let h = 1e-3;
        let c = qh.coupling.get(0, 1, 1);
        for t in [0.5, 3.0, 40.0] {
            let xdd = (r.eval(t + h) - 2.0 * r.eval(t) + r.eval(t - h)) / (h * h);
            let rhs = c * (amp * (r.omega_driver * t).cos()).powi(2);
            assert!((xdd + qh.lambdas[0] * r.eval(t) - rhs).abs() < 1e-6);
        }
    }

    #[test]
    fn bad_modes() {
        let (_, _, qh) = quasi_harmonic(3, 0.01, 1.0).unwrap();
        assert!(first_order_response(&qh, 1, 1, 0.2).is_err());
        assert!(first_order_response(&qh, 0, 2, 0.2).is_err());
    }
}
