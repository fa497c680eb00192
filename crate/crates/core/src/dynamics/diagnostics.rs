use crate::chain::FullChainSystem;
use crate::dynamics::integrator::{integrate, IntegratorConfig, Trajectory};
use crate::dynamics::system::{Coordinates, Dynamics};
use crate::error::{check_dim, Error, Result};
use crate::spectral::QuasiHarmonicSystem;

/// Per-mode actions `E_j = (v_j² + λ_j x_j²) / 2` along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeActionSeries {
    pub times: Vec<f64>,
    /// `actions[sample][mode]`.
    pub actions: Vec<Vec<f64>>,
}

impl ModeActionSeries {
    pub fn mode(&self, j: usize) -> Vec<f64> {
        self.actions.iter().map(|a| a[j]).collect()
    }

    pub fn dim(&self) -> usize {
        self.actions.first().map_or(0, Vec::len)
    }
}

/// Actions for arbitrary squared frequencies; used for cartoons as well.
pub fn actions_with(lambdas: &[f64], tr: &Trajectory) -> Result<ModeActionSeries> {
    check_dim(lambdas.len(), tr.dim)?;
    let actions = tr
        .states
        .iter()
        .map(|s| {
            let (x, v) = s.split_at(tr.dim);
            lambdas.iter().enumerate().map(|(j, l)| 0.5 * (v[j] * v[j] + l * x[j] * x[j])).collect()
        })
        .collect();
    Ok(ModeActionSeries { times: tr.times.clone(), actions })
}

pub fn mode_actions(sys: &QuasiHarmonicSystem, tr: &Trajectory) -> Result<ModeActionSeries> {
    if tr.coordinates != Coordinates::Modal {
        return Err(Error::InvalidParameter("mode actions need a trajectory in modal coordinates".into()));
    }
    actions_with(&sys.lambdas, tr)
}

/// Energy at every sample, or `None` when the system has no energy function.
pub fn energy_series(sys: &dyn Dynamics, tr: &Trajectory) -> Option<Vec<f64>> {
    (0..tr.len()).map(|s| sys.energy(tr.position(s), tr.velocity(s))).collect()
}

/// `max_t |E(t) - E(0)| / max(|E(0)|, 1e-12)` over the recorded samples.
pub fn energy_drift(sys: &dyn Dynamics, tr: &Trajectory) -> Option<f64> {
    let e = energy_series(sys, tr)?;
    Some(relative_drift(&e))
}

pub fn momentum_drift(sys: &FullChainSystem, tr: &Trajectory) -> f64 {
    let m: Vec<f64> = (0..tr.len()).map(|s| sys.momentum(tr.velocity(s))).collect();
    relative_drift(&m)
}

fn relative_drift(series: &[f64]) -> f64 {
    let Some(&e0) = series.first() else { return 0.0 };
    let scale = e0.abs().max(1e-12);
    series.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / scale
}

/// Integrates forward to `cfg.t_end`, negates the velocities, integrates the
/// same time again and returns the max-norm distance to the (velocity
/// negated) start.
pub fn time_reversal_error(sys: &dyn Dynamics, x0: &[f64], v0: &[f64], cfg: &IntegratorConfig) -> Result<f64> {
    let cfg = IntegratorConfig { sample_dt: cfg.t_end.max(f64::MIN_POSITIVE), ..*cfg };
    let fwd = integrate(sys, x0, v0, &cfg)?;
    if !fwd.termination.is_completed() {
        return Err(Error::InvalidParameter(format!("forward run did not complete: {}", fwd.termination.describe())));
    }
    let last = fwd.len() - 1;
    let vback: Vec<f64> = fwd.velocity(last).iter().map(|v| -v).collect();
    let back = integrate(sys, fwd.position(last), &vback, &cfg)?;
    let end = back.len() - 1;
    let dx = back.position(end).iter().zip(x0).map(|(a, b)| (a - b).abs());
    let dv = back.velocity(end).iter().zip(v0).map(|(a, b)| (a + b).abs());
    Ok(dx.chain(dv).fold(0.0, f64::max))
}
