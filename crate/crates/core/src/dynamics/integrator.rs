//! Adaptive explicit Runge–Kutta integration with the Prince–Dormand
//! 8(7) pair (13 stages). The 8th-order solution is propagated; the
//! difference to the embedded 7th-order solution drives a PI step-size
//! controller. Output is sampled by landing steps exactly on the sample
//! grid, so no interpolation is involved.

use crate::dynamics::system::{Coordinates, Dynamics};
use crate::error::{check_dim, Error, Result};

/// Trajectories are stopped once `max |y|` exceeds this value.
pub const DIVERGENCE_NORM: f64 = 1e8;
const SAFETY: f64 = 0.9;
const MAX_GROWTH: f64 = 5.0;
const MIN_SHRINK: f64 = 0.2;
const PI_ALPHA: f64 = 0.7 / 8.0;
const PI_BETA: f64 = 0.4 / 8.0;

const STAGES: usize = 13;

// Nodes; every system here is autonomous, so only the consistency test reads them.
#[allow(dead_code)]
const C: [f64; STAGES] = [
    0.0,
    1.0 / 18.0,
    1.0 / 12.0,
    1.0 / 8.0,
    5.0 / 16.0,
    3.0 / 8.0,
    59.0 / 400.0,
    93.0 / 200.0,
    5490023248.0 / 9719169821.0,
    13.0 / 20.0,
    1201146811.0 / 1299019798.0,
    1.0,
    1.0,
];

// Nonzero couplings only; columns 1 and 2 vanish beyond stage 4.
const A: [[f64; 12]; STAGES] = [
    [0.0; 12],
    [1.0 / 18.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 48.0, 1.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 32.0, 0.0, 3.0 / 32.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 16.0, 0.0, -75.0 / 64.0, 75.0 / 64.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 80.0, 0.0, 0.0, 3.0 / 16.0, 3.0 / 20.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        29443841.0 / 614563906.0,
        0.0,
        0.0,
        77736538.0 / 692538347.0,
        -28693883.0 / 1125000000.0,
        23124283.0 / 1800000000.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        16016141.0 / 946692911.0,
        0.0,
        0.0,
        61564180.0 / 158732637.0,
        22789713.0 / 633445777.0,
        545815736.0 / 2771057229.0,
        -180193667.0 / 1043307555.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        39632708.0 / 573591083.0,
        0.0,
        0.0,
        -433636366.0 / 683701615.0,
        -421739975.0 / 2616292301.0,
        100302831.0 / 723423059.0,
        790204164.0 / 839813087.0,
        800635310.0 / 3783071287.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        246121993.0 / 1340847787.0,
        0.0,
        0.0,
        -37695042795.0 / 15268766246.0,
        -309121744.0 / 1061227803.0,
        -12992083.0 / 490766935.0,
        6005943493.0 / 2108947869.0,
        393006217.0 / 1396673457.0,
        123872331.0 / 1001029789.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -1028468189.0 / 846180014.0,
        0.0,
        0.0,
        8478235783.0 / 508512852.0,
        1311729495.0 / 1432422823.0,
        -10304129995.0 / 1701304382.0,
        -48777925059.0 / 3047939560.0,
        15336726248.0 / 1032824649.0,
        -45442868181.0 / 3398467696.0,
        3065993473.0 / 597172653.0,
        0.0,
        0.0,
    ],
    [
        185892177.0 / 718116043.0,
        0.0,
        0.0,
        -3185094517.0 / 667107341.0,
        -477755414.0 / 1098053517.0,
        -703635378.0 / 230739211.0,
        5731566787.0 / 1027545527.0,
        5232866602.0 / 850066563.0,
        -4093664535.0 / 808688257.0,
        3962137247.0 / 1805957418.0,
        65686358.0 / 487910083.0,
        0.0,
    ],
    [
        403863854.0 / 491063109.0,
        0.0,
        0.0,
        -5068492393.0 / 434740067.0,
        -411421997.0 / 543043805.0,
        652783627.0 / 914296604.0,
        11173962825.0 / 925320556.0,
        -13158990841.0 / 6184727034.0,
        3936647629.0 / 1978049680.0,
        -160528059.0 / 685178525.0,
        248638103.0 / 1413531060.0,
        0.0,
    ],
];

/// 8th-order weights.
const B: [f64; STAGES] = [
    14005451.0 / 335480064.0,
    0.0,
    0.0,
    0.0,
    0.0,
    -59238493.0 / 1068277825.0,
    181606767.0 / 758867731.0,
    561292985.0 / 797845732.0,
    -1041891430.0 / 1371343529.0,
    760417239.0 / 1151165299.0,
    118820643.0 / 751138087.0,
    -528747749.0 / 2220607170.0,
    1.0 / 4.0,
];

/// Embedded 7th-order weights.
const B_HAT: [f64; STAGES] = [
    13451932.0 / 455176623.0,
    0.0,
    0.0,
    0.0,
    0.0,
    -808719846.0 / 976000145.0,
    1757004468.0 / 5645159321.0,
    656045339.0 / 265891186.0,
    -3867574721.0 / 1518517206.0,
    465885868.0 / 322736535.0,
    53011238.0 / 667516719.0,
    2.0 / 45.0,
    0.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub t_end: f64,
    /// Output stride.
    pub sample_dt: f64,
    /// Hard cap on the number of accepted plus rejected steps.
    pub max_steps: usize,
}

impl IntegratorConfig {
    pub fn new(t_end: f64) -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, t_end, sample_dt: 1.0, max_steps: 50_000_000 }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }

    pub fn with_sample_dt(mut self, dt: f64) -> Self {
        self.sample_dt = dt;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t <= 1e-4;
        if !tol_ok(self.abs_tol) || !tol_ok(self.rel_tol) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must lie in (0, 1e-4], got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if !(self.sample_dt > 0.0) || !self.sample_dt.is_finite() {
            return Err(Error::InvalidParameter(format!("sample_dt must be positive, got {}", self.sample_dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidParameter(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        Ok(())
    }

    /// Sample times `0, dt, 2dt, …` up to and including `t_end`.
    pub fn sample_times(&self) -> Vec<f64> {
        let count = (self.t_end / self.sample_dt * (1.0 + 1e-12)).floor() as usize;
        let mut times: Vec<f64> = (0..=count).map(|k| k as f64 * self.sample_dt).collect();
        let last = *times.last().unwrap_or(&0.0);
        if self.t_end - last > 1e-12 * self.t_end.max(1.0) {
            times.push(self.t_end);
        } else if let Some(l) = times.last_mut() {
            *l = l.min(self.t_end);
        }
        times
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    /// State norm exceeded [`DIVERGENCE_NORM`] (or became non-finite).
    Diverged { t: f64, norm: f64 },
    StepUnderflow { t: f64, h: f64 },
    MaxSteps { t: f64 },
}

impl Termination {
    pub fn is_completed(&self) -> bool {
        matches!(self, Termination::Completed)
    }

    pub fn describe(&self) -> String {
        match *self {
            Termination::Completed => "completed".into(),
            Termination::Diverged { t, norm } => format!("diverged at t = {t} (state norm {norm:e})"),
            Termination::StepUnderflow { t, h } => format!("step-size underflow at t = {t} (h = {h:e})"),
            Termination::MaxSteps { t } => format!("step limit reached at t = {t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Sampled solution; each state holds positions followed by velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub coordinates: Coordinates,
    pub dim: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Samples come from interpolation rather than step endpoints.
    pub dense: bool,
    pub termination: Termination,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn position(&self, sample: usize) -> &[f64] {
        &self.states[sample][..self.dim]
    }

    pub fn velocity(&self, sample: usize) -> &[f64] {
        &self.states[sample][self.dim..]
    }

    /// Time series of coordinate `i` (0-based).
    pub fn series(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Right-hand side of the first-order form `y = (x, v)`.
fn first_order(sys: &dyn Dynamics, y: &[f64], dy: &mut [f64]) {
    let n = y.len() / 2;
    dy[..n].copy_from_slice(&y[n..]);
    sys.accel(&y[..n], &mut dy[n..]);
}

struct Stepper {
    k: Vec<Vec<f64>>,
    stage: Vec<f64>,
}

impl Stepper {
    fn new(len: usize) -> Self {
        Self { k: vec![vec![0.0; len]; STAGES], stage: vec![0.0; len] }
    }

    /// One step of size `h`; writes the 8th-order solution to `y_new` and
    /// the embedded error estimate to `err`.
    fn step(&mut self, sys: &dyn Dynamics, y: &[f64], h: f64, y_new: &mut [f64], err: &mut [f64]) {
        let len = y.len();
        first_order(sys, y, &mut self.k[0]);
        for s in 1..STAGES {
            for i in 0..len {
                let mut acc = 0.0;
                for (r, a) in A[s][..s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += a * self.k[r][i];
                    }
                }
                self.stage[i] = y[i] + h * acc;
            }
            let (done, rest) = self.k.split_at_mut(s);
            let _ = done;
            first_order(sys, &self.stage, &mut rest[0]);
        }
        for i in 0..len {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for s in 0..STAGES {
                hi += B[s] * self.k[s][i];
                lo += B_HAT[s] * self.k[s][i];
            }
            y_new[i] = y[i] + h * hi;
            err[i] = h * (hi - lo);
        }
    }
}

fn error_norm(y: &[f64], y_new: &[f64], err: &[f64], cfg: &IntegratorConfig) -> f64 {
    // componentwise |e_i| <= max(atol, rtol · max(|y_i|, |y_new_i|)), max-norm
    y.iter()
        .zip(y_new)
        .zip(err)
        .map(|((a, b), e)| (e / cfg.abs_tol.max(cfg.rel_tol * a.abs().max(b.abs()))).abs())
        .fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

fn max_abs(y: &[f64]) -> f64 {
    y.iter().fold(0.0f64, |m, v| if v.is_finite() { m.max(v.abs()) } else { f64::INFINITY })
}

/// Initial step guess from the size of the state and its derivative.
fn initial_step(sys: &dyn Dynamics, y: &[f64], cfg: &IntegratorConfig) -> f64 {
    let mut dy = vec![0.0; y.len()];
    first_order(sys, y, &mut dy);
    let scale = |i: usize| cfg.abs_tol + cfg.rel_tol * y[i].abs();
    let d0 = (0..y.len()).map(|i| (y[i] / scale(i)).powi(2)).sum::<f64>().sqrt();
    let d1 = (0..y.len()).map(|i| (dy[i] / scale(i)).powi(2)).sum::<f64>().sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(cfg.sample_dt).max(1e-10)
}

pub fn integrate(sys: &dyn Dynamics, x0: &[f64], v0: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let n = sys.dim();
    check_dim(n, x0.len())?;
    check_dim(n, v0.len())?;

    let mut y: Vec<f64> = x0.iter().chain(v0).copied().collect();
    let len = y.len();
    let mut y_new = vec![0.0; len];
    let mut err = vec![0.0; len];
    let mut stepper = Stepper::new(len);
    let mut stats = StepStats::default();

    let samples = cfg.sample_times();
    let mut times = vec![0.0];
    let mut states = vec![y.clone()];
    let mut t = 0.0;
    let mut h = initial_step(sys, &y, cfg);
    let mut err_old: f64 = 1e-4;
    let mut termination = Termination::Completed;

    'outer: for &target in &samples[1..] {
        while t < target {
            if stats.accepted + stats.rejected >= cfg.max_steps {
                termination = Termination::MaxSteps { t };
                break 'outer;
            }
            let remaining = target - t;
            let landing = h >= remaining * (1.0 - 1e-12);
            let h_try = if landing { remaining } else { h };
            if h_try < 16.0 * f64::EPSILON * t.abs().max(1.0) {
                termination = Termination::StepUnderflow { t, h: h_try };
                break 'outer;
            }
            stepper.step(sys, &y, h_try, &mut y_new, &mut err);
            stats.rhs_evals += STAGES;
            let e = error_norm(&y, &y_new, &err, cfg);
            if e.is_finite() && e <= 1.0 {
                stats.accepted += 1;
                t = if landing { target } else { t + h_try };
                std::mem::swap(&mut y, &mut y_new);
                let e = e.max(1e-10);
                let factor = (SAFETY * e.powf(-PI_ALPHA) * err_old.powf(PI_BETA)).clamp(MIN_SHRINK, MAX_GROWTH);
                err_old = e;
                let proposed = h_try * factor;
                h = if landing { proposed.max(h) } else { proposed };
                let norm = max_abs(&y);
                if norm > DIVERGENCE_NORM {
                    termination = Termination::Diverged { t, norm };
                    times.push(t);
                    states.push(y.clone());
                    break 'outer;
                }
            } else {
                stats.rejected += 1;
                let factor = if e.is_finite() { (SAFETY * e.powf(-1.0 / 8.0)).max(MIN_SHRINK) } else { MIN_SHRINK };
                h = h_try * factor.min(1.0);
            }
        }
        times.push(t);
        states.push(y.clone());
    }

    Ok(Trajectory { coordinates: sys.coordinates(), dim: n, times, states, dense: false, termination, stats })
}

/// `steps` fixed steps of size `h` with the 8th-order formula.
pub fn integrate_fixed(sys: &dyn Dynamics, x0: &[f64], v0: &[f64], h: f64, steps: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = sys.dim();
    check_dim(n, x0.len())?;
    check_dim(n, v0.len())?;
    let mut y: Vec<f64> = x0.iter().chain(v0).copied().collect();
    let mut y_new = vec![0.0; y.len()];
    let mut err = vec![0.0; y.len()];
    let mut stepper = Stepper::new(y.len());
    for _ in 0..steps {
        stepper.step(sys, &y, h, &mut y_new, &mut err);
        std::mem::swap(&mut y, &mut y_new);
    }
    let v = y.split_off(n);
    Ok((y, v))
}
