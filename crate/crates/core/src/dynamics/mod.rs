//! Time integration and the diagnostics built on it.

pub mod cartoon;
pub mod diagnostics;
pub mod equilibria;
pub mod integrator;
pub mod response;
pub mod system;

pub use cartoon::{cartoon_system, CartoonSystem};
pub use diagnostics::{energy_drift, energy_series, mode_actions, momentum_drift, time_reversal_error, ModeActionSeries};
pub use equilibria::{classify_equilibrium, find_equilibria, EquilibriumReport, StaticSystem};
pub use integrator::{integrate, integrate_fixed, IntegratorConfig, StepStats, Termination, Trajectory, DIVERGENCE_NORM};
pub use response::{first_order_response, FirstOrderResponse};
pub use system::{Coordinates, Dynamics};
