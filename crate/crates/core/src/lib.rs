//! Weak-link production, capability accumulation dynamics and relatedness.
//!
//! * [`model`]: production function, complementarity terms, derivatives.
//! * [`dynamics`]: growth law, Riccati coefficients, regimes, steady states.
//! * [`kinematics`]: closed-form trajectories and the RK4 reference integrator.
//! * [`relatedness`]: capability complementarity and growth coupling.
//! * [`experiments`]: reproducible data tables for figures and sweeps.
//! * [`io`] and [`config`]: CSV matrices, trajectories, charts, run configs.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod kinematics;
pub mod model;
pub mod relatedness;

pub use error::{Axis, Error, Result};
pub use model::{CapabilityRequirements, Endowments, ModelParams};
