//! Traveling fronts of damped bistable wave equations
//! `tau u_tt + g(u, tau) u_t = u_xx + f(u)`: front speed by shooting, profile
//! reconstruction, essential spectrum and spectral gap, Evans function and
//! winding numbers, resolvent estimates for stationary fronts and a
//! finite-difference time stepper.

pub mod config;
pub mod error;
pub mod export;
pub mod evans;
pub mod interp;
pub mod linalg;
pub mod model;
pub mod ode;
pub mod profile;
pub mod quad;
pub mod resolvent;
pub mod spectrum;
pub mod timestepper;

pub use error::{Error, Result};
pub use model::{Damping, ModelSpec, Reaction, ValidatedModel};
