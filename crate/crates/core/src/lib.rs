//! Nonparametric detection of constrained utility maximization in a
//! black-box decision system, modelled as an adversary radar.
//!
//! The crate is organised around the data flow of an interrogation:
//!
//! - [`revealed`]: GARP, Afriat feasibility, utility reconstruction, and the
//!   nonlinear-budget generalization.
//! - [`tracker`]: Kalman recursion, Riccati and Lyapunov fixed points, and a
//!   small symmetric eigen solver.
//! - [`waveforms`]: closed-form observation-noise covariances per waveform.
//! - [`simulator`]: cognitive and non-cognitive responders and dataset
//!   generation.
//! - [`detector`]: statistical tests under noisy responses or probes.
//! - [`probe_opt`]: SPSA search over the probe matrix to minimize the
//!   Type-II error of the detector.

pub mod detector;
pub mod error;
pub mod probe_opt;
pub mod revealed;
pub mod seeds;
pub mod simulator;
pub mod tracker;
pub mod waveforms;

pub use error::{Error, Result};
