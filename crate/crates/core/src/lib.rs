// SPDX-License-Identifier: Apache-2.0

//! Exact and shot-sampled simulation of the weak-probe test of
//! error-disturbance uncertainty relations on a four-qubit register.

pub mod circuit;
pub mod edr;
pub mod estimators;
mod error;
pub mod meas_model;
pub mod noise;
pub mod qsim;
pub mod selfcheck;
pub mod sweep;

pub use error::{Error, Result};
