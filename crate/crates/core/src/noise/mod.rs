// SPDX-License-Identifier: Apache-2.0

//! Calibration-profile ingestion and the compiled NISQ noise model.
//!
//! Noise is placed after every gate (depolarizing on the gate's qubits plus
//! thermal relaxation over the gate duration, optionally on idle qubits
//! too) and as a classical confusion matrix at readout.

mod model;
mod profile;

pub use model::{
    apply_readout_confusion, depolarizing_parameter, GateClass, NoiseModel, NoiseStep,
    ReadoutConfusion,
};
pub use profile::{
    load_profile, load_profile_str, CalibrationProfile, PerQubit, PROFILE_SCHEMA_VERSION,
    REPRESENTATIVE_PROFILE,
};

use crate::circuit::EDR_QUBITS;

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error("cannot read profile {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse profile: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid profile field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl ProfileError {
    pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

/// Compiles a profile for the four-qubit error-disturbance register.
pub fn compile_noise(profile: &CalibrationProfile) -> Result<NoiseModel, ProfileError> {
    NoiseModel::compile(profile, EDR_QUBITS)
}
