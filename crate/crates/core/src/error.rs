// SPDX-License-Identifier: Apache-2.0

use crate::circuit::CircuitError;
use crate::edr::EdrError;
use crate::noise::ProfileError;
use crate::qsim::QsimError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Simulation(#[from] QsimError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Relation(#[from] EdrError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
