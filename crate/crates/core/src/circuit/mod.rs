// SPDX-License-Identifier: Apache-2.0

//! Gate-level circuit representation, the error-disturbance circuit
//! builder, coupling-map checks and OpenQASM export.

mod coupling;
mod edr;
mod exec;
mod qasm;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::noise::{GateClass, ProfileError};
use crate::qsim::{gates, ComplexMatrix, QsimError};

pub use coupling::{validate_against_coupling, validate_with_layout, CouplingMap, Layout, Violation};
pub use edr::{
    angle_from_strength, build_edr_circuit, build_edr_circuit_from_strengths,
    strength_from_angle, EdrStage, EDR_QUBITS,
};
pub use qasm::export_qasm;

#[derive(Debug, thiserror::Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("CNOT control and target are both qubit {0}")]
    SameControlTarget(usize),
    #[error("rotation angle {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("outcome label {0} is used twice")]
    DuplicateLabel(OutcomeLabel),
    #[error("{what} {value} is outside [0, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        max: f64,
    },
    #[error("noise model covers {model} qubits but the circuit has {circuit}")]
    NoiseSize { model: usize, circuit: usize },
    #[error(transparent)]
    Simulation(#[from] QsimError),
    #[error(transparent)]
    Noise(#[from] ProfileError),
}

/// Qubit roles of the error-disturbance register, in register order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    System = 0,
    ProbeZ = 1,
    ProbeX = 2,
    Meter = 3,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::System, Role::ProbeZ, Role::ProbeX, Role::Meter];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Name of a ±1-valued measurement outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeLabel {
    /// Weak Z probe.
    #[serde(rename = "z_i")]
    Zi,
    /// Weak X probe.
    #[serde(rename = "x_i")]
    Xi,
    /// Main measurement meter.
    #[serde(rename = "z_f")]
    Zf,
    /// Post-measurement of X on the system.
    #[serde(rename = "x_f")]
    Xf,
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeLabel::Zi => "z_i",
            OutcomeLabel::Xi => "x_i",
            OutcomeLabel::Zf => "z_f",
            OutcomeLabel::Xf => "x_f",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp {
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    H { qubit: usize },
    X { qubit: usize },
    Cnot { control: usize, target: usize },
}

impl GateOp {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::Rx { qubit, .. }
            | GateOp::Ry { qubit, .. }
            | GateOp::H { qubit }
            | GateOp::X { qubit } => vec![qubit],
            GateOp::Cnot { control, target } => vec![control, target],
        }
    }

    /// Unitary on [`GateOp::qubits`], first listed qubit major.
    pub fn matrix(&self) -> ComplexMatrix {
        match *self {
            GateOp::Rx { angle, .. } => gates::rx(angle),
            GateOp::Ry { angle, .. } => gates::ry(angle),
            GateOp::H { .. } => gates::hadamard(),
            GateOp::X { .. } => gates::pauli_x(),
            GateOp::Cnot { .. } => gates::cnot(),
        }
    }

    pub fn class(&self) -> GateClass {
        match self {
            GateOp::Cnot { .. } => GateClass::Cnot,
            _ => GateClass::SingleQubit,
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        if let Some(&qubit) = self.qubits().iter().find(|&&q| q >= num_qubits) {
            return Err(CircuitError::QubitOutOfRange { qubit, num_qubits });
        }
        match *self {
            GateOp::Rx { angle, .. } | GateOp::Ry { angle, .. } if !angle.is_finite() => {
                Err(CircuitError::NonFiniteAngle(angle))
            }
            GateOp::Cnot { control, target } if control == target => {
                Err(CircuitError::SameControlTarget(control))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub qubit: usize,
    pub label: OutcomeLabel,
}

/// Ordered gate program with terminal computational-basis measurements.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
    measurements: Vec<Measurement>,
}

impl Circuit {
    pub fn new(
        num_qubits: usize,
        ops: Vec<GateOp>,
        measurements: Vec<Measurement>,
    ) -> Result<Self, CircuitError> {
        for op in &ops {
            op.validate(num_qubits)?;
        }
        for (i, m) in measurements.iter().enumerate() {
            if m.qubit >= num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: m.qubit,
                    num_qubits,
                });
            }
            if measurements[..i].iter().any(|o| o.label == m.label) {
                return Err(CircuitError::DuplicateLabel(m.label));
            }
        }
        Ok(Self {
            num_qubits,
            ops,
            measurements,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn measured_qubits(&self) -> Vec<usize> {
        self.measurements.iter().map(|m| m.qubit).collect()
    }
}
