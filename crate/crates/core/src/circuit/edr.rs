// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;
use std::ops::Range;

use super::{Circuit, CircuitError, GateOp, Measurement, OutcomeLabel, Role};

pub const EDR_QUBITS: usize = 4;

const ANGLE_SLACK: f64 = 1e-12;

/// Meter rotation angle θ for a measurement strength cos θ ∈ [0, 1].
pub fn angle_from_strength(strength: f64) -> Result<f64, CircuitError> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(CircuitError::OutOfRange {
            what: "measurement strength",
            value: strength,
            max: 1.0,
        });
    }
    Ok(strength.acos())
}

/// Measurement strength cos θ of a meter rotation angle.
pub fn strength_from_angle(angle: f64) -> f64 {
    angle.cos().clamp(0.0, 1.0)
}

fn check_angle(angle: f64) -> Result<f64, CircuitError> {
    if !(-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&angle) {
        return Err(CircuitError::OutOfRange {
            what: "rotation angle",
            value: angle,
            max: FRAC_PI_2,
        });
    }
    Ok(angle.clamp(0.0, FRAC_PI_2))
}

/// Blocks of the error-disturbance circuit, in program order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdrStage {
    Preparation,
    WeakProbeZ,
    WeakProbeX,
    MeasurementApparatus,
    PostX,
}

impl EdrStage {
    pub const ALL: [EdrStage; 5] = [
        EdrStage::Preparation,
        EdrStage::WeakProbeZ,
        EdrStage::WeakProbeX,
        EdrStage::MeasurementApparatus,
        EdrStage::PostX,
    ];

    /// Indices into [`Circuit::ops`] of a circuit from [`build_edr_circuit`].
    pub fn op_range(self) -> Range<usize> {
        match self {
            EdrStage::Preparation => 0..1,
            EdrStage::WeakProbeZ => 1..3,
            EdrStage::WeakProbeX => 3..7,
            EdrStage::MeasurementApparatus => 7..9,
            EdrStage::PostX => 9..10,
        }
    }
}

/// Builds the four-qubit weak-probe circuit.
///
/// `theta_w` is the rotation angle of both weak probes and `theta` that of
/// the main meter; strength is cos of the angle, so π/2 means no
/// measurement and 0 a projective one.
pub fn build_edr_circuit(theta_w: f64, theta: f64) -> Result<Circuit, CircuitError> {
    let theta_w = check_angle(theta_w)?;
    let theta = check_angle(theta)?;
    let s = Role::System.index();
    let pz = Role::ProbeZ.index();
    let px = Role::ProbeX.index();
    let m = Role::Meter.index();

    let ops = vec![
        // |0⟩ → |R⟩ = (|0⟩ − i|1⟩)/√2
        GateOp::Rx { qubit: s, angle: FRAC_PI_2 },
        // weak Z probe
        GateOp::Ry { qubit: pz, angle: theta_w },
        GateOp::Cnot { control: s, target: pz },
        // weak X probe: Z probe conjugated by H on the system
        GateOp::H { qubit: s },
        GateOp::Ry { qubit: px, angle: theta_w },
        GateOp::Cnot { control: s, target: px },
        GateOp::H { qubit: s },
        // main measurement
        GateOp::Ry { qubit: m, angle: theta },
        GateOp::Cnot { control: s, target: m },
        // X readout of the system
        GateOp::H { qubit: s },
    ];
    let measurements = vec![
        Measurement { qubit: pz, label: OutcomeLabel::Zi },
        Measurement { qubit: px, label: OutcomeLabel::Xi },
        Measurement { qubit: m, label: OutcomeLabel::Zf },
        Measurement { qubit: s, label: OutcomeLabel::Xf },
    ];
    Circuit::new(EDR_QUBITS, ops, measurements)
}

/// [`build_edr_circuit`] parameterized by measurement strengths.
pub fn build_edr_circuit_from_strengths(
    probe_strength: f64,
    strength: f64,
) -> Result<Circuit, CircuitError> {
    build_edr_circuit(angle_from_strength(probe_strength)?, angle_from_strength(strength)?)
}
