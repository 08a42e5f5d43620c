// SPDX-License-Identifier: Apache-2.0

use std::ops::Range;

use crate::noise::{apply_readout_confusion, NoiseModel};
use crate::qsim::DensityMatrix;

use super::{Circuit, CircuitError};

impl Circuit {
    fn check_noise(&self, noise: Option<&NoiseModel>) -> Result<(), CircuitError> {
        match noise {
            Some(model) if model.num_qubits() != self.num_qubits => Err(CircuitError::NoiseSize {
                model: model.num_qubits(),
                circuit: self.num_qubits,
            }),
            _ => Ok(()),
        }
    }

    /// Evolves `state` through `ops[range]`, inserting channels from `noise`
    /// after each gate.
    pub fn evolve(
        &self,
        mut state: DensityMatrix,
        range: Range<usize>,
        noise: Option<&NoiseModel>,
    ) -> Result<DensityMatrix, CircuitError> {
        self.check_noise(noise)?;
        for op in &self.ops[range] {
            let qubits = op.qubits();
            state = state.apply_unitary(&op.matrix(), &qubits)?;
            if let Some(model) = noise {
                for step in model.after_gate(op.class(), &qubits) {
                    state = state.apply_channel(step.channel, &step.qubits)?;
                }
            }
        }
        Ok(state)
    }

    /// Final pre-measurement state from |0…0⟩.
    pub fn simulate(&self, noise: Option<&NoiseModel>) -> Result<DensityMatrix, CircuitError> {
        let initial = DensityMatrix::zero_state(self.num_qubits)?;
        self.evolve(initial, 0..self.ops.len(), noise)
    }

    /// Exact distribution over measurement outcomes, indexed with the first
    /// measurement as the most significant bit (bit 0 ↔ outcome +1).
    pub fn outcome_probabilities(&self, noise: Option<&NoiseModel>) -> Result<Vec<f64>, CircuitError> {
        let mut state = self.simulate(noise)?;
        let measured = self.measured_qubits();
        if let Some(model) = noise {
            for step in model.before_readout(&measured) {
                state = state.apply_channel(step.channel, &step.qubits)?;
            }
        }
        let probs = state.measure_probabilities(&measured)?;
        match noise {
            Some(model) => Ok(apply_readout_confusion(&probs, model, &measured)?),
            None => Ok(probs),
        }
    }
}
