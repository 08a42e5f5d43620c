// SPDX-License-Identifier: Apache-2.0

use crate::qsim::{KrausChannel, EQ_TOL};

use super::{CalibrationProfile, ProfileError};

/// Gate-error to depolarizing-parameter convention.
///
/// A reported gate error `r` is read as average gate infidelity; the
/// depolarizing channel ρ → (1 − p)ρ + p I/d with the same infidelity has
/// p = r·d/(d − 1).
pub fn depolarizing_parameter(gate_error: f64, num_qubits: usize) -> f64 {
    let d = (1usize << num_qubits) as f64;
    gate_error * d / (d - 1.0)
}

/// Per-qubit classical readout flip probabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReadoutConfusion {
    /// P(read 1 | true 0)
    pub p01: f64,
    /// P(read 0 | true 1)
    pub p10: f64,
}

impl ReadoutConfusion {
    pub const PERFECT: Self = Self { p01: 0.0, p10: 0.0 };

    /// Column-stochastic matrix [[1−e01, e10], [e01, 1−e10]] (rows: read, cols: true).
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[1.0 - self.p01, self.p10], [self.p01, 1.0 - self.p10]]
    }

    pub fn is_perfect(&self) -> bool {
        self.p01 == 0.0 && self.p10 == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateClass {
    SingleQubit,
    Cnot,
}

/// One channel application emitted by the noise model.
#[derive(Debug)]
pub struct NoiseStep<'a> {
    pub channel: &'a KrausChannel,
    pub qubits: Vec<usize>,
}

/// Compiled, immutable noise description for a register.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    num_qubits: usize,
    single_qubit_depolarizing: KrausChannel,
    cnot_depolarizing: KrausChannel,
    relax_single: Vec<KrausChannel>,
    relax_cnot: Vec<KrausChannel>,
    relax_readout: Option<Vec<KrausChannel>>,
    readout: Vec<ReadoutConfusion>,
    idle_relaxation: bool,
}

impl NoiseModel {
    pub fn compile(profile: &CalibrationProfile, num_qubits: usize) -> Result<Self, ProfileError> {
        profile.validate()?;
        for (field, values) in [
            ("t1_us", &profile.t1_us),
            ("t2_us", &profile.t2_us),
            ("readout_error_01", &profile.readout_error_01),
            ("readout_error_10", &profile.readout_error_10),
        ] {
            values.check_len(field, num_qubits)?;
        }
        let channel_err = |field: &str| {
            let field = field.to_string();
            move |e: crate::qsim::QsimError| ProfileError::invalid(&field, e.to_string())
        };

        let single_qubit_depolarizing = KrausChannel::depolarizing(
            1,
            depolarizing_parameter(profile.single_qubit_gate_error, 1),
        )
        .map_err(channel_err("single_qubit_gate_error"))?;
        let cnot_depolarizing =
            KrausChannel::depolarizing(2, depolarizing_parameter(profile.cnot_error, 2))
                .map_err(channel_err("cnot_error"))?;

        let relax = |duration_ns: f64| -> Result<Vec<KrausChannel>, ProfileError> {
            (0..num_qubits)
                .map(|q| {
                    let t1 = profile.t1_us.get(q).expect("length checked") * 1e3;
                    let t2 = profile.t2_us.get(q).expect("length checked") * 1e3;
                    KrausChannel::thermal_relaxation(duration_ns, t1, t2)
                        .map_err(channel_err("t2_us"))
                })
                .collect()
        };

        let readout = (0..num_qubits)
            .map(|q| ReadoutConfusion {
                p01: profile.readout_error_01.get(q).expect("length checked"),
                p10: profile.readout_error_10.get(q).expect("length checked"),
            })
            .collect();

        Ok(Self {
            num_qubits,
            single_qubit_depolarizing,
            cnot_depolarizing,
            relax_single: relax(profile.single_qubit_gate_ns)?,
            relax_cnot: relax(profile.cnot_ns)?,
            relax_readout: if profile.readout_relaxation {
                Some(relax(profile.readout_ns)?)
            } else {
                None
            },
            readout,
            idle_relaxation: profile.idle_relaxation,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn readout(&self, qubit: usize) -> ReadoutConfusion {
        self.readout[qubit]
    }

    /// Channels to apply right after a gate acting on `qubits`: depolarizing
    /// on the gate's qubits, relaxation over the gate duration on them, and
    /// relaxation on every idle qubit when enabled.
    pub fn after_gate(&self, class: GateClass, qubits: &[usize]) -> Vec<NoiseStep<'_>> {
        let (depol, relax) = match class {
            GateClass::SingleQubit => (&self.single_qubit_depolarizing, &self.relax_single),
            GateClass::Cnot => (&self.cnot_depolarizing, &self.relax_cnot),
        };
        let mut steps = vec![NoiseStep {
            channel: depol,
            qubits: qubits.to_vec(),
        }];
        for q in 0..self.num_qubits {
            if qubits.contains(&q) || self.idle_relaxation {
                steps.push(NoiseStep {
                    channel: &relax[q],
                    qubits: vec![q],
                });
            }
        }
        steps
    }

    /// Relaxation during readout of `qubits`, if the profile enables it.
    pub fn before_readout(&self, qubits: &[usize]) -> Vec<NoiseStep<'_>> {
        match &self.relax_readout {
            Some(relax) => qubits
                .iter()
                .map(|&q| NoiseStep {
                    channel: &relax[q],
                    qubits: vec![q],
                })
                .collect(),
            None => Vec::new(),
        }
    }

    /// Every quantum channel held by the model.
    pub fn channels(&self) -> impl Iterator<Item = &KrausChannel> {
        [&self.single_qubit_depolarizing, &self.cnot_depolarizing]
            .into_iter()
            .chain(&self.relax_single)
            .chain(&self.relax_cnot)
            .chain(self.relax_readout.iter().flatten())
    }

    pub fn is_noiseless(&self) -> bool {
        self.channels().all(|c| c.is_identity(EQ_TOL))
            && self.readout.iter().all(ReadoutConfusion::is_perfect)
    }
}

/// Applies each qubit's readout confusion to a distribution over bitstrings
/// of `qubits` (qubits[0] is the most significant bit).
pub fn apply_readout_confusion(
    dist: &[f64],
    model: &NoiseModel,
    qubits: &[usize],
) -> Result<Vec<f64>, ProfileError> {
    let k = qubits.len();
    if dist.len() != 1usize << k {
        return Err(ProfileError::invalid(
            "distribution",
            format!("{} entries for {k} qubits", dist.len()),
        ));
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= model.num_qubits) {
        return Err(ProfileError::invalid(
            "qubits",
            format!("qubit {q} outside the {}-qubit model", model.num_qubits),
        ));
    }
    let mut out = dist.to_vec();
    for (j, &q) in qubits.iter().enumerate() {
        let confusion = model.readout(q);
        if confusion.is_perfect() {
            continue;
        }
        let m = confusion.matrix();
        let bit = 1usize << (k - 1 - j);
        for i in 0..out.len() {
            if i & bit != 0 {
                continue;
            }
            let (p0, p1) = (out[i], out[i | bit]);
            out[i] = m[0][0] * p0 + m[0][1] * p1;
            out[i | bit] = m[1][0] * p0 + m[1][1] * p1;
        }
    }
    Ok(out)
}
