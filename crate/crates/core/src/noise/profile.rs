// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ProfileError;

pub const PROFILE_SCHEMA_VERSION: u32 = 1;

/// Representative calibration shipped with the crate. Illustrative values in
/// the typical range of small superconducting processors, not a measured
/// device.
pub const REPRESENTATIVE_PROFILE: &str = include_str!("../../profiles/representative.toml");

const DEFAULT_SINGLE_QUBIT_GATE_NS: f64 = 35.5;
const DEFAULT_CNOT_NS: f64 = 400.0;
const DEFAULT_READOUT_NS: f64 = 4000.0;

/// A per-qubit parameter: one value for every qubit, or one per qubit in
/// register order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerQubit {
    Uniform(f64),
    Each(Vec<f64>),
}

impl PerQubit {
    pub fn get(&self, qubit: usize) -> Option<f64> {
        match self {
            PerQubit::Uniform(v) => Some(*v),
            PerQubit::Each(values) => values.get(qubit).copied(),
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            PerQubit::Uniform(v) => std::slice::from_ref(v),
            PerQubit::Each(values) => values,
        }
    }

    /// Checks that a value exists for each of `num_qubits` qubits.
    pub(crate) fn check_len(&self, field: &str, num_qubits: usize) -> Result<(), ProfileError> {
        match self {
            PerQubit::Each(v) if v.len() != num_qubits => Err(ProfileError::invalid(
                field,
                format!("has {} entries but the register has {num_qubits} qubits", v.len()),
            )),
            _ => Ok(()),
        }
    }
}

fn default_single_ns() -> f64 {
    DEFAULT_SINGLE_QUBIT_GATE_NS
}
fn default_cnot_ns() -> f64 {
    DEFAULT_CNOT_NS
}
fn default_readout_ns() -> f64 {
    DEFAULT_READOUT_NS
}
fn default_true() -> bool {
    true
}

/// Device calibration data driving the noise model.
///
/// Times: `t1_us`, `t2_us` in microseconds, durations in nanoseconds.
/// `readout_error_01` is P(read 1 | prepared 0), `readout_error_10` is
/// P(read 0 | prepared 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationProfile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub t1_us: PerQubit,
    pub t2_us: PerQubit,
    pub readout_error_01: PerQubit,
    pub readout_error_10: PerQubit,
    pub single_qubit_gate_error: f64,
    pub cnot_error: f64,
    #[serde(default = "default_single_ns")]
    pub single_qubit_gate_ns: f64,
    #[serde(default = "default_cnot_ns")]
    pub cnot_ns: f64,
    #[serde(default = "default_readout_ns")]
    pub readout_ns: f64,
    /// Relax qubits that sit idle while other qubits are gated.
    #[serde(default = "default_true")]
    pub idle_relaxation: bool,
    /// Relax measured qubits over `readout_ns` before readout.
    #[serde(default)]
    pub readout_relaxation: bool,
}

impl CalibrationProfile {
    /// Profile with no noise at all.
    pub fn noiseless() -> Self {
        Self {
            schema_version: PROFILE_SCHEMA_VERSION,
            name: Some("noiseless".into()),
            t1_us: PerQubit::Uniform(f64::INFINITY),
            t2_us: PerQubit::Uniform(f64::INFINITY),
            readout_error_01: PerQubit::Uniform(0.0),
            readout_error_10: PerQubit::Uniform(0.0),
            single_qubit_gate_error: 0.0,
            cnot_error: 0.0,
            single_qubit_gate_ns: DEFAULT_SINGLE_QUBIT_GATE_NS,
            cnot_ns: DEFAULT_CNOT_NS,
            readout_ns: DEFAULT_READOUT_NS,
            idle_relaxation: true,
            readout_relaxation: false,
        }
    }

    pub fn representative() -> Self {
        load_profile_str(REPRESENTATIVE_PROFILE).expect("shipped profile is valid")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("profile serializes")
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.schema_version != PROFILE_SCHEMA_VERSION {
            return Err(ProfileError::invalid(
                "schema_version",
                format!(
                    "unsupported version {} (expected {PROFILE_SCHEMA_VERSION})",
                    self.schema_version
                ),
            ));
        }
        for (field, values) in [
            ("readout_error_01", &self.readout_error_01),
            ("readout_error_10", &self.readout_error_10),
        ] {
            for &v in values.values() {
                probability(field, v, 1.0)?;
            }
        }
        // largest errors that still map onto a valid depolarizing channel
        probability("single_qubit_gate_error", self.single_qubit_gate_error, 2.0 / 3.0)?;
        probability("cnot_error", self.cnot_error, 0.8)?;

        for (field, values) in [("t1_us", &self.t1_us), ("t2_us", &self.t2_us)] {
            if let Some(bad) = values.values().iter().find(|v| !(**v > 0.0)) {
                return Err(ProfileError::invalid(field, format!("{bad} is not positive")));
            }
        }
        let n = self.t1_us.values().len().max(self.t2_us.values().len());
        for q in 0..n {
            if let (Some(t1), Some(t2)) = (self.t1_us.get(q), self.t2_us.get(q)) {
                if t2 > 2.0 * t1 {
                    return Err(ProfileError::invalid(
                        "t2_us",
                        format!("qubit {q}: T2 = {t2} exceeds 2·T1 = {}", 2.0 * t1),
                    ));
                }
            }
        }
        for (field, v) in [
            ("single_qubit_gate_ns", self.single_qubit_gate_ns),
            ("cnot_ns", self.cnot_ns),
            ("readout_ns", self.readout_ns),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ProfileError::invalid(field, format!("{v} is not a positive duration")));
            }
        }
        Ok(())
    }
}

fn probability(field: &str, v: f64, max: f64) -> Result<(), ProfileError> {
    if (0.0..=max).contains(&v) {
        Ok(())
    } else {
        Err(ProfileError::invalid(field, format!("{v} is outside [0, {max}]")))
    }
}

pub fn load_profile_str(text: &str) -> Result<CalibrationProfile, ProfileError> {
    let profile: CalibrationProfile = toml::from_str(text)?;
    profile.validate()?;
    Ok(profile)
}

pub fn load_profile(path: impl AsRef<Path>) -> Result<CalibrationProfile, ProfileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_profile_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
schema_version = 1
name = "bench"
t1_us = [80.0, 95.0, 70.0, 110.0]
t2_us = 60.0
readout_error_01 = 0.015
readout_error_10 = 0.03
single_qubit_gate_error = 0.0003
cnot_error = 0.01
single_qubit_gate_ns = 35.5
cnot_ns = 420.0
readout_ns = 5000.0
idle_relaxation = false
readout_relaxation = true
"#;

    #[test]
    fn full_document_round_trips() {
        let p = load_profile_str(FULL).unwrap();
        assert_eq!(p.t1_us.get(3), Some(110.0));
        assert!(!p.idle_relaxation);
        let text = p.to_toml();
        let again = load_profile_str(&text).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.to_toml(), text);
    }

    #[test]
    fn optional_fields_take_defaults() {
        let p = load_profile_str(
            r#"
schema_version = 1
t1_us = 50.0
t2_us = 40.0
readout_error_01 = 0.0
readout_error_10 = 0.0
single_qubit_gate_error = 0.0
cnot_error = 0.0
"#,
        )
        .unwrap();
        assert_eq!(p.cnot_ns, DEFAULT_CNOT_NS);
        assert_eq!(p.readout_ns, DEFAULT_READOUT_NS);
        assert!(p.idle_relaxation);
        assert!(!p.readout_relaxation);
        assert_eq!(p.name, None);
    }

    #[test]
    fn t2_above_twice_t1_is_rejected() {
        let doc = FULL.replace("t2_us = 60.0", "t2_us = [240.0, 285.0, 210.0, 330.0]");
        match load_profile_str(&doc) {
            Err(ProfileError::Invalid { field, .. }) => assert_eq!(field, "t2_us"),
            other => panic!("expected invalid t2, got {other:?}"),
        }
    }

    #[test]
    fn field_level_errors() {
        let cases = [
            ("readout_error_01 = 0.015", "readout_error_01 = 1.5", "readout_error_01"),
            ("cnot_error = 0.01", "cnot_error = -0.01", "cnot_error"),
            ("cnot_ns = 420.0", "cnot_ns = 0.0", "cnot_ns"),
            ("schema_version = 1", "schema_version = 7", "schema_version"),
            ("t2_us = 60.0", "t2_us = -1.0", "t2_us"),
        ];
        for (from, to, field) in cases {
            match load_profile_str(&FULL.replace(from, to)) {
                Err(ProfileError::Invalid { field: f, .. }) => assert_eq!(f, field),
                other => panic!("{to}: expected invalid {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn parse_failures() {
        assert!(matches!(
            load_profile_str("schema_version = "),
            Err(ProfileError::Parse(_))
        ));
        // missing required field
        assert!(matches!(
            load_profile_str(&FULL.replace("cnot_error = 0.01", "")),
            Err(ProfileError::Parse(_))
        ));
        // unknown key
        assert!(matches!(
            load_profile_str(&format!("{FULL}\nbogus = 1\n")),
            Err(ProfileError::Parse(_))
        ));
    }

    #[test]
    fn noiseless_profile_with_infinite_coherence_round_trips() {
        let p = CalibrationProfile::noiseless();
        p.validate().unwrap();
        assert_eq!(load_profile_str(&p.to_toml()).unwrap(), p);
    }

    #[test]
    fn shipped_profile_loads() {
        let p = CalibrationProfile::representative();
        assert!(p.name.is_some());
    }

    #[test]
    fn load_from_file() {
        let dir = std::env::temp_dir().join(format!("edr-profile-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p.toml");
        std::fs::write(&path, FULL).unwrap();
        assert_eq!(load_profile(&path).unwrap(), load_profile_str(FULL).unwrap());
        assert!(matches!(
            load_profile(dir.join("missing.toml")),
            Err(ProfileError::Io { .. })
        ));
        std::fs::remove_dir_all(&dir).ok();
    }
}
