// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON serialization of sweep rows. Floats are written with 17
//! significant digits so that values round-trip exactly.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Mode, MomentSource, SweepConfig, SweepRow};
use crate::circuit::angle_from_strength;
use crate::edr::effective_bound;
use crate::estimators::probed_system_state;
use crate::noise::compile_noise;
use crate::qsim::gates;
use crate::{Error, Result};

pub const JSON_SCHEMA: &str = "edrsim.sweep";
pub const CSV_SCHEMA_VERSION: u32 = 1;

fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no literal for these; CSV readers accept the Rust spelling
        format!("{x}")
    }
}

pub(crate) mod float17 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::value::RawValue;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if !x.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(super::fmt17(*x))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            use serde::ser::SerializeSeq;
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&Wrapped(*x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Vec::<f64>::deserialize(d)
        }

        struct Wrapped(f64);

        impl Serialize for Wrapped {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                super::serialize(&self.0, s)
            }
        }
    }
}

/// Configuration echoed into JSON output. Thread count is deliberately
/// absent: it never affects results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(with = "float17")]
    pub theta_w_strength: f64,
    #[serde(with = "float17::vec")]
    pub strengths: Vec<f64>,
    pub shots: u64,
    pub repeats: usize,
    pub seed: u64,
    pub mode: Mode,
    pub moments: MomentSource,
    /// Profile name, `custom` for unnamed profiles, null when noiseless.
    pub noise_profile: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub schema: String,
    pub schema_version: u32,
    pub config: ConfigEcho,
    /// 4/(3 + cos 2θ_w) − 1 for the configured probes.
    #[serde(with = "float17")]
    pub effective_bound: f64,
    /// |⟨Y⟩| of the simulated state entering the main measurement.
    #[serde(with = "float17")]
    pub probed_y: f64,
    pub rows: Vec<SweepRow>,
}

fn relation_names(rows: &[SweepRow]) -> Result<Vec<&str>> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidArgument("no rows to emit".into()))?;
    let names: Vec<&str> = first.relations.iter().map(|r| r.name.as_str()).collect();
    if rows
        .iter()
        .any(|r| !r.relations.iter().map(|c| c.name.as_str()).eq(names.iter().copied()))
    {
        return Err(Error::InvalidArgument("rows disagree on relation columns".into()));
    }
    Ok(names)
}

const LEADING_COLUMNS: [&str; 13] = [
    "strength",
    "method",
    "shots",
    "repeats",
    "epsilon_mean",
    "epsilon_rms",
    "eta_mean",
    "eta_rms",
    "epsilon_sq_mean",
    "eta_sq_mean",
    "sigma_a",
    "sigma_b",
    "c",
];

const TRAILING_COLUMNS: [&str; 2] = ["oracle_epsilon", "oracle_eta"];

/// Header followed by one line per row, `\n` terminated.
pub fn emit_csv(rows: &[SweepRow]) -> Result<String> {
    let names = relation_names(rows)?;
    let mut header: Vec<String> = LEADING_COLUMNS.iter().map(|s| s.to_string()).collect();
    for n in &names {
        header.extend([format!("{n}_lhs"), format!("{n}_lhs_rms"), format!("{n}_satisfied")]);
    }
    header.extend(TRAILING_COLUMNS.iter().map(|s| s.to_string()));

    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let mut fields = vec![
            fmt17(r.strength),
            r.method.to_string(),
            r.shots.map(|s| s.to_string()).unwrap_or_default(),
            r.repeats.to_string(),
        ];
        fields.extend(
            [
                r.epsilon_mean,
                r.epsilon_rms,
                r.eta_mean,
                r.eta_rms,
                r.epsilon_sq_mean,
                r.eta_sq_mean,
                r.sigma_a,
                r.sigma_b,
                r.c,
            ]
            .map(fmt17),
        );
        for c in &r.relations {
            fields.extend([fmt17(c.lhs), fmt17(c.lhs_rms), c.satisfied.to_string()]);
        }
        fields.extend([fmt17(r.oracle_epsilon), fmt17(r.oracle_eta)]);
        let _ = writeln!(out, "{}", fields.join(","));
    }
    Ok(out)
}

pub fn emit_json(cfg: &SweepConfig, rows: &[SweepRow]) -> Result<String> {
    relation_names(rows)?;
    let theta_w = angle_from_strength(cfg.theta_w_strength)?;
    let noise = cfg.noise.as_ref().map(compile_noise).transpose()?;
    let probed = probed_system_state(theta_w, noise.as_ref())?;
    let envelope = SweepOutput {
        schema: JSON_SCHEMA.to_string(),
        schema_version: CSV_SCHEMA_VERSION,
        config: ConfigEcho {
            theta_w_strength: cfg.theta_w_strength,
            strengths: cfg.strengths.clone(),
            shots: cfg.shots,
            repeats: cfg.repeats,
            seed: cfg.seed,
            mode: cfg.mode,
            moments: cfg.moments,
            noise_profile: cfg
                .noise
                .as_ref()
                .map(|p| p.name.clone().unwrap_or_else(|| "custom".into())),
        },
        effective_bound: effective_bound(theta_w),
        probed_y: probed.expectation(&gates::pauli_y())?.abs(),
        rows: rows.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&envelope)
        .map_err(|e| Error::InvalidArgument(format!("cannot serialize sweep: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn parse_json(text: &str) -> Result<SweepOutput> {
    let out: SweepOutput = serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("malformed sweep document: {e}")))?;
    if out.schema != JSON_SCHEMA || out.schema_version != CSV_SCHEMA_VERSION {
        return Err(Error::InvalidArgument(format!(
            "unsupported document {} v{}",
            out.schema, out.schema_version
        )));
    }
    Ok(out)
}
