// SPDX-License-Identifier: Apache-2.0

//! Measurement-strength sweeps: per-point estimation over repeats,
//! aggregation, relation classification and export.

mod output;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::angle_from_strength;
use crate::edr::{is_satisfied, EdrInputs, Moments, RelationRegistry};
use crate::estimators::{
    derive_seed, exact_outcome_distribution, oracle_values, probed_system_state, state_moments,
    ErrDistEstimate, Estimator, EstimatorRegistry, Method, OracleValues,
};
use crate::noise::{compile_noise, CalibrationProfile, NoiseModel};
use crate::{Error, Result};

pub use output::{emit_csv, emit_json, parse_json, SweepOutput, CSV_SCHEMA_VERSION, JSON_SCHEMA};

pub const DEFAULT_PROBE_STRENGTH: f64 = 0.05;
pub const DEFAULT_GRID_POINTS: usize = 21;
pub const DEFAULT_SHOTS: u64 = 100_000;
pub const DEFAULT_REPEATS: usize = 10;
pub const DEFAULT_SEED: u64 = 20_240_601;

const MAX_ERROR: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
    /// Exact rows followed by sampled rows.
    Both,
}

impl Mode {
    pub fn methods(self) -> &'static [Method] {
        match self {
            Mode::Exact => &[Method::Exact],
            Mode::Sampled => &[Method::Sampled],
            Mode::Both => &[Method::Exact, Method::Sampled],
        }
    }
}

/// Source of σ_A, σ_B and C in the relation inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentSource {
    /// σ_A = σ_B = C = 1, the values on the ideal input state.
    Ideal,
    /// Computed on the simulated state entering the main measurement.
    Simulated,
}

macro_rules! text_enum {
    ($ty:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($ty::$variant),)+
                    _ => Err(Error::InvalidArgument(format!(
                        concat!("unknown ", stringify!($ty), " `{}`"), s
                    ))),
                }
            }
        }
    };
}

text_enum!(Mode { Exact => "exact", Sampled => "sampled", Both => "both" });
text_enum!(MomentSource { Ideal => "ideal", Simulated => "simulated" });

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// cos θ_w of both weak probes.
    pub theta_w_strength: f64,
    /// Main-measurement strengths cos θ.
    pub strengths: Vec<f64>,
    pub shots: u64,
    pub repeats: usize,
    pub seed: u64,
    pub noise: Option<CalibrationProfile>,
    pub mode: Mode,
    pub moments: MomentSource,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theta_w_strength: DEFAULT_PROBE_STRENGTH,
            strengths: grid(DEFAULT_GRID_POINTS),
            shots: DEFAULT_SHOTS,
            repeats: DEFAULT_REPEATS,
            seed: DEFAULT_SEED,
            noise: None,
            mode: Mode::Sampled,
            moments: MomentSource::Ideal,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.theta_w_strength > 0.0 && self.theta_w_strength <= 1.0) {
            return bad(format!(
                "probe strength {} must be in (0, 1]",
                self.theta_w_strength
            ));
        }
        if self.strengths.is_empty() {
            return bad("strength list is empty".into());
        }
        if let Some(s) = self.strengths.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return bad(format!("strength {s} is outside [0, 1]"));
        }
        if self.shots == 0 {
            return bad("shots must be at least 1".into());
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if let Some(p) = &self.noise {
            p.validate()?;
        }
        Ok(())
    }
}

/// `n` evenly spaced strengths from 0 to 1 inclusive.
pub fn grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationColumn {
    pub name: String,
    /// Relation evaluated at the mean ε and η.
    #[serde(with = "output::float17")]
    pub lhs: f64,
    /// rms over repeats of the per-repeat value.
    #[serde(with = "output::float17")]
    pub lhs_rms: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(with = "output::float17")]
    pub strength: f64,
    pub method: Method,
    pub shots: Option<u64>,
    pub repeats: usize,
    #[serde(with = "output::float17")]
    pub epsilon_mean: f64,
    #[serde(with = "output::float17")]
    pub epsilon_rms: f64,
    #[serde(with = "output::float17")]
    pub eta_mean: f64,
    #[serde(with = "output::float17")]
    pub eta_rms: f64,
    /// Mean of the unclamped squared estimates.
    #[serde(with = "output::float17")]
    pub epsilon_sq_mean: f64,
    #[serde(with = "output::float17")]
    pub eta_sq_mean: f64,
    #[serde(with = "output::float17")]
    pub sigma_a: f64,
    #[serde(with = "output::float17")]
    pub sigma_b: f64,
    #[serde(with = "output::float17")]
    pub c: f64,
    pub relations: Vec<RelationColumn>,
    /// Operator-definition values on the state entering the measurement.
    #[serde(with = "output::float17")]
    pub oracle_epsilon: f64,
    #[serde(with = "output::float17")]
    pub oracle_eta: f64,
}

impl SweepRow {
    pub fn relation(&self, name: &str) -> Option<&RelationColumn> {
        self.relations.iter().find(|r| r.name == name)
    }
}

/// Mean and population rms deviation.
pub fn mean_rms(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

struct Point {
    table: [f64; 16],
    moments: Moments,
    oracle: OracleValues,
}

/// Runs the sweep on the current rayon pool. Output depends only on the
/// configuration, never on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_sweep_with(cfg, &RelationRegistry::default())
}

pub fn run_sweep_with(cfg: &SweepConfig, relations: &RelationRegistry) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let noise: Option<NoiseModel> = cfg.noise.as_ref().map(compile_noise).transpose()?;
    let noise = noise.as_ref();
    let theta_w = angle_from_strength(cfg.theta_w_strength)?;
    let moments = match cfg.moments {
        MomentSource::Ideal => Moments::IDEAL,
        MomentSource::Simulated => state_moments(&probed_system_state(theta_w, noise)?)?,
    };

    let points = cfg
        .strengths
        .par_iter()
        .map(|&s| {
            let theta = angle_from_strength(s)?;
            Ok(Point {
                table: exact_outcome_distribution(theta_w, theta, noise)?,
                moments,
                oracle: oracle_values(theta_w, theta, noise)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let estimators = EstimatorRegistry::with_defaults(cfg.shots);
    let mut rows = Vec::with_capacity(points.len() * cfg.mode.methods().len());
    for &method in cfg.mode.methods() {
        let estimator = estimators.require(&method.to_string())?;
        let repeats = match method {
            Method::Exact => 1,
            Method::Sampled => cfg.repeats,
        };
        let tasks: Vec<(usize, usize)> = (0..points.len())
            .flat_map(|i| (0..repeats).map(move |r| (i, r)))
            .collect();
        let estimates = tasks
            .par_iter()
            .map(|&(i, r)| estimator.estimate(&points[i].table, theta_w, derive_seed(cfg.seed, i, r)))
            .collect::<Result<Vec<_>>>()?;
        for (i, chunk) in estimates.chunks(repeats).enumerate() {
            rows.push(aggregate(cfg.strengths[i], &points[i], chunk, estimator, relations)?);
        }
    }
    Ok(rows)
}

/// ε and η of ±1 observables cannot exceed 2; sampled estimates that do
/// are projected back before the relations see them.
fn relation_inputs(epsilon: f64, eta: f64, m: &Moments) -> Result<EdrInputs> {
    Ok(EdrInputs::with_moments(
        epsilon.min(MAX_ERROR),
        eta.min(MAX_ERROR),
        m,
    )?)
}

fn aggregate(
    strength: f64,
    point: &Point,
    estimates: &[ErrDistEstimate],
    estimator: &dyn Estimator,
    relations: &RelationRegistry,
) -> Result<SweepRow> {
    let column = |f: fn(&ErrDistEstimate) -> f64| mean_rms(&estimates.iter().map(f).collect::<Vec<_>>());
    let (epsilon_mean, epsilon_rms) = column(|e| e.epsilon);
    let (eta_mean, eta_rms) = column(|e| e.eta);
    let (epsilon_sq_mean, _) = column(|e| e.epsilon_sq);
    let (eta_sq_mean, _) = column(|e| e.eta_sq);
    let m = point.moments;
    let at_mean = relation_inputs(epsilon_mean, eta_mean, &m)?;
    let per_repeat = estimates
        .iter()
        .map(|e| relation_inputs(e.epsilon, e.eta, &m))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut columns = Vec::with_capacity(relations.len());
    for rel in relations.iter() {
        let lhs = rel.lhs(&at_mean)?;
        let values = per_repeat
            .iter()
            .map(|i| rel.lhs(i))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        columns.push(RelationColumn {
            name: rel.name().to_string(),
            lhs,
            lhs_rms: mean_rms(&values).1,
            satisfied: is_satisfied(lhs, m.c),
        });
    }
    Ok(SweepRow {
        strength,
        method: estimator.method(),
        shots: estimates[0].shots,
        repeats: estimates.len(),
        epsilon_mean,
        epsilon_rms,
        eta_mean,
        eta_rms,
        epsilon_sq_mean,
        eta_sq_mean,
        sigma_a: m.sigma_a,
        sigma_b: m.sigma_b,
        c: m.c,
        relations: columns,
        oracle_epsilon: point.oracle.epsilon,
        oracle_eta: point.oracle.eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mode: Mode) -> SweepConfig {
        SweepConfig {
            strengths: grid(5),
            shots: 2_000,
            repeats: 3,
            mode,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn grid_points() {
        assert_eq!(grid(3), [0.0, 0.5, 1.0]);
        assert_eq!(grid(21).len(), 21);
        assert_eq!(grid(21)[20], 1.0);
        assert_eq!(grid(1), [0.0]);
    }

    #[test]
    fn mean_rms_population() {
        assert_eq!(mean_rms(&[1.0, 3.0]), (2.0, 1.0));
        assert_eq!(mean_rms(&[0.7]), (0.7, 0.0));
    }

    #[test]
    fn exact_rows_have_zero_rms() {
        let rows = run_sweep(&small(Mode::Exact)).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert_eq!((r.epsilon_rms, r.eta_rms, r.repeats, r.shots), (0.0, 0.0, 1, None));
            assert!(r.relations.iter().all(|c| c.lhs_rms == 0.0));
            let b = 2.0 * (1.0 - (1.0f64 - 0.0025).sqrt());
            assert!((r.epsilon_mean.powi(2) - r.oracle_epsilon.powi(2)).abs() <= b + 1e-9);
        }
    }

    #[test]
    fn both_mode_orders_exact_first() {
        let rows = run_sweep(&small(Mode::Both)).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows[..5].iter().all(|r| r.method == Method::Exact));
        assert!(rows[5..].iter().all(|r| r.method == Method::Sampled && r.repeats == 3));
    }

    #[test]
    fn single_repeat_has_zero_rms() {
        let cfg = SweepConfig {
            repeats: 1,
            ..small(Mode::Sampled)
        };
        for r in run_sweep(&cfg).unwrap() {
            assert_eq!((r.epsilon_rms, r.eta_rms), (0.0, 0.0));
        }
    }

    #[test]
    fn independent_of_pool_size() {
        let cfg = small(Mode::Sampled);
        let run = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| run_sweep(&cfg).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn simulated_moments() {
        let cfg = SweepConfig {
            moments: MomentSource::Simulated,
            ..small(Mode::Exact)
        };
        let rows = run_sweep(&cfg).unwrap();
        let sin2 = 1.0 - 0.05f64 * 0.05;
        assert!((rows[0].c - sin2).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let ok = SweepConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SweepConfig { strengths: vec![], ..ok.clone() },
            SweepConfig { strengths: vec![1.2], ..ok.clone() },
            SweepConfig { shots: 0, ..ok.clone() },
            SweepConfig { repeats: 0, ..ok.clone() },
            SweepConfig { theta_w_strength: 0.0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
        assert_eq!("both".parse::<Mode>().unwrap(), Mode::Both);
        assert!("all".parse::<Mode>().is_err());
        assert_eq!(MomentSource::Simulated.to_string(), "simulated");
    }
}
