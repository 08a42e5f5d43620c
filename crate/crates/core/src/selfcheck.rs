// SPDX-License-Identifier: Apache-2.0

//! Quick invariant and oracle checks, run by `edrsim check`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::circuit::angle_from_strength;
use crate::edr::{classify, effective_bound, EdrInputs, RelationRegistry, StrongBranciard, UncertaintyRelation};
use crate::estimators::{exact_outcome_distribution, estimate_from_table, oracle_values, sample_from_distribution};
use crate::meas_model::{build_povm, commutator_bound, r_state};
use crate::noise::{compile_noise, CalibrationProfile};
use crate::qsim::{gates, EQ_TOL};
use crate::sweep::{grid, DEFAULT_PROBE_STRENGTH};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: [(&str, Check); 8] = [
    ("closed-form error and disturbance", closed_forms),
    ("strong Branciard saturation", saturation),
    ("effective bound and commutator", bounds),
    ("estimator bias", estimator_bias),
    ("monotone trade-off", tradeoff),
    ("POVM matches meter readout", povm_readout),
    ("midpoint classification", midpoint),
    ("representative noise is CPTP", noise_cptp),
];

/// Runs every check; a check that errors counts as failed.
pub fn run_self_checks() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok((passed, detail)) => CheckOutcome { name, passed, detail },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}

fn probe_angle() -> f64 {
    DEFAULT_PROBE_STRENGTH.acos()
}

fn max_over<F: Fn(f64) -> Result<f64>>(f: F) -> Result<f64> {
    grid(21).into_iter().try_fold(0.0f64, |m, s| Ok(m.max(f(s)?)))
}

fn closed_forms() -> Result<(bool, String)> {
    let tw = probe_angle();
    let worst = max_over(|s| {
        let o = oracle_values(tw, s.acos(), None)?;
        let e = (2.0 * (1.0 - s)).sqrt();
        let h = (2.0 * (1.0 - (1.0 - s * s).sqrt())).sqrt();
        Ok((o.epsilon - e).abs().max((o.eta - h).abs()))
    })?;
    Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
}

fn saturation() -> Result<(bool, String)> {
    let tw = probe_angle();
    let worst = max_over(|s| {
        let o = oracle_values(tw, s.acos(), None)?;
        Ok((StrongBranciard.lhs(&EdrInputs::ideal(o.epsilon, o.eta)?)? - 1.0).abs())
    })?;
    Ok((worst < 1e-9, format!("max |lhs - 1| {worst:.2e}")))
}

fn bounds() -> Result<(bool, String)> {
    let b = effective_bound(probe_angle());
    let c = commutator_bound(&r_state(), &gates::pauli_z(), &gates::pauli_x())?;
    Ok((
        (b - 0.995).abs() < 5e-4 && (c - 1.0).abs() < EQ_TOL,
        format!("effective bound {b:.5}, C on |R> {c}"),
    ))
}

fn estimator_bias() -> Result<(bool, String)> {
    let tw = probe_angle();
    let limit = 2.0 * (1.0 - tw.sin()) + 1e-9;
    let worst = max_over(|s| {
        let theta = s.acos();
        let est = estimate_from_table(&exact_outcome_distribution(tw, theta, None)?, tw)?;
        let o = oracle_values(tw, theta, None)?;
        Ok((est.epsilon_sq - o.epsilon.powi(2))
            .abs()
            .max((est.eta_sq - o.eta.powi(2)).abs()))
    })?;
    Ok((worst <= limit, format!("max squared deviation {worst:.3e} (limit {limit:.3e})")))
}

fn tradeoff() -> Result<(bool, String)> {
    let tw = probe_angle();
    let mut prev: Option<(f64, f64)> = None;
    for s in grid(21) {
        let est = estimate_from_table(&exact_outcome_distribution(tw, s.acos(), None)?, tw)?;
        if let Some((e, h)) = prev {
            if !(est.epsilon < e - 1e-9 && est.eta > h + 1e-9) {
                return Ok((false, format!("not monotone at strength {s}")));
            }
        }
        prev = Some((est.epsilon, est.eta));
    }
    Ok((true, "epsilon falls, eta rises over 21 points".into()))
}

fn povm_readout() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for s in grid(11) {
        let table = exact_outcome_distribution(FRAC_PI_2, angle_from_strength(s)?, None)?;
        // z_f is bit 1 from the bottom; bit value 0 is outcome +1
        let p_plus: f64 = table.iter().enumerate().filter(|(i, _)| i & 0b0010 == 0).map(|(_, p)| p).sum();
        let expected = build_povm(s)?.probability(&r_state(), 0)?;
        worst = worst.max((p_plus - expected).abs());
    }
    Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
}

fn midpoint() -> Result<(bool, String)> {
    let tw = probe_angle();
    let o = oracle_values(tw, FRAC_PI_4, None)?;
    let report = classify(&EdrInputs::ideal(o.epsilon, o.eta)?, &RelationRegistry::default())?;
    let flags: Vec<bool> = report.outcomes.iter().map(|r| r.satisfied).collect();
    Ok((
        flags == [false, true, true, true],
        format!("heisenberg lhs {:.4}", report.outcomes[0].lhs),
    ))
}

fn noise_cptp() -> Result<(bool, String)> {
    let model = compile_noise(&CalibrationProfile::representative())?;
    let worst = model
        .channels()
        .map(|c| c.completeness_defect())
        .fold(0.0f64, f64::max);
    let table = exact_outcome_distribution(probe_angle(), 0.3, Some(&model))?;
    let total: f64 = table.iter().sum();
    let sampled = sample_from_distribution(&table, 1000, 1)?;
    Ok((
        worst <= 1e-12 && (total - 1.0).abs() < 1e-12 && sampled.counts.iter().sum::<u64>() == 1000,
        format!("max completeness defect {worst:.2e}"),
    ))
}
