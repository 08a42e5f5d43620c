// SPDX-License-Identifier: Apache-2.0

//! Error-disturbance uncertainty relations and classification of (ε, η)
//! points against them.
//!
//! Each relation implements [`UncertaintyRelation`] and is looked up by name
//! through a [`RelationRegistry`]; [`RelationRegistry::default`] holds the
//! four standard relations in the order Heisenberg, Ozawa, Branciard,
//! strong Branciard.

mod registry;
mod relations;

use serde::{Deserialize, Serialize};

pub use registry::RelationRegistry;
pub use relations::{tilde, Branciard, Heisenberg, Ozawa, StrongBranciard, UncertaintyRelation};

/// A point satisfies a relation when lhs ≥ C − this.
pub const SATISFACTION_TOL: f64 = 1e-9;

const INPUT_SLACK: f64 = 1e-12;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EdrError {
    #[error("{field} must be a finite non-negative number, got {value}")]
    Negative { field: &'static str, value: f64 },
    #[error("bound C = {0} is outside [0, 1]")]
    BoundOutOfRange(f64),
    #[error("σ_A·σ_B = {product} is below C = {c}")]
    SpreadBelowBound { product: f64, c: f64 },
    #[error("negative radicand {0:e}")]
    NegativeRadicand(f64),
    #[error("{0} is outside [0, 2] where the tilde map is defined")]
    OutsideTildeDomain(f64),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{0}` is already registered")]
    DuplicateRelation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdrInputs {
    pub epsilon: f64,
    pub eta: f64,
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub c: f64,
}

impl EdrInputs {
    pub fn new(epsilon: f64, eta: f64, sigma_a: f64, sigma_b: f64, c: f64) -> Result<Self, EdrError> {
        for (field, value) in [
            ("epsilon", epsilon),
            ("eta", eta),
            ("sigma_a", sigma_a),
            ("sigma_b", sigma_b),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(EdrError::Negative { field, value });
            }
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(EdrError::BoundOutOfRange(c));
        }
        let product = sigma_a * sigma_b;
        if product < c - INPUT_SLACK {
            return Err(EdrError::SpreadBelowBound { product, c });
        }
        Ok(Self {
            epsilon,
            eta,
            sigma_a,
            sigma_b,
            c,
        })
    }

    /// σ_A = σ_B = C = 1, the zero-mean ±1 case with a maximal commutator.
    pub fn ideal(epsilon: f64, eta: f64) -> Result<Self, EdrError> {
        Self::new(epsilon, eta, 1.0, 1.0, 1.0)
    }

    pub fn with_moments(epsilon: f64, eta: f64, moments: &Moments) -> Result<Self, EdrError> {
        Self::new(epsilon, eta, moments.sigma_a, moments.sigma_b, moments.c)
    }
}

/// Spreads and commutator bound of the observed state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub c: f64,
}

impl Moments {
    pub const IDEAL: Moments = Moments {
        sigma_a: 1.0,
        sigma_b: 1.0,
        c: 1.0,
    };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationOutcome {
    pub name: String,
    pub lhs: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdrReport {
    pub inputs: EdrInputs,
    pub outcomes: Vec<RelationOutcome>,
}

impl EdrReport {
    pub fn outcome(&self, name: &str) -> Option<&RelationOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn all_satisfied(&self) -> bool {
        self.outcomes.iter().all(|o| o.satisfied)
    }
}

pub fn is_satisfied(lhs: f64, c: f64) -> bool {
    lhs >= c - SATISFACTION_TOL
}

/// Evaluates every relation in `registry` at `inputs`.
pub fn classify(inputs: &EdrInputs, registry: &RelationRegistry) -> Result<EdrReport, EdrError> {
    let outcomes = registry
        .iter()
        .map(|rel| {
            let lhs = rel.lhs(inputs)?;
            Ok(RelationOutcome {
                name: rel.name().to_string(),
                lhs,
                satisfied: is_satisfied(lhs, inputs.c),
            })
        })
        .collect::<Result<_, EdrError>>()?;
    Ok(EdrReport {
        inputs: *inputs,
        outcomes,
    })
}

pub fn heisenberg(inputs: &EdrInputs) -> f64 {
    Heisenberg.lhs(inputs).expect("infallible")
}

pub fn ozawa(inputs: &EdrInputs) -> f64 {
    Ozawa.lhs(inputs).expect("infallible")
}

pub fn branciard(inputs: &EdrInputs) -> Result<f64, EdrError> {
    Branciard.lhs(inputs)
}

pub fn strong_branciard(inputs: &EdrInputs) -> Result<f64, EdrError> {
    StrongBranciard.lhs(inputs)
}

/// Effective bound 4/(3 + cos 2θ_w) − 1 of the probed state for weak-probe
/// angle θ_w.
pub fn effective_bound(theta_w: f64) -> f64 {
    4.0 / (3.0 + (2.0 * theta_w).cos()) - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, SQRT_2};

    #[test]
    fn effective_bound_values() {
        let tw = 0.05f64.acos();
        assert!((effective_bound(tw) - 0.995_012_468_827_930_3).abs() < 1e-12);
        assert!((effective_bound(FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert!(effective_bound(0.0).abs() < 1e-15);
    }

    #[test]
    fn classify_midpoint() {
        let mid = 2.0 * FRAC_PI_8.sin();
        let report = classify(&EdrInputs::ideal(mid, mid).unwrap(), &RelationRegistry::default()).unwrap();
        let flags: Vec<(&str, bool)> = report
            .outcomes
            .iter()
            .map(|o| (o.name.as_str(), o.satisfied))
            .collect();
        assert_eq!(
            flags,
            [
                ("heisenberg", false),
                ("ozawa", true),
                ("branciard", true),
                ("strong_branciard", true)
            ]
        );
    }

    #[test]
    fn classify_endpoints() {
        let reg = RelationRegistry::default();
        let all = classify(&EdrInputs::ideal(SQRT_2, SQRT_2).unwrap(), &reg).unwrap();
        assert!(all.all_satisfied());
        let none = classify(&EdrInputs::ideal(0.0, 0.0).unwrap(), &reg).unwrap();
        assert!(none.outcomes.iter().all(|o| !o.satisfied));
    }

    #[test]
    fn saturated_point_counts_as_satisfied() {
        let report = classify(&EdrInputs::ideal(1.0, 1.0).unwrap(), &RelationRegistry::default()).unwrap();
        assert!(report.outcome("heisenberg").unwrap().satisfied);
        assert!(is_satisfied(1.0 - 5e-10, 1.0));
        assert!(!is_satisfied(1.0 - 2e-9, 1.0));
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            EdrInputs::new(-0.1, 0.0, 1.0, 1.0, 1.0),
            Err(EdrError::Negative { field: "epsilon", .. })
        ));
        assert!(matches!(
            EdrInputs::new(0.1, 0.0, 1.0, 1.0, 1.5),
            Err(EdrError::BoundOutOfRange(_))
        ));
        assert!(matches!(
            EdrInputs::new(0.1, 0.0, 0.5, 1.0, 0.9),
            Err(EdrError::SpreadBelowBound { .. })
        ));
        assert!(EdrInputs::new(0.1, f64::NAN, 1.0, 1.0, 1.0).is_err());
    }
}
