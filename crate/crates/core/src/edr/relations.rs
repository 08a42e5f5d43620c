// SPDX-License-Identifier: Apache-2.0

use super::{EdrError, EdrInputs};

const DOMAIN_SLACK: f64 = 1e-12;

/// An error-disturbance relation of the form lhs(ε, η, σ_A, σ_B, C) ≥ C.
pub trait UncertaintyRelation: Send + Sync {
    /// Registry key; also used as a column prefix in sweep output.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn lhs(&self, inputs: &EdrInputs) -> Result<f64, EdrError>;
}

/// ε·η ≥ C
#[derive(Debug, Default, Clone, Copy)]
pub struct Heisenberg;

/// ε σ_B + σ_A η + ε η ≥ C
#[derive(Debug, Default, Clone, Copy)]
pub struct Ozawa;

/// √(ε²σ_B² + σ_A²η² + 2εη√(σ_A²σ_B² − C²)) ≥ C
#[derive(Debug, Default, Clone, Copy)]
pub struct Branciard;

/// The Branciard relation for ±1-valued observables with zero means, in
/// terms of ε̃ = ε√(1 − ε²/4) and η̃ = η√(1 − η²/4). Only meaningful when
/// σ_A = σ_B = 1.
#[derive(Debug, Default, Clone, Copy)]
pub struct StrongBranciard;

impl UncertaintyRelation for Heisenberg {
    fn name(&self) -> &'static str {
        "heisenberg"
    }

    fn description(&self) -> &'static str {
        "error-disturbance product"
    }

    fn lhs(&self, i: &EdrInputs) -> Result<f64, EdrError> {
        Ok(i.epsilon * i.eta)
    }
}

impl UncertaintyRelation for Ozawa {
    fn name(&self) -> &'static str {
        "ozawa"
    }

    fn description(&self) -> &'static str {
        "product plus state-spread correlation terms"
    }

    fn lhs(&self, i: &EdrInputs) -> Result<f64, EdrError> {
        Ok(i.epsilon * i.sigma_b + i.sigma_a * i.eta + i.epsilon * i.eta)
    }
}

impl UncertaintyRelation for Branciard {
    fn name(&self) -> &'static str {
        "branciard"
    }

    fn description(&self) -> &'static str {
        "tight bound for general observables"
    }

    fn lhs(&self, i: &EdrInputs) -> Result<f64, EdrError> {
        let cross = radicand_root(i.sigma_a * i.sigma_a * i.sigma_b * i.sigma_b - i.c * i.c)?;
        let sum = (i.epsilon * i.sigma_b).powi(2)
            + (i.sigma_a * i.eta).powi(2)
            + 2.0 * i.epsilon * i.eta * cross;
        Ok(sum.max(0.0).sqrt())
    }
}

impl UncertaintyRelation for StrongBranciard {
    fn name(&self) -> &'static str {
        "strong_branciard"
    }

    fn description(&self) -> &'static str {
        "tightened bound for zero-mean ±1 observables"
    }

    fn lhs(&self, i: &EdrInputs) -> Result<f64, EdrError> {
        let e = tilde(i.epsilon)?;
        let h = tilde(i.eta)?;
        let cross = radicand_root(1.0 - i.c * i.c)?;
        Ok((e * e + h * h + 2.0 * e * h * cross).max(0.0).sqrt())
    }
}

fn radicand_root(x: f64) -> Result<f64, EdrError> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x > -DOMAIN_SLACK {
        Ok(0.0)
    } else {
        Err(EdrError::NegativeRadicand(x))
    }
}

/// x ↦ x√(1 − x²/4) on [0, 2].
pub fn tilde(x: f64) -> Result<f64, EdrError> {
    if !(-DOMAIN_SLACK..=2.0 + DOMAIN_SLACK).contains(&x) {
        return Err(EdrError::OutsideTildeDomain(x));
    }
    let x = x.clamp(0.0, 2.0);
    Ok(x * (1.0 - x * x / 4.0).max(0.0).sqrt())
}
