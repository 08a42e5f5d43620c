// SPDX-License-Identifier: Apache-2.0

use super::{
    estimate_from_table, sample_from_distribution, ErrDistEstimate, Method, OutcomeTable,
};
use crate::circuit::OutcomeLabel;
use crate::{Error, Result};

/// Turns the exact outcome table of one circuit into an (ε, η) estimate.
pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;

    fn method(&self) -> Method;

    /// `seed` is ignored by deterministic estimators.
    fn estimate(&self, table: &OutcomeTable, theta_w: f64, seed: u64) -> Result<ErrDistEstimate>;
}

/// Applies the estimator to the exact probabilities.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExactEstimator;

/// Applies the estimator to the frequencies of a finite batch of shots.
#[derive(Debug, Clone, Copy)]
pub struct SampledEstimator {
    pub shots: u64,
}

impl Estimator for ExactEstimator {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn method(&self) -> Method {
        Method::Exact
    }

    fn estimate(&self, table: &OutcomeTable, theta_w: f64, _seed: u64) -> Result<ErrDistEstimate> {
        estimate_from_table(table, theta_w)
    }
}

impl Estimator for SampledEstimator {
    fn name(&self) -> &'static str {
        "sampled"
    }

    fn method(&self) -> Method {
        Method::Sampled
    }

    fn estimate(&self, table: &OutcomeTable, theta_w: f64, seed: u64) -> Result<ErrDistEstimate> {
        let record = sample_from_distribution(table, self.shots, seed)?;
        let z = record.joint((OutcomeLabel::Zi, OutcomeLabel::Zf))?;
        let x = record.joint((OutcomeLabel::Xi, OutcomeLabel::Xf))?;
        let est = super::estimate_from_distribution(&z, &x, theta_w)?;
        Ok(ErrDistEstimate {
            method: Method::Sampled,
            shots: Some(self.shots),
            ..est
        })
    }
}

/// Name-keyed estimator strategies.
pub struct EstimatorRegistry {
    entries: Vec<Box<dyn Estimator>>,
}

impl EstimatorRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// `exact` and `sampled` with the given shot count.
    pub fn with_defaults(shots: u64) -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ExactEstimator)).expect("distinct names");
        reg.register(Box::new(SampledEstimator { shots })).expect("distinct names");
        reg
    }

    pub fn register(&mut self, estimator: Box<dyn Estimator>) -> Result<()> {
        if self.get(estimator.name()).is_some() {
            return Err(Error::InvalidArgument(format!(
                "estimator `{}` is already registered",
                estimator.name()
            )));
        }
        self.entries.push(estimator);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn Estimator> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn require(&self, name: &str) -> Result<&dyn Estimator> {
        self.get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown estimator `{name}`")))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}
