// SPDX-License-Identifier: Apache-2.0

//! Weak-valued estimation of measurement error and disturbance from the
//! joint statistics of the probe and final outcomes.
//!
//! Outcome tables over the four measured bits are indexed with z_i as the
//! most significant bit, then x_i, z_f, x_f. Bit value 0 is outcome +1.

mod sampling;
mod strategy;

use serde::{Deserialize, Serialize};

use crate::circuit::{build_edr_circuit, strength_from_angle, EdrStage, OutcomeLabel, Role};
use crate::meas_model::{commutator_bound, exact_disturbance, exact_error, standard_deviation};
use crate::noise::NoiseModel;
use crate::qsim::{gates, DensityMatrix};
use crate::{Error, Result};

pub use sampling::{derive_seed, sample_from_distribution, sample_shots, ShotRecord};
pub use strategy::{Estimator, EstimatorRegistry, ExactEstimator, SampledEstimator};

pub const OUTCOME_ORDER: [OutcomeLabel; 4] =
    [OutcomeLabel::Zi, OutcomeLabel::Xi, OutcomeLabel::Zf, OutcomeLabel::Xf];

pub const NUM_OUTCOMES: usize = 16;

pub type OutcomeTable = [f64; NUM_OUTCOMES];

const NORM_TOL: f64 = 1e-9;

/// Probe strengths at or below this count as zero (cos(π/2) is 6e-17).
const MIN_PROBE_STRENGTH: f64 = 1e-12;

/// Outcome value ±1 of table index 0 or 1.
#[inline]
pub fn outcome_value(bit: usize) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Sampled,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Sampled => "sampled",
        })
    }
}

/// P(a, b) over {+1, −1}², `probs[0][1]` being P(a = +1, b = −1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointDistribution {
    pub labels: (OutcomeLabel, OutcomeLabel),
    pub probs: [[f64; 2]; 2],
}

impl JointDistribution {
    pub fn new(labels: (OutcomeLabel, OutcomeLabel), probs: [[f64; 2]; 2]) -> Result<Self> {
        let flat = probs.iter().flatten();
        if flat.clone().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidArgument(format!("negative probability in {probs:?}")));
        }
        let total: f64 = flat.sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        Ok(Self { labels, probs })
    }

    pub fn uniform(labels: (OutcomeLabel, OutcomeLabel)) -> Self {
        Self {
            labels,
            probs: [[0.25; 2]; 2],
        }
    }

    /// Marginal of a full outcome table onto two of its bits.
    pub fn marginal(table: &OutcomeTable, labels: (OutcomeLabel, OutcomeLabel)) -> Result<Self> {
        let (ja, jb) = (position(labels.0), position(labels.1));
        if ja == jb {
            return Err(Error::InvalidArgument(format!("repeated outcome {}", labels.0)));
        }
        let mut probs = [[0.0; 2]; 2];
        for (idx, &p) in table.iter().enumerate() {
            probs[bit_of(idx, ja)][bit_of(idx, jb)] += p;
        }
        Self::new(labels, probs)
    }

    /// Σ a b P(a, b)
    pub fn correlator(&self) -> f64 {
        let p = &self.probs;
        p[0][0] + p[1][1] - p[0][1] - p[1][0]
    }
}

fn position(label: OutcomeLabel) -> usize {
    OUTCOME_ORDER.iter().position(|&l| l == label).expect("all labels listed")
}

#[inline]
fn bit_of(index: usize, position: usize) -> usize {
    (index >> (OUTCOME_ORDER.len() - 1 - position)) & 1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrDistEstimate {
    pub epsilon: f64,
    pub eta: f64,
    /// Squared error before clamping; negative values are sampling noise.
    pub epsilon_sq: f64,
    pub eta_sq: f64,
    pub method: Method,
    pub shots: Option<u64>,
}

impl ErrDistEstimate {
    fn from_squares(epsilon_sq: f64, eta_sq: f64, method: Method, shots: Option<u64>) -> Self {
        Self {
            epsilon: epsilon_sq.max(0.0).sqrt(),
            eta: eta_sq.max(0.0).sqrt(),
            epsilon_sq,
            eta_sq,
            method,
            shots,
        }
    }
}

fn probe_strength(theta_w: f64) -> Result<f64> {
    let c = theta_w.cos();
    if !theta_w.is_finite() || c <= MIN_PROBE_STRENGTH {
        return Err(Error::InvalidArgument(format!(
            "probe strength cos θ_w = {c} must be positive"
        )));
    }
    Ok(c)
}

/// ε² = 2(1 − E_z / cos θ_w) and η² = 2(1 − E_x / cos θ_w) from the
/// (z_i, z_f) and (x_i, x_f) correlators.
pub fn estimate_from_distribution(
    z: &JointDistribution,
    x: &JointDistribution,
    theta_w: f64,
) -> Result<ErrDistEstimate> {
    let expect = |d: &JointDistribution, want: (OutcomeLabel, OutcomeLabel)| {
        if d.labels == want {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "expected ({}, {}) distribution, got ({}, {})",
                want.0, want.1, d.labels.0, d.labels.1
            )))
        }
    };
    expect(z, (OutcomeLabel::Zi, OutcomeLabel::Zf))?;
    expect(x, (OutcomeLabel::Xi, OutcomeLabel::Xf))?;
    let c = probe_strength(theta_w)?;
    let epsilon_sq = 2.0 * (1.0 - z.correlator() / c);
    let eta_sq = 2.0 * (1.0 - x.correlator() / c);
    Ok(ErrDistEstimate::from_squares(epsilon_sq, eta_sq, Method::Exact, None))
}

/// Estimate from a full outcome table.
pub fn estimate_from_table(table: &OutcomeTable, theta_w: f64) -> Result<ErrDistEstimate> {
    let (z, x) = split_table(table)?;
    estimate_from_distribution(&z, &x, theta_w)
}

fn split_table(table: &OutcomeTable) -> Result<(JointDistribution, JointDistribution)> {
    Ok((
        JointDistribution::marginal(table, (OutcomeLabel::Zi, OutcomeLabel::Zf))?,
        JointDistribution::marginal(table, (OutcomeLabel::Xi, OutcomeLabel::Xf))?,
    ))
}

/// Quasi-probability P_wv(a_i, a_f) = (1 + a_i a_f E / strength)/4 obtained
/// by undoing the probe attenuation of the measured correlator E. Entries
/// may be negative.
pub fn weak_valued_distribution(dist: &JointDistribution, strength: f64) -> Result<[[f64; 2]; 2]> {
    if !(strength > 0.0 && strength <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "probe strength {strength} must be in (0, 1]"
        )));
    }
    let e = dist.correlator() / strength;
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (f, p) in row.iter_mut().enumerate() {
            *p = (1.0 + outcome_value(i) * outcome_value(f) * e) / 4.0;
        }
    }
    Ok(out)
}

/// Σ (a_i − a_f)² P_wv(a_i, a_f)
pub fn weak_valued_rms(dist: &JointDistribution, strength: f64) -> Result<f64> {
    let wv = weak_valued_distribution(dist, strength)?;
    let mut total = 0.0;
    for (i, row) in wv.iter().enumerate() {
        for (f, p) in row.iter().enumerate() {
            let d = outcome_value(i) - outcome_value(f);
            total += d * d * p;
        }
    }
    Ok(total)
}

/// Exact outcome table of the circuit, tiny negative rounding residue
/// clamped to zero.
pub fn exact_outcome_distribution(
    theta_w: f64,
    theta: f64,
    noise: Option<&NoiseModel>,
) -> Result<OutcomeTable> {
    let circuit = build_edr_circuit(theta_w, theta)?;
    let probs = circuit.outcome_probabilities(noise)?;
    let mut table = [0.0; NUM_OUTCOMES];
    for (slot, p) in table.iter_mut().zip(probs) {
        if p < -NORM_TOL {
            return Err(Error::InvalidArgument(format!("negative outcome probability {p}")));
        }
        *slot = p.max(0.0);
    }
    Ok(table)
}

pub fn exact_joint_distributions(
    theta_w: f64,
    theta: f64,
    noise: Option<&NoiseModel>,
) -> Result<(JointDistribution, JointDistribution)> {
    split_table(&exact_outcome_distribution(theta_w, theta, noise)?)
}

/// One-qubit state of the system as it enters the main measurement.
pub fn probed_system_state(theta_w: f64, noise: Option<&NoiseModel>) -> Result<DensityMatrix> {
    // the main-meter angle does not affect the earlier stages
    let circuit = build_edr_circuit(theta_w, 0.0)?;
    let initial = DensityMatrix::zero_state(circuit.num_qubits())?;
    let end = EdrStage::MeasurementApparatus.op_range().start;
    let state = circuit.evolve(initial, 0..end, noise)?;
    Ok(state.partial_trace(&[Role::System.index()])?)
}

/// Operator-definition ε(Z) and η(X) of the main measurement, evaluated on
/// the state entering it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValues {
    pub epsilon: f64,
    pub eta: f64,
}

pub fn oracle_values(theta_w: f64, theta: f64, noise: Option<&NoiseModel>) -> Result<OracleValues> {
    let system = probed_system_state(theta_w, noise)?;
    let strength = strength_from_angle(theta);
    Ok(OracleValues {
        epsilon: exact_error(&system, strength)?,
        eta: exact_disturbance(&system, strength)?,
    })
}

/// σ(Z), σ(X) and |⟨[Z, X]⟩|/2 of a one-qubit state.
pub fn state_moments(system: &DensityMatrix) -> Result<crate::edr::Moments> {
    let (z, x) = (gates::pauli_z(), gates::pauli_x());
    Ok(crate::edr::Moments {
        sigma_a: standard_deviation(system, &z)?,
        sigma_b: standard_deviation(system, &x)?,
        c: commutator_bound(system, &z, &x)?.min(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const LZ: (OutcomeLabel, OutcomeLabel) = (OutcomeLabel::Zi, OutcomeLabel::Zf);
    const LX: (OutcomeLabel, OutcomeLabel) = (OutcomeLabel::Xi, OutcomeLabel::Xf);

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn probe_angle() -> f64 {
        0.05f64.acos()
    }

    #[test]
    fn zero_strength_probes_give_uniform_marginals() {
        let (z, x) = exact_joint_distributions(FRAC_PI_2, 0.4, None).unwrap();
        for d in [z, x] {
            for p in d.probs.iter().flatten() {
                close(*p, 0.25, 1e-12);
            }
        }
    }

    #[test]
    fn projective_correlator() {
        let tw = probe_angle();
        let (z, _) = exact_joint_distributions(tw, 0.0, None).unwrap();
        let e = tw.cos() * tw.sin();
        close(z.correlator(), e, 1e-12);
        for i in 0..2 {
            for f in 0..2 {
                let expect = (1.0 + outcome_value(i) * outcome_value(f) * e) / 4.0;
                close(z.probs[i][f], expect, 1e-12);
            }
        }
        let (z, _) = exact_joint_distributions(tw, FRAC_PI_2, None).unwrap();
        close(z.correlator(), 0.0, 1e-15);
    }

    #[test]
    fn estimate_examples() {
        let tw = probe_angle();
        let (z, x) = exact_joint_distributions(tw, 0.0, None).unwrap();
        let est = estimate_from_distribution(&z, &x, tw).unwrap();
        close(est.epsilon_sq, 2.0 * (1.0 - tw.sin()), 1e-12);
        close(est.epsilon, 0.050_015_642_115_134_4, 1e-12);
        assert_eq!(est.method, Method::Exact);

        let (z, x) = exact_joint_distributions(tw, FRAC_PI_2, None).unwrap();
        close(estimate_from_distribution(&z, &x, tw).unwrap().epsilon, 2f64.sqrt(), 1e-12);

        let est = estimate_from_distribution(&JointDistribution::uniform(LZ), &JointDistribution::uniform(LX), tw).unwrap();
        assert_eq!((est.epsilon, est.eta), (2f64.sqrt(), 2f64.sqrt()));
    }

    #[test]
    fn estimate_rejects_bad_input() {
        let (z, x) = (JointDistribution::uniform(LZ), JointDistribution::uniform(LX));
        assert!(estimate_from_distribution(&z, &x, FRAC_PI_2).is_err());
        assert!(estimate_from_distribution(&x, &z, 0.3).is_err());
    }

    #[test]
    fn negative_squares_are_kept() {
        let z = JointDistribution::new(LZ, [[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let est = estimate_from_distribution(&z, &JointDistribution::uniform(LX), 0.5).unwrap();
        assert!(est.epsilon_sq < 0.0);
        assert_eq!(est.epsilon, 0.0);
    }

    #[test]
    fn weak_valued_examples() {
        let corr = JointDistribution::new(LZ, [[0.5, 0.0], [0.0, 0.5]]).unwrap();
        close(weak_valued_rms(&corr, 1.0).unwrap(), 0.0, 1e-15);
        let anti = JointDistribution::new(LZ, [[0.0, 0.5], [0.5, 0.0]]).unwrap();
        close(weak_valued_rms(&anti, 1.0).unwrap(), 4.0, 1e-15);
        let d = JointDistribution::new(LZ, [[0.3, 0.2], [0.1, 0.4]]).unwrap();
        for s in [0.05, 0.5, 1.0] {
            close(weak_valued_rms(&d, s).unwrap(), 2.0 * (1.0 - d.correlator() / s), 1e-12);
            let wv = weak_valued_distribution(&d, s).unwrap();
            close(wv.iter().flatten().sum::<f64>(), 1.0, 1e-15);
        }
        assert!(weak_valued_distribution(&d, 0.05).unwrap()[0][1] < 0.0);
        assert!(weak_valued_rms(&d, 0.0).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(JointDistribution::new(LZ, [[0.5, 0.5], [0.1, 0.0]]).is_err());
        assert!(JointDistribution::new(LZ, [[1.1, -0.1], [0.0, 0.0]]).is_err());
        let t = [1.0 / 16.0; 16];
        assert!(JointDistribution::marginal(&t, (OutcomeLabel::Zi, OutcomeLabel::Zi)).is_err());
    }

    #[test]
    fn marginal_bit_positions() {
        // all weight on z_i = −1, x_i = +1, z_f = +1, x_f = −1
        let mut t = [0.0; 16];
        t[0b1001] = 1.0;
        let z = JointDistribution::marginal(&t, LZ).unwrap();
        assert_eq!(z.probs[1][0], 1.0);
        let x = JointDistribution::marginal(&t, LX).unwrap();
        assert_eq!(x.probs[0][1], 1.0);
    }

    #[test]
    fn probed_state_and_moments() {
        let tw = probe_angle();
        let sys = probed_system_state(tw, None).unwrap();
        close(sys.expectation(&gates::pauli_y()).unwrap(), -tw.sin().powi(2), 1e-12);
        let m = state_moments(&sys).unwrap();
        close(m.c, tw.sin().powi(2), 1e-12);
        assert!(m.sigma_a * m.sigma_b >= m.c);
        let ideal = state_moments(&probed_system_state(FRAC_PI_2, None).unwrap()).unwrap();
        close(ideal.sigma_a, 1.0, 1e-12);
        close(ideal.c, 1.0, 1e-12);
    }

    #[test]
    fn oracle_closed_forms() {
        let tw = probe_angle();
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let o = oracle_values(tw, s.acos(), None).unwrap();
            close(o.epsilon, (2.0 * (1.0 - s)).sqrt(), 1e-12);
            close(o.eta, (2.0 * (1.0 - (1.0 - s * s).sqrt())).sqrt(), 1e-12);
        }
    }
}
