// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{exact_outcome_distribution, JointDistribution, OutcomeTable, NUM_OUTCOMES};
use crate::circuit::OutcomeLabel;
use crate::noise::NoiseModel;
use crate::{Error, Result};

/// Counts of the 16 joint outcomes (z_i, x_i, z_f, x_f) over a batch of shots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub counts: [u64; NUM_OUTCOMES],
    pub total_shots: u64,
    pub seed: u64,
}

impl ShotRecord {
    /// Empirical frequencies.
    pub fn frequencies(&self) -> OutcomeTable {
        let n = self.total_shots as f64;
        self.counts.map(|c| c as f64 / n)
    }

    /// Empirical joint distribution of two outcomes.
    pub fn joint(&self, labels: (OutcomeLabel, OutcomeLabel)) -> Result<JointDistribution> {
        let (ja, jb) = (super::position(labels.0), super::position(labels.1));
        if ja == jb {
            return Err(Error::InvalidArgument(format!("repeated outcome {}", labels.0)));
        }
        let mut counts = [[0u64; 2]; 2];
        for (idx, &c) in self.counts.iter().enumerate() {
            counts[super::bit_of(idx, ja)][super::bit_of(idx, jb)] += c;
        }
        let n = self.total_shots as f64;
        Ok(JointDistribution {
            labels,
            probs: counts.map(|row| row.map(|c| c as f64 / n)),
        })
    }
}

/// Draws `shots` outcomes from `table` by inverse-CDF lookup on a ChaCha8
/// stream seeded with `seed`.
pub fn sample_from_distribution(table: &OutcomeTable, shots: u64, seed: u64) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let mut cdf = [0.0; NUM_OUTCOMES];
    let mut acc = 0.0;
    for (c, &p) in cdf.iter_mut().zip(table) {
        if !(p >= 0.0) {
            return Err(Error::InvalidArgument(format!("invalid outcome probability {p}")));
        }
        acc += p;
        *c = acc;
    }
    if !(acc > 0.0) {
        return Err(Error::InvalidArgument("outcome table has no weight".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; NUM_OUTCOMES];
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        // first bin whose upper edge exceeds u; empty bins have zero width
        // and can never be selected
        let idx = cdf.partition_point(|&c| c <= u).min(NUM_OUTCOMES - 1);
        counts[idx] += 1;
    }
    Ok(ShotRecord {
        counts,
        total_shots: shots,
        seed,
    })
}

pub fn sample_shots(
    theta_w: f64,
    theta: f64,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<ShotRecord> {
    let table = exact_outcome_distribution(theta_w, theta, noise)?;
    sample_from_distribution(&table, shots, seed)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one (sweep point, repeat) task.
pub fn derive_seed(base: u64, sweep_index: usize, repeat_index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ sweep_index as u64) ^ repeat_index as u64)
}
