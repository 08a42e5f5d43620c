// SPDX-License-Identifier: Apache-2.0

use super::{gates, ComplexMatrix, QsimError, EQ_TOL};

/// Kraus operators below this Frobenius norm are dropped on construction.
const NEGLIGIBLE_KRAUS: f64 = 1e-15;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    num_qubits: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shapes and completeness Σ K†K = I.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self, QsimError> {
        let first = operators.first().ok_or(QsimError::EmptyMatrix)?;
        let num_qubits = first
            .qubit_count()
            .ok_or(QsimError::NotQubitDimension(first.rows()))?;
        if let Some(bad) = operators
            .iter()
            .find(|k| !k.is_square() || k.rows() != first.rows())
        {
            return Err(QsimError::DimensionMismatch {
                expected: first.rows(),
                found: bad.rows(),
            });
        }
        let operators: Vec<_> = operators
            .into_iter()
            .filter(|k| k.frobenius_norm() > NEGLIGIBLE_KRAUS)
            .collect();
        let channel = Self {
            num_qubits,
            operators,
        };
        let defect = channel.completeness_defect();
        if !(defect <= EQ_TOL) {
            return Err(QsimError::IncompleteKraus(defect));
        }
        Ok(channel)
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            operators: vec![ComplexMatrix::identity(1 << num_qubits)],
        }
    }

    /// ρ → (1 − p) ρ + p I/d on `num_qubits` qubits, p ∈ [0, d²/(d²−1)].
    pub fn depolarizing(num_qubits: usize, p: f64) -> Result<Self, QsimError> {
        let d2 = (1usize << (2 * num_qubits)) as f64;
        let p_max = d2 / (d2 - 1.0);
        if !(0.0..=p_max).contains(&p) {
            return Err(QsimError::InvalidParameter(format!(
                "depolarizing parameter {p} outside [0, {p_max}]"
            )));
        }
        let mut ops = Vec::with_capacity(d2 as usize);
        for (idx, pauli) in pauli_strings(num_qubits).into_iter().enumerate() {
            let weight = if idx == 0 {
                1.0 - p + p / d2
            } else {
                p / d2
            };
            ops.push(pauli.scale_real(weight.max(0.0).sqrt()));
        }
        Self::new(ops)
    }

    /// Z-dephasing that multiplies single-qubit coherences by `coherence` ∈ [0, 1].
    pub fn dephasing(coherence: f64) -> Result<Self, QsimError> {
        if !(0.0..=1.0).contains(&coherence) {
            return Err(QsimError::InvalidParameter(format!(
                "dephasing coherence factor {coherence} outside [0, 1]"
            )));
        }
        Self::new(vec![
            gates::identity().scale_real(((1.0 + coherence) / 2.0).sqrt()),
            gates::pauli_z().scale_real(((1.0 - coherence) / 2.0).sqrt()),
        ])
    }

    /// Energy relaxation |1⟩ → |0⟩ with probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self, QsimError> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(QsimError::InvalidParameter(format!(
                "damping probability {gamma} outside [0, 1]"
            )));
        }
        let k0 = ComplexMatrix::diagonal(&[1.0, (1.0 - gamma).sqrt()]);
        let k1 = ComplexMatrix::from_real(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0])?;
        Self::new(vec![k0, k1])
    }

    /// Amplitude damping with γ = 1 − exp(−t/T1) followed by pure dephasing
    /// chosen so coherences decay by exactly exp(−t/T2) overall.
    ///
    /// Times share any unit; `t1` and `t2` may be infinite.
    pub fn thermal_relaxation(duration: f64, t1: f64, t2: f64) -> Result<Self, QsimError> {
        if !(duration >= 0.0) || !(t1 > 0.0) || !(t2 > 0.0) {
            return Err(QsimError::InvalidParameter(format!(
                "relaxation needs duration ≥ 0 and positive T1, T2 (got t={duration}, T1={t1}, T2={t2})"
            )));
        }
        if t2 > 2.0 * t1 {
            return Err(QsimError::InvalidParameter(format!(
                "T2 = {t2} exceeds 2·T1 = {}",
                2.0 * t1
            )));
        }
        let gamma = -(-duration / t1).exp_m1();
        // remaining coherence decay after the √(1−γ) from damping
        let rate = 1.0 / t2 - 0.5 / t1;
        let coherence = (-duration * rate.max(0.0)).exp().min(1.0);
        let damping = Self::amplitude_damping(gamma)?;
        damping.then(&Self::dephasing(coherence)?)
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel, QsimError> {
        if self.num_qubits != next.num_qubits {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim(),
                found: next.dim(),
            });
        }
        let mut ops = Vec::with_capacity(self.operators.len() * next.operators.len());
        for b in &next.operators {
            for a in &self.operators {
                ops.push(b * a);
            }
        }
        Self::new(ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// max |Σ K†K − I|
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim(), self.dim());
        for k in &self.operators {
            sum = &sum + &(&k.dagger() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    /// Σ K K† = I
    pub fn is_unital(&self, tol: f64) -> bool {
        let mut sum = ComplexMatrix::zeros(self.dim(), self.dim());
        for k in &self.operators {
            sum = &sum + &(k * &k.dagger());
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim())) <= tol
    }

    /// Whether the channel acts as the identity map, checked on its
    /// superoperator Σ K ⊗ K*.
    pub fn is_identity(&self, tol: f64) -> bool {
        let d = self.dim();
        let mut superop = ComplexMatrix::zeros(d * d, d * d);
        for k in &self.operators {
            superop = &superop + &k.kron(&conj_entries(k));
        }
        superop.max_abs_diff(&ComplexMatrix::identity(d * d)) <= tol
    }
}

fn conj_entries(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::new(
        m.rows(),
        m.cols(),
        m.as_slice().iter().map(|z| z.conj()).collect(),
    )
    .expect("same shape")
}

/// All n-qubit Pauli strings, identity first.
pub fn pauli_strings(num_qubits: usize) -> Vec<ComplexMatrix> {
    let mut out = vec![ComplexMatrix::identity(1)];
    for _ in 0..num_qubits {
        out = out
            .iter()
            .flat_map(|p| gates::paulis().into_iter().map(move |s| p.kron(&s)))
            .collect();
    }
    out
}
