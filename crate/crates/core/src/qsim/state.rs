// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ComplexMatrix, KrausChannel, QsimError, EQ_TOL, MAX_QUBITS, PSD_TOL};

/// Exact mixed state of an n-qubit register.
///
/// Qubit 0 is the most significant tensor factor: basis index bit
/// `n - 1 - q` carries qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

/// Precomputed index layout for acting on a subset of qubits.
struct Subsystem {
    /// Offsets of the 2^k sub-indices (targets[0] most significant).
    offsets: Vec<usize>,
    /// Full indices with every target bit cleared.
    bases: Vec<usize>,
}

impl Subsystem {
    fn new(num_qubits: usize, targets: &[usize]) -> Self {
        let k = targets.len();
        let positions: Vec<usize> = targets.iter().map(|&q| num_qubits - 1 - q).collect();
        let offsets = (0..1usize << k)
            .map(|s| {
                positions.iter().enumerate().fold(0, |acc, (j, &pos)| {
                    let bit = (s >> (k - 1 - j)) & 1;
                    acc | (bit << pos)
                })
            })
            .collect();
        let mask: usize = positions.iter().map(|&p| 1usize << p).sum();
        let bases = (0..1usize << num_qubits).filter(|i| i & mask == 0).collect();
        Self { offsets, bases }
    }

    /// Sub-index of a full basis index.
    fn gather(num_qubits: usize, targets: &[usize], index: usize) -> usize {
        targets
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((index >> (num_qubits - 1 - q)) & 1))
    }
}

impl DensityMatrix {
    /// |0…0⟩⟨0…0|
    pub fn zero_state(num_qubits: usize) -> Result<Self, QsimError> {
        check_qubit_count(num_qubits)?;
        let dim = 1 << num_qubits;
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        matrix.set(0, 0, Complex64::new(1.0, 0.0));
        Ok(Self { num_qubits, matrix })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self, QsimError> {
        check_qubit_count(num_qubits)?;
        let dim = 1 << num_qubits;
        Ok(Self {
            num_qubits,
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        })
    }

    /// Pure state from a normalized amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self, QsimError> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(QsimError::NotQubitDimension(dim));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > EQ_TOL {
            return Err(QsimError::InvalidState(format!(
                "amplitudes have squared norm {norm}"
            )));
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            matrix: ComplexMatrix::outer(amplitudes, amplitudes),
        })
    }

    /// Wraps a matrix after checking all density-matrix invariants.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self, QsimError> {
        let num_qubits = matrix
            .qubit_count()
            .filter(|&n| n >= 1)
            .ok_or(QsimError::NotQubitDimension(matrix.rows()))?;
        check_qubit_count(num_qubits)?;
        let state = Self { num_qubits, matrix };
        state.validate()?;
        Ok(state)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix, QsimError> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_qubit_count(num_qubits)?;
        Ok(Self {
            num_qubits,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// tr(ρ²)
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.as_slice().iter().map(|x| x.norm_sqr()).sum()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let m = &self.matrix;
        let herm = DMatrix::from_fn(dim, dim, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity, unit trace and positive semidefiniteness.
    pub fn validate(&self) -> Result<(), QsimError> {
        let defect = self.matrix.hermiticity_defect();
        if defect > EQ_TOL {
            return Err(QsimError::InvalidState(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let trace = self.matrix.trace();
        if (trace.re - 1.0).abs() > EQ_TOL || trace.im.abs() > EQ_TOL {
            return Err(QsimError::InvalidState(format!("trace is {trace}")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -PSD_TOL {
            return Err(QsimError::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    fn check_targets(&self, targets: &[usize]) -> Result<(), QsimError> {
        if targets.is_empty() {
            return Err(QsimError::InvalidTargets("empty target list".into()));
        }
        for (i, &q) in targets.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(QsimError::InvalidTargets(format!(
                    "qubit {q} out of range for {} qubits",
                    self.num_qubits
                )));
            }
            if targets[..i].contains(&q) {
                return Err(QsimError::InvalidTargets(format!("duplicate qubit {q}")));
            }
        }
        Ok(())
    }

    fn check_operator(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<(), QsimError> {
        let expected = 1usize << targets.len();
        if !op.is_square() || op.rows() != expected {
            return Err(QsimError::DimensionMismatch {
                expected,
                found: op.rows(),
            });
        }
        Ok(())
    }

    /// K ρ K† for an operator on `targets`, without validation.
    fn sandwich(&self, op: &ComplexMatrix, sub: &Subsystem) -> ComplexMatrix {
        let dim = self.dim();
        let ks = sub.offsets.len();
        let src = self.matrix.as_slice();
        let mut left = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut buf = vec![Complex64::new(0.0, 0.0); ks];

        // left multiply: columns are independent
        for &base in &sub.bases {
            for col in 0..dim {
                for (s, &off) in sub.offsets.iter().enumerate() {
                    buf[s] = src[(base | off) * dim + col];
                }
                for (i, &off) in sub.offsets.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, v) in buf.iter().enumerate() {
                        acc += op.get(i, j) * v;
                    }
                    left[(base | off) * dim + col] = acc;
                }
            }
        }

        // right multiply by K†: (ρ K†)[r][i] = Σ_j ρ[r][j] conj(K[i][j])
        let mut out = ComplexMatrix::zeros(dim, dim);
        let dst = out.as_mut_slice();
        for row in 0..dim {
            for &base in &sub.bases {
                for (s, &off) in sub.offsets.iter().enumerate() {
                    buf[s] = left[row * dim + (base | off)];
                }
                for (i, &off) in sub.offsets.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, v) in buf.iter().enumerate() {
                        acc += op.get(i, j).conj() * v;
                    }
                    dst[row * dim + (base | off)] = acc;
                }
            }
        }
        out
    }

    /// ρ → U ρ U† with `u` acting on `targets` (targets[0] is u's major index).
    pub fn apply_unitary(
        &self,
        u: &ComplexMatrix,
        targets: &[usize],
    ) -> Result<DensityMatrix, QsimError> {
        self.check_targets(targets)?;
        self.check_operator(u, targets)?;
        if !u.is_unitary(EQ_TOL) {
            return Err(QsimError::NotUnitary);
        }
        let sub = Subsystem::new(self.num_qubits, targets);
        let out = Self {
            num_qubits: self.num_qubits,
            matrix: self.sandwich(u, &sub),
        };
        debug_assert!(out.matrix.hermiticity_defect() < 1e-9);
        Ok(out)
    }

    /// ρ → Σ_k K_k ρ K_k† on `targets`.
    pub fn apply_channel(
        &self,
        channel: &KrausChannel,
        targets: &[usize],
    ) -> Result<DensityMatrix, QsimError> {
        self.check_targets(targets)?;
        if channel.num_qubits() != targets.len() {
            return Err(QsimError::DimensionMismatch {
                expected: 1 << targets.len(),
                found: channel.dim(),
            });
        }
        let sub = Subsystem::new(self.num_qubits, targets);
        let dim = self.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for k in channel.operators() {
            let term = self.sandwich(k, &sub);
            for (a, t) in acc.as_mut_slice().iter_mut().zip(term.as_slice()) {
                *a += t;
            }
        }
        let out = Self {
            num_qubits: self.num_qubits,
            matrix: acc,
        };
        debug_assert!((out.trace() - 1.0).abs() < 1e-9);
        Ok(out)
    }

    /// Reduced state over `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QsimError> {
        self.check_targets(keep)?;
        let traced: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let kept = Subsystem::new(self.num_qubits, keep);
        let out_dim = 1usize << keep.len();
        let traced_offsets: Vec<usize> = if traced.is_empty() {
            vec![0]
        } else {
            Subsystem::new(self.num_qubits, &traced).offsets
        };
        let mut out = ComplexMatrix::zeros(out_dim, out_dim);
        for (a, &ka) in kept.offsets.iter().enumerate() {
            for (b, &kb) in kept.offsets.iter().enumerate() {
                let sum: Complex64 = traced_offsets
                    .iter()
                    .map(|&t| self.matrix.get(ka | t, kb | t))
                    .sum();
                out.set(a, b, sum);
            }
        }
        Ok(Self {
            num_qubits: keep.len(),
            matrix: out,
        })
    }

    /// tr(ρ · obs) for a Hermitian observable on the full register.
    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64, QsimError> {
        if !observable.is_square() || observable.rows() != self.dim() {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim(),
                found: observable.rows(),
            });
        }
        if !observable.is_hermitian(EQ_TOL) {
            return Err(QsimError::NotHermitian);
        }
        let value = self.matrix.try_mul(observable)?.trace();
        if value.im.abs() > 1e-10 {
            return Err(QsimError::InvalidState(format!(
                "expectation has imaginary part {:e}",
                value.im
            )));
        }
        Ok(value.re)
    }

    /// Computational-basis outcome probabilities over `targets`
    /// (targets[0] is the most significant bit of the outcome index).
    pub fn measure_probabilities(&self, targets: &[usize]) -> Result<Vec<f64>, QsimError> {
        self.check_targets(targets)?;
        let mut probs = vec![0.0; 1 << targets.len()];
        for i in 0..self.dim() {
            probs[Subsystem::gather(self.num_qubits, targets, i)] += self.matrix.get(i, i).re;
        }
        Ok(probs)
    }
}

fn check_qubit_count(n: usize) -> Result<(), QsimError> {
    if n == 0 || n > MAX_QUBITS {
        Err(QsimError::QubitCount(n))
    } else {
        Ok(())
    }
}
