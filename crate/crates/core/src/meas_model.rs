// SPDX-License-Identifier: Apache-2.0

//! Operator-level model of the indirect measurement: the two-outcome POVM
//! of a rotated-meter CNOT measurement and the operator definitions of
//! measurement error and disturbance. These serve as the exact reference
//! for the weak-probe estimators.

use crate::circuit::angle_from_strength;
use crate::qsim::{gates, ComplexMatrix, Complex64, DensityMatrix, QsimError, EQ_TOL};
use crate::{Error, Result};

/// Negative radicands smaller than this in magnitude are rounding residue.
const RADICAND_SLACK: f64 = 1e-12;

fn sqrt_clamped(x: f64, what: &str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x > -RADICAND_SLACK {
        Ok(0.0)
    } else {
        Err(QsimError::InvalidState(format!("{what} has negative square {x:e}")).into())
    }
}

fn check_strength(strength: f64) -> Result<f64> {
    Ok(angle_from_strength(strength)?)
}

/// Two-element POVM {(I + sZ)/2, (I − sZ)/2} of a measurement of strength s.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmPair {
    /// Effects for outcomes +1 and −1.
    pub elements: [ComplexMatrix; 2],
    pub strength: f64,
}

impl PovmPair {
    /// tr(ρ Π_outcome) for outcome index 0 (+1) or 1 (−1).
    pub fn probability(&self, state: &DensityMatrix, outcome: usize) -> Result<f64> {
        Ok(state.expectation(&self.elements[outcome])?)
    }
}

pub fn build_povm(strength: f64) -> Result<PovmPair> {
    check_strength(strength)?;
    let i = gates::identity();
    let sz = gates::pauli_z().scale_real(strength);
    Ok(PovmPair {
        elements: [(&i + &sz).scale_real(0.5), (&i - &sz).scale_real(0.5)],
        strength,
    })
}

/// System–meter measurement model: meter prepared in Ry(angle)|0⟩, coupled
/// by `interaction` on system ⊗ meter, then `meter_observable` read out.
#[derive(Clone, Debug)]
pub struct IndirectMeasurement {
    pub system_observable: ComplexMatrix,
    pub meter_observable: ComplexMatrix,
    pub interaction: ComplexMatrix,
    pub meter_init_angle: f64,
}

impl IndirectMeasurement {
    pub fn new(
        system_observable: ComplexMatrix,
        meter_observable: ComplexMatrix,
        interaction: ComplexMatrix,
        meter_init_angle: f64,
    ) -> Result<Self> {
        for (name, obs) in [("system", &system_observable), ("meter", &meter_observable)] {
            check_dichotomic(name, obs)?;
        }
        if interaction.rows() != 4 || !interaction.is_unitary(EQ_TOL) {
            return Err(Error::InvalidArgument(
                "interaction must be a 4x4 unitary on system ⊗ meter".into(),
            ));
        }
        if !meter_init_angle.is_finite() {
            return Err(Error::InvalidArgument("meter angle must be finite".into()));
        }
        Ok(Self {
            system_observable,
            meter_observable,
            interaction,
            meter_init_angle,
        })
    }

    /// CNOT-coupled Z meter of the given strength measuring Z.
    pub fn z_meter(strength: f64) -> Result<Self> {
        let angle = check_strength(strength)?;
        Self::new(gates::pauli_z(), gates::pauli_z(), gates::cnot(), angle)
    }

    pub fn meter_state(&self) -> DensityMatrix {
        let (s, c) = (self.meter_init_angle / 2.0).sin_cos();
        DensityMatrix::from_pure(&[Complex64::new(c, 0.0), Complex64::new(s, 0.0)])
            .expect("normalized by construction")
    }

    fn composite(&self, system: &DensityMatrix) -> Result<DensityMatrix> {
        if system.num_qubits() != 1 {
            return Err(Error::InvalidArgument(format!(
                "system state must be one qubit, got {}",
                system.num_qubits()
            )));
        }
        Ok(system.tensor(&self.meter_state())?)
    }

    /// √⟨N²⟩ with N = U†(I⊗M)U − A⊗I.
    pub fn error(&self, system: &DensityMatrix) -> Result<f64> {
        let u = &self.interaction;
        let i2 = gates::identity();
        let evolved_meter = &(&u.dagger() * &i2.kron(&self.meter_observable)) * u;
        let noise_op = &evolved_meter - &self.system_observable.kron(&i2);
        let sq = &noise_op * &noise_op;
        sqrt_clamped(self.composite(system)?.expectation(&sq)?, "error")
    }

    /// √⟨D²⟩ with D = U†(B⊗I)U − B⊗I.
    pub fn disturbance(&self, system: &DensityMatrix, observable: &ComplexMatrix) -> Result<f64> {
        check_dichotomic("disturbed", observable)?;
        let u = &self.interaction;
        let b = observable.kron(&gates::identity());
        let diff = &(&(&u.dagger() * &b) * u) - &b;
        let sq = &diff * &diff;
        sqrt_clamped(self.composite(system)?.expectation(&sq)?, "disturbance")
    }
}

fn check_dichotomic(name: &str, obs: &ComplexMatrix) -> Result<()> {
    let ok = obs.rows() == 2
        && obs.is_hermitian(EQ_TOL)
        && (obs * obs).max_abs_diff(&gates::identity()) <= EQ_TOL;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} observable must be a Hermitian qubit operator with eigenvalues ±1"
        )))
    }
}

/// ε(Z) of a Z measurement of the given strength on `system`.
pub fn exact_error(system: &DensityMatrix, strength: f64) -> Result<f64> {
    IndirectMeasurement::z_meter(strength)?.error(system)
}

/// η(X) inflicted by a Z measurement of the given strength on `system`.
pub fn exact_disturbance(system: &DensityMatrix, strength: f64) -> Result<f64> {
    IndirectMeasurement::z_meter(strength)?.disturbance(system, &gates::pauli_x())
}

/// √(⟨A²⟩ − ⟨A⟩²)
pub fn standard_deviation(state: &DensityMatrix, obs: &ComplexMatrix) -> Result<f64> {
    let mean = state.expectation(obs)?;
    let second = state.expectation(&(obs * obs))?;
    sqrt_clamped(second - mean * mean, "variance")
}

/// |⟨[A, B]⟩| / 2
pub fn commutator_bound(state: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != state.dim() || b.rows() != state.dim() {
        return Err(QsimError::DimensionMismatch {
            expected: state.dim(),
            found: if a.rows() != state.dim() { a.rows() } else { b.rows() },
        }
        .into());
    }
    if !a.is_hermitian(EQ_TOL) || !b.is_hermitian(EQ_TOL) {
        return Err(QsimError::NotHermitian.into());
    }
    // i[A, B] is Hermitian, so its mean is real
    let comm = &(a * b) - &(b * a);
    let herm = comm.scale(Complex64::new(0.0, 1.0));
    Ok(state.expectation(&herm)?.abs() / 2.0)
}

/// |R⟩ = (|0⟩ − i|1⟩)/√2, the −1 eigenstate of Y.
pub fn r_state() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_pure(&[Complex64::new(h, 0.0), Complex64::new(0.0, -h)])
        .expect("normalized")
}
