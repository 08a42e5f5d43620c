// SPDX-License-Identifier: Apache-2.0

//! Standard single- and two-qubit operators.
//!
//! Basis ordering follows the register convention: |0⟩ is the +1 eigenstate
//! of Z, and for two-qubit operators the first qubit is the major index.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::ComplexMatrix;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn square2(entries: [Complex64; 4]) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, entries.to_vec()).expect("2x2 literal")
}

pub fn identity() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn pauli_x() -> ComplexMatrix {
    square2([c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> ComplexMatrix {
    square2([c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> ComplexMatrix {
    square2([c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn hadamard() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    square2([c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)])
}

/// exp(-i θ X / 2)
pub fn rx(theta: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    square2([c(co, 0.), c(0., -s), c(0., -s), c(co, 0.)])
}

/// exp(-i θ Y / 2)
pub fn ry(theta: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    square2([c(co, 0.), c(-s, 0.), c(s, 0.), c(co, 0.)])
}

/// CNOT with the first qubit as control.
pub fn cnot() -> ComplexMatrix {
    &projector(0).kron(&identity()) + &projector(1).kron(&pauli_x())
}

/// Computational-basis projector |b⟩⟨b| for b ∈ {0, 1}.
pub fn projector(bit: u8) -> ComplexMatrix {
    match bit {
        0 => ComplexMatrix::diagonal(&[1.0, 0.0]),
        _ => ComplexMatrix::diagonal(&[0.0, 1.0]),
    }
}

/// The single-qubit Pauli basis {I, X, Y, Z}.
pub fn paulis() -> [ComplexMatrix; 4] {
    [identity(), pauli_x(), pauli_y(), pauli_z()]
}
