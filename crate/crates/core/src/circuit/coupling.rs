// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use super::{Circuit, CircuitError, GateOp};

/// Undirected hardware connectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CouplingMap {
    pub fn new(
        num_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CircuitError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for q in [a, b] {
                if q >= num_qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        qubit: q,
                        num_qubits,
                    });
                }
            }
            if a == b {
                return Err(CircuitError::SameControlTarget(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            num_qubits,
            edges: set,
        })
    }

    /// One center qubit connected to each leaf.
    pub fn star(center: usize, leaves: &[usize]) -> Result<Self, CircuitError> {
        let n = leaves.iter().copied().chain([center]).max().unwrap_or(0) + 1;
        Self::new(n, leaves.iter().map(|&l| (center, l)))
    }

    /// Heavy-hex 7-qubit layout: 0-1, 1-2, 1-3, 3-5, 4-5, 5-6.
    pub fn falcon_7q() -> Self {
        Self::new(7, [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)]).expect("static map")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn connects(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

/// Logical-to-physical qubit assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout(Vec<usize>);

impl Layout {
    pub fn new(physical: Vec<usize>) -> Self {
        Self(physical)
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self((0..num_qubits).collect())
    }

    /// System on physical qubit 1 surrounded by probe Z (0), probe X (2)
    /// and meter (3).
    pub fn star_assignment() -> Self {
        Self(vec![1, 0, 2, 3])
    }

    pub fn physical(&self, logical: usize) -> Option<usize> {
        self.0.get(logical).copied()
    }
}

/// A two-qubit gate the hardware cannot run directly (physical indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub op_index: usize,
    pub control: usize,
    pub target: usize,
}

/// Two-qubit gates of `circuit` that do not sit on an edge of `map`, with
/// logical qubit `i` placed on physical qubit `layout[i]`.
pub fn validate_with_layout(circuit: &Circuit, map: &CouplingMap, layout: &Layout) -> Vec<Violation> {
    circuit
        .ops()
        .iter()
        .enumerate()
        .filter_map(|(op_index, op)| match *op {
            GateOp::Cnot { control, target } => {
                // unmapped logical qubits map past the end of the device
                let c = layout.physical(control).unwrap_or(usize::MAX);
                let t = layout.physical(target).unwrap_or(usize::MAX);
                (!map.connects(c, t)).then_some(Violation {
                    op_index,
                    control: c,
                    target: t,
                })
            }
            _ => None,
        })
        .collect()
}

/// [`validate_with_layout`] with the identity layout.
pub fn validate_against_coupling(circuit: &Circuit, map: &CouplingMap) -> Vec<Violation> {
    validate_with_layout(circuit, map, &Layout::identity(circuit.num_qubits()))
}
