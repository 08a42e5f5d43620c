// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use super::{Circuit, GateOp};

/// Renders an OpenQASM 2.0 program. Classical bit `c[k]` holds the k-th
/// measurement; angles use the shortest round-trip decimal form.
pub fn export_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", circuit.num_qubits()).unwrap();
    if !circuit.measurements().is_empty() {
        writeln!(out, "creg c[{}];", circuit.measurements().len()).unwrap();
    }
    for op in circuit.ops() {
        match *op {
            GateOp::Rx { qubit, angle } => writeln!(out, "rx({angle:?}) q[{qubit}];"),
            GateOp::Ry { qubit, angle } => writeln!(out, "ry({angle:?}) q[{qubit}];"),
            GateOp::H { qubit } => writeln!(out, "h q[{qubit}];"),
            GateOp::X { qubit } => writeln!(out, "x q[{qubit}];"),
            GateOp::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
        }
        .unwrap();
    }
    for (k, m) in circuit.measurements().iter().enumerate() {
        writeln!(out, "measure q[{}] -> c[{k}]; // {}", m.qubit, m.label).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_edr_circuit, Measurement};
    use proptest::prelude::*;

    /// Structural re-parse of the exporter's own output.
    fn reparse(text: &str) -> (Vec<GateOp>, Vec<usize>) {
        let qubit = |s: &str| -> usize {
            let open = s.find('[').unwrap();
            let close = s.find(']').unwrap();
            s[open + 1..close].parse().unwrap()
        };
        let mut ops = Vec::new();
        let mut measured = Vec::new();
        for line in text.lines() {
            let line = line.split("//").next().unwrap().trim();
            let body = line.trim_end_matches(';');
            if let Some(rest) = body.strip_prefix("rx(").or_else(|| body.strip_prefix("ry(")) {
                let (angle, arg) = rest.split_once(')').unwrap();
                let angle: f64 = angle.parse().unwrap();
                let q = qubit(arg);
                ops.push(if body.starts_with("rx") {
                    GateOp::Rx { qubit: q, angle }
                } else {
                    GateOp::Ry { qubit: q, angle }
                });
            } else if let Some(arg) = body.strip_prefix("h ") {
                ops.push(GateOp::H { qubit: qubit(arg) });
            } else if let Some(arg) = body.strip_prefix("x ") {
                ops.push(GateOp::X { qubit: qubit(arg) });
            } else if let Some(args) = body.strip_prefix("cx ") {
                let (c, t) = args.split_once(',').unwrap();
                ops.push(GateOp::Cnot {
                    control: qubit(c),
                    target: qubit(t),
                });
            } else if let Some(args) = body.strip_prefix("measure ") {
                measured.push(qubit(args.split("->").next().unwrap()));
            }
        }
        (ops, measured)
    }

    #[test]
    fn header_and_single_gates() {
        let c = Circuit::new(
            4,
            vec![GateOp::H { qubit: 0 }, GateOp::Cnot { control: 1, target: 3 }],
            vec![],
        )
        .unwrap();
        let text = export_qasm(&c);
        assert!(text.starts_with("OPENQASM 2.0;\n"));
        assert!(text.lines().any(|l| l == "h q[0];"));
        assert!(text.lines().any(|l| l == "cx q[1],q[3];"));
        assert!(text.lines().any(|l| l == "qreg q[4];"));
        assert!(!text.contains("creg"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn edr_circuit_has_four_measurements() {
        let c = build_edr_circuit(1.52, 0.4).unwrap();
        let text = export_qasm(&c);
        assert_eq!(text.lines().filter(|l| l.starts_with("measure ")).count(), 4);
        assert!(text.contains("measure q[1] -> c[0]; // z_i"));
        assert!(text.contains("measure q[0] -> c[3]; // x_f"));
        assert_eq!(export_qasm(&c), text);
    }

    proptest! {
        #[test]
        fn export_reparse_round_trip(theta_w in 0.0..=std::f64::consts::FRAC_PI_2,
                                     theta in 0.0..=std::f64::consts::FRAC_PI_2) {
            let c = build_edr_circuit(theta_w, theta).unwrap();
            let (ops, measured) = reparse(&export_qasm(&c));
            prop_assert_eq!(ops, c.ops().to_vec());
            prop_assert_eq!(measured, c.measurements().iter().map(|m: &Measurement| m.qubit).collect::<Vec<_>>());
        }
    }
}
