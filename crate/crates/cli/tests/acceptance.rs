// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};

use edr_core::edr::{effective_bound, EdrInputs, StrongBranciard, UncertaintyRelation};
use edr_core::estimators::{exact_joint_distributions, oracle_values, weak_valued_rms};
use edr_core::meas_model::{commutator_bound, exact_disturbance, exact_error, r_state};
use edr_core::noise::CalibrationProfile;
use edr_core::qsim::{gates, ComplexMatrix, DensityMatrix};
use edr_core::sweep::{grid, run_sweep, Mode, SweepConfig, SweepRow};

const PROBE_STRENGTH: f64 = 0.05;
const SEED: u64 = 20_240_601;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn probe_angle() -> f64 {
    PROBE_STRENGTH.acos()
}

// ---- independent 4x4 arithmetic for the operator-definition oracle ----

type M2 = [[C; 2]; 2];
type M4 = [[C; 4]; 4];

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn kron(a: &M2, b: &M2) -> M4 {
    let mut out = [[c(0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn mul(a: &M4, b: &M4) -> M4 {
    let mut out = [[c(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn dagger(a: &M4) -> M4 {
    let mut out = [[c(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

fn sub(a: &M4, b: &M4) -> M4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

fn trace(a: &M4) -> C {
    (0..4).map(|i| a[i][i]).sum()
}

/// √tr(ρ ⊗ σ · N²) and √tr(ρ ⊗ σ · D²) for a CNOT-coupled meter prepared
/// in Ry(acos s)|0⟩.
fn brute_force_error_disturbance(rho: &M2, strength: f64) -> (f64, f64) {
    let one = c(1.0);
    let zero = c(0.0);
    let id: M2 = [[one, zero], [zero, one]];
    let z: M2 = [[one, zero], [zero, -one]];
    let x: M2 = [[zero, one], [one, zero]];
    let mut u = [[zero; 4]; 4];
    u[0][0] = one;
    u[1][1] = one;
    u[2][3] = one;
    u[3][2] = one;
    let half = strength.acos() / 2.0;
    let (cm, sm) = (half.cos(), half.sin());
    let meter: M2 = [[c(cm * cm), c(cm * sm)], [c(cm * sm), c(sm * sm)]];
    let input = kron(rho, &meter);

    let n = sub(&mul(&mul(&dagger(&u), &kron(&id, &z)), &u), &kron(&z, &id));
    let bx = kron(&x, &id);
    let d = sub(&mul(&mul(&dagger(&u), &bx), &u), &bx);
    let eps2 = trace(&mul(&input, &mul(&n, &n))).re;
    let eta2 = trace(&mul(&input, &mul(&d, &d))).re;
    (eps2.max(0.0).sqrt(), eta2.max(0.0).sqrt())
}

fn random_qubit_state(rng: &mut impl Rng) -> M2 {
    let r = loop {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        if v.iter().map(|a| a * a).sum::<f64>() <= 1.0 {
            break v;
        }
    };
    [
        [c((1.0 + r[2]) / 2.0), C::new(r[0] / 2.0, -r[1] / 2.0)],
        [C::new(r[0] / 2.0, r[1] / 2.0), c((1.0 - r[2]) / 2.0)],
    ]
}

fn to_density(m: &M2) -> DensityMatrix {
    let data = vec![m[0][0], m[0][1], m[1][0], m[1][1]];
    DensityMatrix::from_matrix(ComplexMatrix::new(2, 2, data).unwrap()).unwrap()
}

// ---- criteria ----

fn oracle_equivalence() -> Verdict {
    let mut rng = rand::rngs::StdRng::seed_from_u64(SEED);
    let mut states: Vec<M2> = (0..19).map(|_| random_qubit_state(&mut rng)).collect();
    let h = FRAC_1_SQRT_2 * FRAC_1_SQRT_2;
    states.push([[c(h), C::new(0.0, h)], [C::new(0.0, -h), c(h)]]);
    let mut worst = 0.0f64;
    for s in grid(21) {
        for m in &states {
            let (e, d) = brute_force_error_disturbance(m, s);
            let rho = to_density(m);
            worst = worst
                .max((exact_error(&rho, s).unwrap() - e).abs())
                .max((exact_disturbance(&rho, s).unwrap() - d).abs());
        }
    }
    verdict(worst <= 1e-12, format!("21 strengths x 20 states, max deviation {worst:.2e}"))
}

fn exact_rows() -> Vec<SweepRow> {
    run_sweep(&SweepConfig {
        mode: Mode::Exact,
        ..SweepConfig::default()
    })
    .unwrap()
}

fn closed_form_curves() -> Verdict {
    let mut worst = 0.0f64;
    for row in exact_rows() {
        let s = row.strength;
        let eps = (2.0 * (1.0 - s)).sqrt();
        let eta = (2.0 * (1.0 - (1.0 - s * s).sqrt())).sqrt();
        worst = worst
            .max((row.oracle_epsilon - eps).abs())
            .max((row.oracle_eta - eta).abs());
    }
    verdict(worst <= 1e-12, format!("max deviation {worst:.2e}"))
}

fn saturation() -> Verdict {
    let mut worst = 0.0f64;
    let mut estimated = 0.0f64;
    for row in exact_rows() {
        let lhs = StrongBranciard
            .lhs(&EdrInputs::ideal(row.oracle_epsilon, row.oracle_eta).unwrap())
            .unwrap();
        worst = worst.max((lhs - 1.0).abs());
        estimated = estimated.max((row.relation("strong_branciard").unwrap().lhs - 1.0).abs());
    }
    verdict(
        worst < 1e-9,
        format!("max |lhs - 1| {worst:.2e}; on probe estimates {estimated:.2e}"),
    )
}

fn reference_point_values() -> Verdict {
    let b = effective_bound(probe_angle());
    let c_r = commutator_bound(&r_state(), &gates::pauli_z(), &gates::pauli_x()).unwrap();
    let y = r_state().expectation(&gates::pauli_y()).unwrap().abs();
    verdict(
        (b - 0.995).abs() <= 5e-4 && (c_r - 1.0).abs() <= 1e-12 && (y - 1.0).abs() <= 1e-12,
        format!("effective bound {b:.6}, |<[Z,X]>|/2 on |R> {c_r}, |<Y>| {y}"),
    )
}

fn margin(row: &SweepRow, name: &str) -> (f64, f64) {
    let col = row.relation(name).unwrap();
    (col.lhs, 3.0 * col.lhs_rms / (row.repeats as f64).sqrt())
}

fn holds_statistically(row: &SweepRow, name: &str) -> bool {
    let (lhs, m) = margin(row, name);
    lhs + m >= row.c - 1e-9
}

fn heisenberg_and_validity(rows: &[SweepRow]) -> Verdict {
    let bound = effective_bound(probe_angle());
    let last = rows.len() - 1;
    let mut worst_gap = f64::INFINITY;
    let mut violated_everywhere = true;
    for row in &rows[1..last] {
        let (lhs, m) = margin(row, "heisenberg");
        worst_gap = worst_gap.min(bound - (lhs + m));
        violated_everywhere &= lhs + m < bound;
    }
    let failures: Vec<String> = rows
        .iter()
        .flat_map(|r| {
            ["ozawa", "branciard", "strong_branciard"]
                .into_iter()
                .filter(|n| !holds_statistically(r, n))
                .map(move |n| format!("{n}@{}", r.strength))
        })
        .collect();
    verdict(
        violated_everywhere && failures.is_empty(),
        format!(
            "heisenberg below {bound:.5} by >= {worst_gap:.3} beyond 3 margins; relations failing: {}",
            if failures.is_empty() { "none".to_string() } else { failures.join(" ") }
        ),
    )
}

fn statistical_scale(rows: &[SweepRow]) -> Verdict {
    let worst = rows
        .iter()
        .map(|r| r.epsilon_rms.max(r.eta_rms))
        .fold(0.0f64, f64::max);
    let best = rows
        .iter()
        .map(|r| r.epsilon_rms.max(r.eta_rms))
        .fold(f64::INFINITY, f64::min);
    let over = rows.iter().filter(|r| r.epsilon_rms.max(r.eta_rms) >= 0.02).count();
    verdict(
        over == 0,
        format!("rms range {best:.3}..{worst:.3}; {over}/{} points at or above 0.02", rows.len()),
    )
}

fn noisy_floors() -> Verdict {
    let rows = run_sweep(&SweepConfig {
        mode: Mode::Both,
        noise: Some(CalibrationProfile::representative()),
        ..SweepConfig::default()
    })
    .unwrap();
    let n = rows.len() / 2;
    let (exact, sampled) = rows.split_at(n);
    let eta_in = |r: &SweepRow| (0.45..=0.75).contains(&r.eta_mean);
    let eps_in = |r: &SweepRow| (0.25..=0.55).contains(&r.epsilon_mean);
    let floors_ok = eta_in(&exact[0]) && eps_in(&exact[n - 1]) && eta_in(&sampled[0]) && eps_in(&sampled[n - 1]);
    let exact_ok = exact.iter().all(|r| {
        ["ozawa", "branciard", "strong_branciard"]
            .iter()
            .all(|name| r.relation(name).unwrap().satisfied)
    });
    let sampled_ok = sampled.iter().all(|r| {
        ["ozawa", "branciard", "strong_branciard"]
            .iter()
            .all(|name| holds_statistically(r, name))
    });
    verdict(
        floors_ok && exact_ok && sampled_ok,
        format!(
            "eta(0) exact {:.3} sampled {:.3}; eps(1) exact {:.3} sampled {:.3}; relations hold: {}",
            exact[0].eta_mean,
            sampled[0].eta_mean,
            exact[n - 1].epsilon_mean,
            sampled[n - 1].epsilon_mean,
            exact_ok && sampled_ok
        ),
    )
}

fn run_cli(dir: &Path, name: &str, format: &str, threads: &str) -> Vec<u8> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_edrsim"))
        .env_remove("EDRSIM_OUT_DIR")
        .args(["--threads", threads, "sweep", "--seed", "7", "--format", format, "--out"])
        .arg(&out)
        .status()
        .expect("spawn edrsim");
    assert!(status.success(), "edrsim exited with {status}");
    std::fs::read(out).unwrap()
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut same = true;
    let mut sizes = Vec::new();
    for format in ["csv", "json"] {
        let a = run_cli(dir.path(), &format!("a.{format}"), format, "1");
        let b = run_cli(dir.path(), &format!("b.{format}"), format, "1");
        let c = run_cli(dir.path(), &format!("c.{format}"), format, "4");
        same &= !a.is_empty() && a == b && a == c;
        sizes.push(format!("{format} {} bytes", a.len()));
    }
    verdict(same, format!("runs with 1, 1 and 4 threads identical: {same} ({})", sizes.join(", ")))
}

fn estimator_bias() -> Verdict {
    let tw = probe_angle();
    let limit = 2.0 * (1.0 - tw.sin()) + 1e-9;
    let (mut worst_sq, mut worst_root) = (0.0f64, 0.0f64);
    for s in grid(21) {
        let theta = s.acos();
        let (z, x) = exact_joint_distributions(tw, theta, None).unwrap();
        let eps2 = weak_valued_rms(&z, PROBE_STRENGTH).unwrap();
        let eta2 = weak_valued_rms(&x, PROBE_STRENGTH).unwrap();
        let o = oracle_values(tw, theta, None).unwrap();
        worst_sq = worst_sq
            .max((eps2 - o.epsilon.powi(2)).abs())
            .max((eta2 - o.eta.powi(2)).abs());
        worst_root = worst_root
            .max((eps2.max(0.0).sqrt() - o.epsilon).abs())
            .max((eta2.max(0.0).sqrt() - o.eta).abs());
    }
    verdict(
        worst_sq <= limit,
        format!(
            "weak-valued squares off by <= {worst_sq:.4e} (limit {limit:.4e}); root scale {worst_root:.4}"
        ),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, title: &str, limit: Duration, f: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = v.passed && in_time;
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {id}: {} {title} ({}; {:.2}s{})",
            if passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time limit" }
        );
    };

    let second = Duration::from_secs(1);
    let two_min = Duration::from_secs(120);
    report(1, "operator-definition oracle equivalence", second, &mut oracle_equivalence);
    report(2, "closed-form error and disturbance curves", second, &mut closed_form_curves);
    report(3, "strong Branciard saturation", second, &mut saturation);
    report(4, "effective bound and commutator values", second, &mut reference_point_values);

    let start = Instant::now();
    let sampled = run_sweep(&SweepConfig::default()).unwrap();
    let sweep_time = start.elapsed();
    report(5, "Heisenberg violation and universal validity", two_min, &mut || {
        let v = heisenberg_and_validity(&sampled);
        Verdict {
            detail: format!("{}; sweep {:.2}s", v.detail, sweep_time.as_secs_f64()),
            passed: v.passed && sweep_time <= two_min,
        }
    });
    report(6, "sampled rms below 0.02", two_min, &mut || statistical_scale(&sampled));
    report(7, "noisy floors", two_min, &mut noisy_floors);
    report(8, "byte-identical sweep output", two_min, &mut determinism);
    report(9, "estimator bias bound", second, &mut estimator_bias);

    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
