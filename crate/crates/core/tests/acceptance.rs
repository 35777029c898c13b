//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::process::Command as Process;
use std::time::{Duration, Instant};

use gatesplit::cli::{parse_args, run};
use gatesplit::experiments::report::{read_sampling_csv, svg_y_to_fidelity};
use gatesplit::experiments::{cube_roots_gate, published_locals, run_figure2_experiment, run_theorem_validation};
use gatesplit::gate_io::fixture;
use gatesplit::linalg::{haar_unitary, UnitaryGate};
use gatesplit::rng::{domain, substream};
use gatesplit::spectral::{dmax_to_epsilon, epsilon_to_dmax, f_min_formula, gate_fidelity_min};
use gatesplit::{approx_separate, ProductAnsatz, PsoConfig};
use serde_json::Value;

// Criterion 1
const CNOT_MIN_FIDELITY: f64 = 0.70;
const CNOT_MAX_DMAX: f64 = 1.42;
const CNOT_RESTART_DMAX: f64 = 1.45;
const CNOT_RESTARTS_REQUIRED: usize = 3;
const CNOT_TIME_LIMIT: Duration = Duration::from_secs(60);
// Criterion 2
const PUBLISHED_FIDELITY: f64 = 0.7063;
const PUBLISHED_FIDELITY_TOL: f64 = 0.005;
const PUBLISHED_DMAX: f64 = 1.4159;
const PUBLISHED_DMAX_TOL: f64 = 0.01;
// Criterion 3
const THEOREM_TRIALS: usize = 200;
const THEOREM_DIM: usize = 4;
const THEOREM_SEED: u64 = 7;
const FORMULA_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-3;
const THEOREM_TIME_LIMIT: Duration = Duration::from_secs(10);
// Criterion 4
const CUBE_FORMULA: f64 = 0.5;
const CUBE_TOL: f64 = 1e-12;
// Criterion 5
const FIGURE2_STATES: usize = 1000;
const FIGURE2_MIN: f64 = 0.7043;
const FIGURE2_MAX: f64 = 0.95;
const FIGURE2_TIME_LIMIT: Duration = Duration::from_secs(5);
// Criterion 6
const INVERSE_TOL: f64 = 1e-12;
const GRID_POINTS: usize = 1000;
const PUBLISHED_EPSILON: f64 = 0.2937;
const PUBLISHED_DMAX_BAND: (f64, f64) = (1.4155, 1.4161);
// Criterion 7
const SEPARABLE_TARGETS: u64 = 20;
const SEPARABLE_EPS: f64 = 1e-5;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cli_json(argv: &[&str]) -> Result<Value, String> {
    let cmd = parse_args(argv.iter().copied()).map_err(|e| e.to_string())?;
    let text = run(&cmd).map_err(|e| e.diagnostic())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn cnot_separation() -> Outcome {
    let start = Instant::now();
    let v = cli_json(&["separate", "--target", "cnot", "--dims", "2,2", "--seed", "42"])?;
    let elapsed = start.elapsed();
    let f_min = v["f_min"].as_f64().ok_or("missing f_min")?;
    let d_max = v["d_max"].as_f64().ok_or("missing d_max")?;
    let finals: Vec<f64> = v["pso"]["history"]
        .as_array()
        .ok_or("missing history")?
        .iter()
        .map(|h| h.as_array().and_then(|a| a.last()).and_then(Value::as_f64).unwrap_or(f64::INFINITY))
        .collect();
    let good = finals.iter().filter(|&&d| d <= CNOT_RESTART_DMAX).count();
    check(
        f_min >= CNOT_MIN_FIDELITY
            && d_max <= CNOT_MAX_DMAX
            && good >= CNOT_RESTARTS_REQUIRED
            && finals.len() == 5
            && elapsed <= CNOT_TIME_LIMIT,
        format!("f_min={f_min:.6} d_max={d_max:.6} restarts<=1.45: {good}/{} in {elapsed:.2?}", finals.len()),
    )
}

fn fixture_consistency() -> Outcome {
    let published = published_locals().map_err(|e| e.to_string())?;
    let product = UnitaryGate::tensor_product(&published.locals).map_err(|e| e.to_string())?;
    let r = gate_fidelity_min(&fixture("cnot").unwrap(), &product).map_err(|e| e.to_string())?;
    check(
        (r.f_min - PUBLISHED_FIDELITY).abs() <= PUBLISHED_FIDELITY_TOL && (r.d_max - PUBLISHED_DMAX).abs() <= PUBLISHED_DMAX_TOL,
        format!("f_min={:.6} d_max={:.6} corrections={:?}", r.f_min, r.d_max, published.corrections),
    )
}

fn theorem_verification() -> Outcome {
    let start = Instant::now();
    let r = run_theorem_validation(THEOREM_TRIALS, THEOREM_DIM, THEOREM_SEED).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(
        r.max_abs_error <= FORMULA_TOL
            && r.max_oracle_gap <= ORACLE_TOL
            && r.min_oracle_gap >= -ORACLE_TOL
            && r.trials == THEOREM_TRIALS
            && elapsed <= THEOREM_TIME_LIMIT,
        format!(
            "semicircle={} invalid={} max_abs_error={:.3e} oracle_gap=[{:.3e}, {:.3e}] in {elapsed:.2?}",
            r.semicircle_cases, r.invalid_cases, r.max_abs_error, r.min_oracle_gap, r.max_oracle_gap
        ),
    )
}

fn theorem_caveat() -> Outcome {
    let roots = cube_roots_gate();
    let id = UnitaryGate::identity(vec![3]).unwrap();
    // V†U = diag(1, ω, ω²)
    let v = UnitaryGate::single(roots.matrix().adjoint()).unwrap();
    let r = gate_fidelity_min(&id, &v).map_err(|e| e.to_string())?;
    let formula = f_min_formula(r.d_max).map_err(|e| e.to_string())?;
    check(
        r.f_min == 0.0 && (formula - CUBE_FORMULA).abs() <= CUBE_TOL && !r.formula_valid,
        format!("exact={} formula={formula:.15} formula_valid={}", r.f_min, r.formula_valid),
    )
}

fn figure2() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r = run_figure2_experiment(FIGURE2_STATES, 42, Some(dir.path())).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let csv = read_sampling_csv(&dir.path().join("figure2_samples.csv")).map_err(|e| e.to_string())?;
    let csv_ok = csv.len() == r.n && csv.iter().zip(&r.fidelities).all(|(a, b)| (a - b).abs() <= 1e-12);
    let svg = std::fs::read_to_string(dir.path().join("figure2_scatter.svg")).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&svg).map_err(|e| e.to_string())?;
    let ys: Vec<f64> = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle"))
        .filter_map(|n| n.attribute("cy")?.parse().ok())
        .map(svg_y_to_fidelity)
        .collect();
    let svg_ok = ys.len() == r.n && ys.iter().zip(&r.fidelities).all(|(a, b)| (a - b).abs() < 1e-4);
    let (min, max) = (r.min_fidelity.unwrap_or(0.0), r.max_fidelity.unwrap_or(0.0));
    check(
        min >= FIGURE2_MIN && max >= FIGURE2_MAX && csv_ok && svg_ok && elapsed <= FIGURE2_TIME_LIMIT,
        format!("min={min:.6} max={max:.6} bound={:.6} csv={csv_ok} svg={svg_ok} in {elapsed:.2?}", r.bound),
    )
}

fn threshold_algebra() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..GRID_POINTS {
        let eps = 0.99 * k as f64 / (GRID_POINTS - 1) as f64;
        let d = epsilon_to_dmax(eps).map_err(|e| e.to_string())?;
        let back = dmax_to_epsilon(d).map_err(|e| e.to_string())?;
        worst = worst.max((back - eps).abs());
    }
    let d = epsilon_to_dmax(PUBLISHED_EPSILON).map_err(|e| e.to_string())?;
    check(
        worst <= INVERSE_TOL && d >= PUBLISHED_DMAX_BAND.0 && d <= PUBLISHED_DMAX_BAND.1,
        format!("max round-trip error={worst:.3e} d(0.2937)={d:.6}"),
    )
}

fn separable_targets() -> Outcome {
    let ansatz = ProductAnsatz::new(&[2, 2]).unwrap();
    let mut worst = f64::INFINITY;
    for i in 0..SEPARABLE_TARGETS {
        let mut rng = substream(2024, domain::SEPARABLE_TARGETS, i);
        let target = UnitaryGate::tensor_product(&[haar_unitary(2, &mut rng), haar_unitary(2, &mut rng)]).map_err(|e| e.to_string())?;
        let r = approx_separate(&target, "product", &ansatz, &PsoConfig::default().with_seed(i)).map_err(|e| e.to_string())?;
        worst = worst.min(r.f_min);
    }
    check(worst >= 1.0 - SEPARABLE_EPS, format!("worst f_min={worst:.12} over {SEPARABLE_TARGETS} targets"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let gate_file = dir.path().join("cz.json");
    let gate_path = gate_file.to_str().unwrap();
    std::fs::write(&gate_file, gatesplit::gate_io::gate_to_json(&fixture("cz").unwrap())).map_err(|e| e.to_string())?;
    let commands: Vec<Vec<&str>> = vec![
        vec!["fidelity", "--a", "cnot", "--b", gate_path],
        vec!["separate", "--target", "cnot", "--dims", "2,2", "--epsilon", "0.3", "--seed", "42"],
        vec!["experiment", "cnot", "--seed", "42"],
        vec!["experiment", "figure2", "--seed", "42"],
        vec!["theorem", "--trials", "200", "--dim", "4", "--seed", "7"],
        vec!["convert", "--gate", "swap"],
    ];
    let exe = env!("CARGO_BIN_EXE_gatesplit");
    let mut mismatches = Vec::new();
    for args in &commands {
        let mut outputs = Vec::new();
        for threads in [None, Some("1"), Some("2"), Some("4"), None] {
            let mut p = Process::new(exe);
            p.args(args);
            match threads {
                Some(t) => p.env("GATESPLIT_THREADS", t),
                None => p.env_remove("GATESPLIT_THREADS"),
            };
            let out = p.output().map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{args:?} exited with {:?}", out.status.code()));
            }
            outputs.push(out.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            mismatches.push(args[0..2].join(" "));
        }
    }
    check(
        mismatches.is_empty(),
        format!("{} commands x 5 runs (threads unset/1/2/4/unset); mismatches: {mismatches:?}", commands.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 CNOT separation", cnot_separation),
        ("2 published fixture consistency", fixture_consistency),
        ("3 chord formula and oracle agreement", theorem_verification),
        ("4 cube-roots caveat witness", theorem_caveat),
        ("5 random-state sampling reproduction", figure2),
        ("6 threshold algebra", threshold_algebra),
        ("7 separable-target recovery", separable_targets),
        ("8 determinism across thread counts", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
