use gatesplit::experiments::report::{read_convergence_csv, read_sampling_csv, svg_y_to_fidelity, SVG_HEIGHT, SVG_WIDTH};
use gatesplit::experiments::{
    cube_roots_formula_gap, published_locals, run_cnot_experiment, run_figure2_experiment, run_state_sampling, run_theorem_validation,
};
use gatesplit::gate_io::fixture;
use gatesplit::linalg::haar_unitary;
use gatesplit::rng::substream;
use gatesplit::PsoConfig;

#[test]
fn sampled_fidelities_respect_gate_bound() {
    let cnot = fixture("cnot").unwrap();
    for seed in 0..50u64 {
        let mut rng = substream(seed, 77, 0);
        let locals = [haar_unitary(2, &mut rng), haar_unitary(2, &mut rng)];
        let r = run_state_sampling(&cnot, &locals, 200, seed).unwrap();
        assert!(r.min_fidelity.unwrap() >= r.bound - 1e-9, "seed {seed}");
    }
    let published = published_locals().unwrap();
    for seed in 0..50u64 {
        let r = run_state_sampling(&cnot, &published.locals, 200, seed).unwrap();
        assert!(r.min_fidelity.unwrap() >= r.bound - 1e-9, "seed {seed}");
    }
}

#[test]
fn figure2_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_figure2_experiment(300, 11, Some(dir.path())).unwrap();
    let csv = read_sampling_csv(&dir.path().join("figure2_samples.csv")).unwrap();
    assert_eq!(csv.len(), report.fidelities.len());
    for (a, b) in csv.iter().zip(&report.fidelities) {
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    let text = std::fs::read_to_string(dir.path().join("figure2_scatter.svg")).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("width"), Some(SVG_WIDTH.to_string().as_str()));
    assert_eq!(root.attribute("height"), Some(SVG_HEIGHT.to_string().as_str()));
    let circles: Vec<f64> = root
        .descendants()
        .filter(|n| n.has_tag_name("circle"))
        .map(|n| svg_y_to_fidelity(n.attribute("cy").unwrap().parse().unwrap()))
        .collect();
    assert_eq!(circles.len(), 300);
    for (a, b) in circles.iter().zip(&report.fidelities) {
        assert!((a - b).abs() < 1e-4);
    }
    let line = root.descendants().find(|n| n.attribute("id") == Some("bound")).unwrap();
    let y: f64 = line.attribute("y1").unwrap().parse().unwrap();
    assert!((svg_y_to_fidelity(y) - report.bound).abs() < 1e-4);
    assert!(!text.contains("href"));
}

#[test]
fn cnot_experiment_writes_monotone_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PsoConfig {
        iterations: 80,
        restarts: 2,
        ..PsoConfig::default()
    }
    .with_seed(42);
    let r = run_cnot_experiment(&cfg, Some(dir.path())).unwrap();
    let hist = read_convergence_csv(&dir.path().join("cnot_convergence.csv")).unwrap();
    assert_eq!(hist, r.pso.best_history());
    assert!(hist.windows(2).all(|w| w[1] <= w[0]));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cnot_result.json")).unwrap()).unwrap();
    assert_eq!(json["d_max"], serde_json::json!(r.d_max));
}

#[test]
fn cnot_experiment_is_deterministic() {
    let cfg = PsoConfig {
        iterations: 40,
        ..PsoConfig::default()
    }
    .with_seed(42);
    let a = serde_json::to_string(&run_cnot_experiment(&cfg, None).unwrap()).unwrap();
    let b = serde_json::to_string(&run_cnot_experiment(&cfg, None).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn minimal_swarm_keeps_identity_baseline() {
    let cfg = PsoConfig {
        swarm_size: 2,
        iterations: 1,
        restarts: 1,
        ..PsoConfig::default()
    };
    assert!(run_cnot_experiment(&cfg, None).unwrap().d_max <= 2.0);
}

#[test]
fn theorem_sweep_small() {
    let r = run_theorem_validation(40, 3, 5).unwrap();
    assert_eq!(r.trials, 40);
    assert_eq!(r.semicircle_cases + r.invalid_cases, 40);
    assert!(r.max_abs_error <= 1e-8);
    assert!(r.max_oracle_gap <= 1e-3);
    assert!(r.min_oracle_gap >= -1e-9);
    assert_eq!(r, run_theorem_validation(40, 3, 5).unwrap());
    let (exact, formula) = cube_roots_formula_gap();
    assert_eq!(exact, 0.0);
    assert!((formula - 0.5).abs() < 1e-12);
}
