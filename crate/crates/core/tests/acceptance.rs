//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::path::Path;
use std::time::{Duration, Instant};

use wmhd::experiments::selfcheck::{convolution_oracle, order_study, propagator_ode_check, ORDER_NAMES};
use wmhd::experiments::{run_lemma_check, run_local_existence, run_loss_of_smoothness, run_picard_contraction, RunConfig, Summary};
use wmhd::solver::{measure_operator_bounds, SolverConfig, StateVector, CALIBRATION_TIMES};
use wmhd::spectral::random::random_low_modes;
use wmhd::spectral::Lattice;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn failed_checks(s: &Summary) -> String {
    let bad: Vec<String> = s.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.message)).collect();
    if bad.is_empty() {
        "all checks passed".into()
    } else {
        bad.join("; ")
    }
}

fn config(dir: &Path) -> RunConfig {
    RunConfig {
        out_dir: dir.to_path_buf(),
        ..RunConfig::default()
    }
}

fn spectral_oracle() -> Outcome {
    let start = Instant::now();
    let worst = convolution_oracle(Lattice::new(4), 100, 2024).unwrap();
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && elapsed < Duration::from_secs(10),
        format!("max |fft − direct| = {worst:.2e} over 100 pairs at N=4 in {elapsed:.2?}"),
    )
}

fn propagator_ode() -> Outcome {
    let ms: Vec<usize> = (0..50).collect();
    let ts: Vec<f64> = (0..=200).map(|k| 0.01 * k as f64).collect();
    let (residual, initial) = propagator_ode_check(&ms, &ts, 1e-4);
    outcome(
        residual <= 1e-6 && initial <= 1e-8,
        format!("ODE residual {residual:.2e} (≤ 1e-6), initial-value error {initial:.2e} (≤ 1e-8), m = 0..49"),
    )
}

fn refinement_data() -> StateVector {
    let lat = Lattice::new(8);
    let v = random_low_modes(lat, 3, 101, 2, 0.1);
    let b = random_low_modes(lat, 3, 102, 2, 0.1);
    let e = random_low_modes(lat, 3, 103, 2, 0.1);
    StateVector::from_initial_data(&v, &b, &e).unwrap()
}

fn refinement() -> (Outcome, Outcome) {
    let study = order_study(&refinement_data(), &SolverConfig::default(), &[1e-2, 5e-3, 2.5e-3], 0.2, None).unwrap();
    let o = study.orders;
    let energy = outcome(
        o[0] >= 1.8 && study.energy_monotone,
        format!("energy-identity order {:.3} (≥ 1.8), energy non-increasing: {}", o[0], study.energy_monotone),
    );
    let detail: Vec<String> = ORDER_NAMES[1..].iter().zip(&o[1..]).map(|(n, p)| format!("{n} {p:.3}")).collect();
    let residuals = outcome(o[1..].iter().all(|&p| p >= 1.8), format!("residual orders {} (≥ 1.8)", detail.join(", ")));
    (energy, residuals)
}

fn conservation(dir: &Path) -> Outcome {
    let cfg = RunConfig {
        t_final: 0.5,
        ..config(dir)
    };
    let s = run_local_existence(&cfg).unwrap();
    let div = s.find("divergence_residual").unwrap();
    let mean = s.find("mean_B_mode").unwrap();
    outcome(
        div.passed && mean.passed,
        format!("to T=0.5 at N=8: max |B̂(0)| = {:.2e} (≤ 1e-12), max div residual = {:.2e} (≤ 1e-10)", mean.value, div.value),
    )
}

fn picard(dir: &Path) -> Outcome {
    let s = run_picard_contraction(&config(dir)).unwrap();
    let v = &s.values;
    outcome(
        s.passed,
        format!(
            "T* = {:.3e}, K1 = {:.3}, {} iterates, worst ratio j≥2 {:.3e}, self-consistency {:.2e}; {}",
            v["T_star"],
            v["K1"],
            v["iterates"],
            s.find("ratio_from_j2").unwrap().value,
            s.find("self_consistency").unwrap().value,
            failed_checks(&s)
        ),
    )
}

fn operator_bounds() -> Outcome {
    let per_n: Vec<[f64; 6]> = [4, 8, 16]
        .iter()
        .map(|&n| measure_operator_bounds(Lattice::new(n), 0.1, 7, 4, &CALIBRATION_TIMES).unwrap().constants)
        .collect();
    let mut worst: f64 = 1.0;
    let mut finite = true;
    for k in 0..6 {
        let vals: Vec<f64> = per_n.iter().map(|c| c[k]).collect();
        finite &= vals.iter().all(|v| v.is_finite() && *v > 0.0);
        let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        worst = worst.max(hi / lo);
    }
    outcome(
        finite && worst < 2.0,
        format!("largest max/min of c_1..c_6 across N ∈ {{4,8,16}}: {worst:.3} (< 2); N=16 constants {:.3?}", per_n[2]),
    )
}

fn loss(dir: &Path) -> Outcome {
    let cfg = RunConfig {
        n: 16,
        dt: 0.02,
        delta: 0.5,
        ..config(dir)
    };
    let start = Instant::now();
    let s = run_loss_of_smoothness(&cfg).unwrap();
    let elapsed = start.elapsed();
    let v = &s.values;
    outcome(
        s.passed && elapsed < Duration::from_secs(120),
        format!(
            "linear exponent {:.3} (target {:.2} ± 0.2), control {:.3} (< −8), nonlinear deviation {:.2e} (< 0.1), {elapsed:.1?}",
            v["linear_exponent"], v["expected_exponent"], v["control_exponent"], v["nonlinear_deviation"]
        ),
    )
}

fn lemma(dir: &Path) -> Outcome {
    let s = run_lemma_check(&config(dir)).unwrap();
    let ratios: Vec<String> = s
        .values
        .iter()
        .filter(|(k, _)| k.ends_with("_n15"))
        .map(|(k, v)| format!("{}={v:.3}", k.trim_start_matches("max_ratio_").trim_end_matches("_n15")))
        .collect();
    outcome(s.passed, format!("max ratios at n_max=15: {}; {}", ratios.join(" "), failed_checks(&s)))
}

fn determinism(base: &Path) -> Outcome {
    let run = |sub: &str| {
        let mut cfg = config(&base.join(sub));
        cfg.n = 6;
        cfg.t_final = 0.1;
        cfg.initial.random_amplitude = 0.05;
        run_local_existence(&cfg).unwrap();
        ["diagnostics.csv", "propagators.csv", "summary.json", "state_final.wmhd"].map(|f| std::fs::read(base.join(sub).join(f)).unwrap())
    };
    let (a, b) = (run("a"), run("b"));
    outcome(a == b, format!("two identical runs: outputs bit-identical = {}", a == b))
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = |name: &str| tmp.path().join(name);
    let (energy, residuals) = refinement();
    let results = vec![
        ("spectral oracle", spectral_oracle()),
        ("propagator ODE residual", propagator_ode()),
        ("energy identity order", energy),
        ("original-system residual orders", residuals),
        ("conservation", conservation(&dir("conservation"))),
        ("Picard contraction", picard(&dir("picard"))),
        ("operator bounds", operator_bounds()),
        ("loss of smoothness", loss(&dir("loss"))),
        ("lemma check", lemma(&dir("lemma"))),
        ("determinism", determinism(&dir("determinism"))),
    ];
    let mut failures = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        let mark = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark} {name}: {}", k + 1, o.detail);
        failures += usize::from(!o.passed);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failures, results.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
