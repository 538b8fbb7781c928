//! End-to-end acceptance checks, one summary line per criterion.
//!
//! Run with `cargo test -p schatten-core --test acceptance`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use schatten_core::clock::{hardness_identity_check, random_real_circuit, PreparedReduction};
use schatten_core::config::Config;
use schatten_core::dqc1::{
    audit_budget, audit_clean_qubits, dqc1_trace_estimate, AncillaAudit, PhaseEstimationBudget, PowerKind,
    PreparedSchatten, PreparedTraceF, Readout, Simulation, TraceFMode,
};
use schatten_core::graphs::{
    accuracy_advantage_report, eigenvalue_regime_check, power_law_weights, sample_graphs, DegreeModel, Regime,
};
use schatten_core::hamiltonian::{
    assemble_dense, random_local_hamiltonian, random_unitary, LogLocalHamiltonian, MatrixClass, SparseHermitian,
};
use schatten_core::linalg::{self, c64, matrix_power};
use schatten_core::oracle::{spectrum, trace_f, SpectralFunction};
use schatten_core::trotter::{
    calibrate_constant, certify_simulation, eigenphase_deviation, plan_trotter_with, trotter_fixtures,
    trotter_unitary,
};
use schatten_core::walk::{diagonal_estimate, stream_rng, WalkMode, WalkPlan};

const EPSILONS: [f64; 3] = [0.2, 0.1, 0.05];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// 24 random log-local Hamiltonians, `n <= 4`, scaled so the sum of term
/// norms equals the phase limit.
fn local_fixtures() -> Vec<LogLocalHamiltonian> {
    let limit = Config::default().phase_limit();
    (0..24u64)
        .map(|seed| {
            let n = 1 + (seed % 4) as usize;
            let m = 1 + ((seed / 4) % 4) as usize;
            let h = random_local_hamiltonian(n, m, n.min(2), 500 + seed);
            h.scaled(limit / h.norm_bound())
        })
        .collect()
}

fn test_functions(b: f64) -> Vec<SpectralFunction> {
    let xs: Vec<f64> = (0..=32).map(|i| -b + 2.0 * b * f64::from(i) / 32.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| x.cos()).collect();
    vec![
        SpectralFunction::pow(2, b).scaled(1.0 / (b * b)),
        SpectralFunction::abs_pow(1.0, b).expect("p >= 1").scaled(1.0 / b),
        SpectralFunction::table("cos", xs, ys).expect("valid table"),
    ]
}

fn criterion_1(fixtures: &[LogLocalHamiltonian], audits: &mut Vec<AncillaAudit>) -> Outcome {
    let config = Config::default();
    let functions = test_functions(config.phase_limit());
    let jobs: Vec<(usize, usize, f64)> = (0..fixtures.len())
        .flat_map(|i| (0..functions.len()).flat_map(move |j| EPSILONS.map(|e| (i, j, e))))
        .collect();
    let results: Vec<(f64, AncillaAudit)> = jobs
        .par_iter()
        .map(|&(i, j, eps)| {
            let (h, f) = (&fixtures[i], &functions[j]);
            let truth = trace_f(&assemble_dense(h).expect("dense"), f).expect("oracle");
            let prep = PreparedTraceF::new(h, f, eps, Simulation::Trotter, &config).expect("circuit");
            let dev = (prep.exact_report().value - truth).abs();
            (dev / (eps * (f.lipschitz + 1.0)), audit_clean_qubits(&prep.program, &config))
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    audits.extend(results.into_iter().map(|r| r.1));
    Outcome::new(
        worst <= 1.0,
        format!("{} runs, worst deviation / eps(K+1) = {worst:.3e}", jobs.len()),
    )
}

fn criterion_2(fixtures: &[LogLocalHamiltonian]) -> Outcome {
    let config = Config::default();
    let jobs: Vec<(usize, u32)> = (0..fixtures.len()).flat_map(|i| (1..=4).map(move |p| (i, p))).collect();
    let ratios: Vec<f64> = jobs
        .par_iter()
        .flat_map_iter(|&(i, p)| {
            let h = &fixtures[i];
            let s = spectrum(&assemble_dense(h).expect("dense")).expect("oracle");
            let truth = s.abs_power_mean(f64::from(p));
            let scale = s.norm.powi(p as i32);
            let config = &config;
            EPSILONS.into_iter().map(move |eps| {
                let mut prep = PreparedSchatten::new(h, p, eps, PowerKind::Abs, Simulation::Trotter, config)
                    .expect("circuit");
                let r = prep.report(TraceFMode::ExactSubmatrix, 0).expect("estimate");
                (r.value - truth).abs() / (eps * scale)
            })
        })
        .collect();
    let passed = ratios.iter().filter(|&&r| r <= 1.0).count();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    Outcome::new(
        passed == ratios.len(),
        format!("{passed}/{} within eps|A|^p, worst ratio {worst:.3e}", ratios.len()),
    )
}

fn criterion_3() -> Outcome {
    let fixtures = trotter_fixtures();
    let deltas = [1e-1, 1e-2, 1e-3];
    let calibration = calibrate_constant(&fixtures, &deltas).expect("calibration");
    let checks: Vec<(f64, f64)> = fixtures
        .par_iter()
        .flat_map_iter(|h| {
            deltas.into_iter().map(move |delta| {
                let plan = plan_trotter_with(h, 1.0, delta, calibration.constant).expect("plan");
                let v = trotter_unitary(h, &plan).expect("unitary");
                let cert = certify_simulation(h, &v, 1.0).expect("certify") / delta;
                let phase = eigenphase_deviation(h, &v, 1.0).expect("phases") / (std::f64::consts::PI * delta / 2.0);
                (cert, phase)
            })
        })
        .collect();
    let worst_cert = checks.iter().map(|c| c.0).fold(0.0, f64::max);
    let worst_phase = checks.iter().map(|c| c.1).fold(0.0, f64::max);
    Outcome::new(
        worst_cert <= 1.0 && worst_phase <= 1.0,
        format!(
            "C = {}, {} simulations, worst |V - e^(iA)|/delta {worst_cert:.3}, worst phase deviation/(pi delta/2) {worst_phase:.3}",
            calibration.constant,
            checks.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut circuits = 0;
    let mut worst_residual = 0.0_f64;
    for m in [2usize, 4, 8] {
        for n in 1..=3usize {
            for s in 0..4u64 {
                let seq = random_real_circuit(n, m, 100 * m as u64 + 10 * n as u64 + s);
                let check = hardness_identity_check(&seq).expect("identity check");
                worst_residual = worst_residual.max(check.residual);
                circuits += 1;
            }
        }
    }
    let pipelines: Vec<(usize, usize, u64)> = vec![(2, 2, 11), (2, 2, 12), (2, 2, 13), (2, 2, 14), (1, 4, 21), (2, 4, 22)];
    let seeds = 0..10u64;
    let errors: Vec<f64> = pipelines
        .par_iter()
        .flat_map_iter(|&(n, m, circuit_seed)| {
            let seq = random_real_circuit(n, m, circuit_seed);
            let mut prep =
                PreparedReduction::new(&seq, 0.2, Simulation::Trotter, &Config::default()).expect("pipeline");
            seeds
                .clone()
                .map(|seed| {
                    let r = prep.report(TraceFMode::Sampled { fail_prob: 0.05 }, seed).expect("run");
                    r.error().expect("truth attached")
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let within = errors.iter().filter(|&&e| e <= 0.2).count();
    let fraction = within as f64 / errors.len() as f64;
    Outcome::new(
        worst_residual <= 1e-8 && fraction >= 0.95,
        format!(
            "{circuits} circuits, worst identity residual {worst_residual:.2e}; pipeline {within}/{} runs within 0.2, worst error {:.4}",
            errors.len(),
            errors.iter().copied().fold(0.0, f64::max)
        ),
    )
}

fn fixture_graph(name: &str) -> SparseHermitian {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", "graphs", name].iter().collect();
    SparseHermitian::load(path).expect("fixture graph")
}

/// Irregular 8-vertex graph with entries from `value`.
fn random_graph(seed: u64, value: impl Fn(usize) -> f64) -> SparseHermitian {
    let mut rng = stream_rng(seed, 0);
    let triplets: Vec<(usize, usize, _)> = (0..8)
        .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
        .enumerate()
        .filter(|_| rand::Rng::random_bool(&mut rng, 0.4))
        .map(|(k, (i, j))| (i, j, c64(value(k), 0.0)))
        .collect();
    SparseHermitian::from_upper_triplets(8, triplets).expect("symmetric")
}

fn walk_fixtures() -> Vec<(String, SparseHermitian)> {
    let mut out: Vec<(String, SparseHermitian)> = ["cycle8.txt", "k4.txt", "signed_triangle.txt", "weighted_path.txt"]
        .into_iter()
        .map(|n| (n.to_string(), fixture_graph(n)))
        .collect();
    out.push(("random_zero_one".into(), random_graph(3, |_| 1.0)));
    out.push((
        "random_signed".into(),
        random_graph(4, |k| if k % 3 == 0 { -1.0 } else { 1.0 }),
    ));
    out.push(("random_weighted".into(), random_graph(5, |k| 0.25 + 0.5 * (k % 5) as f64)));
    out
}

fn criterion_5() -> Outcome {
    let fixtures = walk_fixtures();
    let classes: std::collections::BTreeSet<&str> =
        fixtures.iter().filter_map(|(_, a)| a.class().map(MatrixClass::as_str)).collect();
    let mut exhaustive_checks = 0;
    let mut worst_exhaustive = 0.0_f64;
    for (_, a) in &fixtures {
        let dense = a.to_dense();
        for p in 1..=4u32 {
            let power = matrix_power(&dense, u64::from(p));
            let plan = WalkPlan::new(a, p, 0.1, 0.1, 0.05).expect("plan").with_mode(WalkMode::Exhaustive);
            for j in 0..a.dim() {
                let est = diagonal_estimate(a, j, &plan, &mut stream_rng(0, 0)).expect("walk").value;
                let truth = power[(j, j)].re;
                worst_exhaustive = worst_exhaustive.max((est - truth).abs() / truth.abs().max(1.0));
                exhaustive_checks += 1;
            }
        }
    }

    let (fail_prob, seeds) = (0.05, 200u64);
    let q = 1.0 - 2.0 * fail_prob;
    let sigma = (q * (1.0 - q) / seeds as f64).sqrt();
    let threshold = q * (1.0 - 3.0 * sigma);
    let cases: Vec<(usize, u32)> = (0..fixtures.len()).flat_map(|i| (2..=4).map(move |p| (i, p))).collect();
    let rates: Vec<(String, f64)> = cases
        .par_iter()
        .map(|&(i, p)| {
            let (name, a) = &fixtures[i];
            let truth = matrix_power(&a.to_dense(), u64::from(p))[(0, 0)].re;
            let plan = WalkPlan::new(a, p, 0.1, 0.1, fail_prob).expect("plan");
            let hits = (0..seeds)
                .filter(|&seed| {
                    let e = diagonal_estimate(a, 0, &plan, &mut stream_rng(seed, 0)).expect("walk");
                    (e.value - truth).abs() <= e.bound
                })
                .count();
            (format!("{name} p={p}"), hits as f64 / seeds as f64)
        })
        .collect();
    let (worst_name, worst_rate) = rates
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(n, r)| (n.clone(), *r))
        .expect("cases");
    Outcome::new(
        worst_exhaustive <= 1e-12 && classes.len() == 3 && worst_rate >= threshold,
        format!(
            "exhaustive {exhaustive_checks} diagonals over classes {classes:?}, worst rel. error {worst_exhaustive:.1e}; \
             sampled worst hit rate {worst_rate:.3} ({worst_name}) vs threshold {threshold:.3}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let u = random_unitary(8, 42);
    let truth = linalg::trace(&u) / 8.0;
    let shots = [1_000u64, 10_000, 100_000];
    let errors: Vec<f64> = shots
        .iter()
        .map(|&s| {
            let values: Vec<f64> = (0..200u64)
                .into_par_iter()
                .map(|seed| dqc1_trace_estimate(&u, Readout::Sampled { shots: s }, seed).expect("dqc1").re)
                .collect();
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
        })
        .collect();
    let xs: Vec<f64> = shots.iter().map(|&s| (s as f64).log10()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.log10()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let exact_err = (0..10u64)
        .map(|seed| {
            let u = random_unitary(1 << (1 + seed % 3), seed);
            let t = linalg::trace(&u) / u.nrows() as f64;
            let e = dqc1_trace_estimate(&u, Readout::ExactProbability, 0).expect("dqc1");
            (e.re - t.re).abs().max((e.im - t.im).abs())
        })
        .fold(0.0, f64::max);
    Outcome::new(
        (slope + 0.5).abs() <= 0.1 && exact_err <= 1e-12,
        format!(
            "standard errors {:.2e} {:.2e} {:.2e}, slope {slope:.3}; exact mode max error {exact_err:.1e} (Tr U/8 = {:.4}{:+.4}i)",
            errors[0], errors[1], errors[2], truth.re, truth.im
        ),
    )
}

fn criterion_7() -> Outcome {
    let uniform = DegreeModel::uniform(2048, 300.0).expect("model");
    let dense_regime = eigenvalue_regime_check(&uniform, 30, 1).expect("regime");
    let power_law = power_law_weights(4096, 3.0, 64.0, 2.0).expect("model");
    let sparse_regime = eigenvalue_regime_check(&power_law, 30, 2).expect("regime");
    let clean_ok = dense_regime.regime != Regime::Neither && (dense_regime.ratio - 1.0).abs() <= 0.25;
    let power_law_ok = (sparse_regime.ratio - 1.0).abs() <= 0.25;

    let graphs = sample_graphs(&power_law, 3, 7).expect("graphs");
    let mut worst_band = 1.0_f64;
    let mut norm_over_sqrt_d = Vec::new();
    for g in &graphs {
        for p in 1..=6 {
            let r = accuracy_advantage_report(&g.adjacency, p, 0.1).expect("advantage");
            let d = r.d as f64;
            let reference = (r.norm / d).powi(p as i32);
            let band = r.ratio / reference;
            worst_band = if (band.ln()).abs() > worst_band.ln().abs() { band } else { worst_band };
            if p == 1 {
                norm_over_sqrt_d.push(r.norm / d.sqrt());
            }
        }
    }
    let band_ok = (0.5..=2.0).contains(&worst_band);
    let sqrt_ok = norm_over_sqrt_d.iter().all(|x| (0.5..=2.0).contains(x));
    Outcome::new(
        clean_ok && power_law_ok && band_ok && sqrt_ok,
        format!(
            "uniform N=2048 ({:?}) mean lambda_max {:.2} vs {:.2} (ratio {:.3}); power law N=4096 ({:?}) {:.2} vs {:.2} (ratio {:.3}); \
             advantage ratio / (|A|/d)^p worst {worst_band:.3}, |A|/sqrt(d) {:?}",
            dense_regime.regime,
            dense_regime.mean_lambda_max,
            dense_regime.predicted,
            dense_regime.ratio,
            sparse_regime.regime,
            sparse_regime.mean_lambda_max,
            sparse_regime.predicted,
            sparse_regime.ratio,
            norm_over_sqrt_d.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_8(program_audits: &[AncillaAudit]) -> Outcome {
    let config = Config::default();
    let mut audits: Vec<AncillaAudit> = (0..=95)
        .flat_map(|i| {
            let eps = 0.05 + 0.01 * f64::from(i);
            let budget = PhaseEstimationBudget::from_eps(eps).expect("budget");
            (1..=10).map(move |n| audit_budget(&budget, n, &Config::default()))
        })
        .collect();
    audits.extend_from_slice(program_audits);
    let bad = audits.iter().filter(|a| a.a > a.eps_bound || !a.pass).count();
    let widest = audits.iter().map(|a| a.a).max().unwrap_or(0);
    Outcome::new(
        bad == 0,
        format!(
            "{} budgets audited ({} from built programs), largest a = {widest}, a_max(4) = {}, violations {bad}",
            audits.len(),
            program_audits.len(),
            config.max_ancillas(4)
        ),
    )
}

fn main() -> ExitCode {
    let fixtures = local_fixtures();
    let mut audits = Vec::new();
    let mut all = true;
    let mut report = |k: usize, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {k}: {} [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    };
    report(1, &mut || criterion_1(&fixtures, &mut audits));
    report(2, &mut || criterion_2(&fixtures));
    report(3, &mut criterion_3);
    report(4, &mut criterion_4);
    report(5, &mut criterion_5);
    report(6, &mut criterion_6);
    report(7, &mut criterion_7);
    report(8, &mut || criterion_8(&audits));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
