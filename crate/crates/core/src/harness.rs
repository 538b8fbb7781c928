//! Experiment runner: a JSON or TOML spec names an input, a task and a set of
//! estimators; the runner produces one [`EstimateReport`] per estimator and
//! seed, plus CSV, JSON and SVG outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use plotters::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clock::{reduction_pipeline, GateSequence};
use crate::config::Config;
use crate::dqc1::{estimate_schatten_trace, run_trace_f, PowerKind, Simulation, TraceFMode, TraceFOptions};
use crate::error::{Error, Result};
use crate::graphs::{
    accuracy_advantage_report, chung_lu_sample, eigenvalue_regime_check, AdvantageReport, ModelSpec, RegimeReport,
};
use crate::hamiltonian::{assemble_dense_with, random_local_hamiltonian, LogLocalHamiltonian, SparseHermitian};
use crate::linalg::{self, CMatrix};
use crate::oracle::{spectrum_with, SpectralFunction};
use crate::report::{EstimateReport, Estimator};
use crate::walk::{estimate_trace_power, WalkMode};

/// Environment variable that replaces every spec's seed list.
pub const SEED_ENV: &str = "SCHATTEN_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    SchattenTrace,
    TracePower,
    GraphEnergy,
    TraceF,
    ClockReduction,
    RegimeCheck,
    AdvantageReport,
}

/// Where the matrix comes from. Relative paths resolve against the spec file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    /// Log-local Hamiltonian JSON.
    Hamiltonian(PathBuf),
    /// Sparse matrix text file.
    Matrix(PathBuf),
    /// Gate-sequence JSON.
    Circuit(PathBuf),
    /// Chung-Lu model; the graph is drawn with the spec's first seed.
    Model(ModelSpec),
    /// Random log-local Hamiltonian scaled so its term-norm bound is `pi - margin`.
    RandomLocal { n: usize, m: usize, k: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `(x / b)^p`.
    Power { p: u32, b: f64 },
    /// `|x / b|^p`.
    AbsPower { p: f64, b: f64 },
    Constant { c: f64, b: f64 },
}

impl FunctionSpec {
    pub fn build(&self) -> Result<SpectralFunction> {
        match *self {
            FunctionSpec::Power { p, b } => Ok(SpectralFunction::pow(p, b).scaled(b.powi(-(p as i32)))),
            FunctionSpec::AbsPower { p, b } => Ok(SpectralFunction::abs_pow(p, b)?.scaled(b.powf(-p))),
            FunctionSpec::Constant { c, b } => Ok(SpectralFunction::constant(c, b)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    /// Directory for SVG plots and their CSV data.
    pub plots: Option<PathBuf>,
}

fn default_eps() -> f64 {
    0.1
}

fn default_fail_prob() -> f64 {
    0.05
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_samples() -> usize {
    30
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub name: String,
    pub task: Task,
    pub input: InputSpec,
    pub estimators: Vec<Estimator>,
    #[serde(default)]
    pub p: Option<u32>,
    /// Powers swept by `advantage_report`; defaults to `[p]`.
    #[serde(default)]
    pub powers: Vec<u32>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub eps_prime: Option<f64>,
    #[serde(default = "default_fail_prob")]
    pub fail_prob: f64,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// DQC1 readout.
    #[serde(default)]
    pub readout: Readout,
    #[serde(default)]
    pub simulation: Simulation,
    #[serde(default)]
    pub walk_mode: WalkMode,
    #[serde(default)]
    pub function: Option<FunctionSpec>,
    /// Graphs drawn by `regime_check`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub config: Config,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    #[default]
    ExactSubmatrix,
    Sampled,
}

impl ExperimentSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("line {}: {e}", e.line())))
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Loads `.toml` files as TOML and everything else as JSON; relative
    /// paths inside the spec become relative to its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parse_error = |line: usize, message: String| Error::Parse {
            path: path.display().to_string(),
            line,
            message,
        };
        let mut spec: Self = if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| {
                let line = e.span().map_or(0, |s| text[..s.start].lines().count().max(1));
                parse_error(line, e.message().to_string())
            })?
        } else {
            serde_json::from_str(&text).map_err(|e| parse_error(e.line(), e.to_string()))?
        };
        if let Some(dir) = path.parent() {
            spec.resolve_paths(dir);
        }
        Ok(spec)
    }

    fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        match &mut self.input {
            InputSpec::Hamiltonian(p) | InputSpec::Matrix(p) | InputSpec::Circuit(p) => fix(p),
            InputSpec::Model(_) | InputSpec::RandomLocal { .. } => {}
        }
        for p in [&mut self.output.csv, &mut self.output.json, &mut self.output.plots]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.estimators.is_empty() {
            return Err(Error::Config("at least one estimator is required".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::Config(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        if !(self.fail_prob > 0.0 && self.fail_prob < 1.0) {
            return Err(Error::Config(format!("fail_prob must lie in (0, 1), got {}", self.fail_prob)));
        }
        let needs_p = match self.task {
            Task::SchattenTrace | Task::TracePower => true,
            Task::AdvantageReport => self.powers.is_empty(),
            _ => false,
        };
        if needs_p && self.p.is_none() {
            return Err(Error::Config(format!("task {:?} needs `p`", self.task)));
        }
        if self.task == Task::TraceF && self.function.is_none() {
            return Err(Error::Config("task trace_f needs `function`".into()));
        }
        self.config.validate()
    }

    /// Seeds after applying [`SEED_ENV`].
    pub fn effective_seeds(&self) -> Result<Vec<u64>> {
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(|s| vec![s])
                .map_err(|_| Error::Config(format!("{SEED_ENV}={v} is not an unsigned integer"))),
            Err(_) => Ok(self.seeds.clone()),
        }
    }

    fn trace_options(&self, seed: u64) -> TraceFOptions {
        TraceFOptions {
            mode: match self.readout {
                Readout::ExactSubmatrix => TraceFMode::ExactSubmatrix,
                Readout::Sampled => TraceFMode::Sampled {
                    fail_prob: self.fail_prob,
                },
            },
            simulation: self.simulation,
            seed,
            config: self.config.clone(),
        }
    }
}

/// Estimators that accept the spec's task and input.
pub fn applicable_estimators(spec: &ExperimentSpec) -> Vec<Estimator> {
    let local = matches!(spec.input, InputSpec::Hamiltonian(_) | InputSpec::RandomLocal { .. });
    let circuit = matches!(spec.input, InputSpec::Circuit(_));
    let mut out = vec![Estimator::Exact];
    let dqc1 = match spec.task {
        Task::ClockReduction => circuit,
        Task::SchattenTrace | Task::TracePower | Task::GraphEnergy | Task::TraceF => local,
        Task::RegimeCheck | Task::AdvantageReport => false,
    };
    if dqc1 {
        out.push(Estimator::Dqc1);
    }
    if spec.task == Task::TracePower && !circuit {
        out.push(Estimator::Walker);
    }
    out
}

/// A loaded input in whichever forms it supports.
enum Loaded {
    Local(LogLocalHamiltonian),
    Sparse(SparseHermitian),
    Circuit(GateSequence),
}

fn load_input(spec: &ExperimentSpec, seed: u64) -> Result<Loaded> {
    Ok(match &spec.input {
        InputSpec::Hamiltonian(p) => Loaded::Local(LogLocalHamiltonian::load(p, &spec.config)?),
        InputSpec::Matrix(p) => Loaded::Sparse(SparseHermitian::load(p)?),
        InputSpec::Circuit(p) => Loaded::Circuit(GateSequence::load(p)?),
        InputSpec::Model(m) => {
            let model = m.build()?;
            let mut rng = crate::walk::stream_rng(seed, 0);
            Loaded::Sparse(chung_lu_sample(&model, &mut rng, false)?.adjacency)
        }
        InputSpec::RandomLocal { n, m, k, seed } => {
            let h = random_local_hamiltonian(*n, *m, *k, *seed);
            let bound = h.norm_bound();
            let h = if bound > 0.0 { h.scaled(spec.config.phase_limit() / bound) } else { h };
            Loaded::Local(h)
        }
    })
}

fn dense_of(input: &Loaded, config: &Config) -> Result<CMatrix> {
    match input {
        Loaded::Local(h) => assemble_dense_with(h, config),
        Loaded::Sparse(a) => {
            if a.dim() > config.dense_eig_max_vertices {
                return Err(Error::DimensionTooLarge {
                    qubits: (a.dim() as f64).log2().ceil() as usize,
                    max: config.n_dense_max,
                });
            }
            Ok(a.to_dense())
        }
        Loaded::Circuit(_) => Err(Error::Config("a circuit has no matrix of its own".into())),
    }
}

fn local_of(input: &Loaded, estimator: Estimator) -> Result<&LogLocalHamiltonian> {
    match input {
        Loaded::Local(h) => Ok(h),
        _ => Err(Error::Config(format!("estimator {estimator} needs a log-local Hamiltonian input"))),
    }
}

fn sparse_of(input: &Loaded, config: &Config) -> Result<SparseHermitian> {
    match input {
        Loaded::Sparse(a) => Ok(a.clone()),
        Loaded::Local(h) => SparseHermitian::from_dense(&assemble_dense_with(h, config)?),
        Loaded::Circuit(_) => Err(Error::Config("the walker cannot take a circuit input".into())),
    }
}

/// Everything a run produced.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub name: String,
    pub reports: Vec<EstimateReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub regimes: Vec<RegimeReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub advantages: Vec<AdvantageReport>,
}

impl ExperimentOutcome {
    /// `false` iff a bound-claiming estimator missed its ground truth.
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass != Some(false))
    }
}

/// Runs every (estimator, seed) pair in order. With `jobs > 1` seeds run in
/// parallel; the output order is unchanged.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<ExperimentOutcome> {
    spec.validate()?;
    let seeds = spec.effective_seeds()?;
    let mut outcome = ExperimentOutcome {
        name: spec.name.clone(),
        ..Default::default()
    };
    match spec.task {
        Task::RegimeCheck => {
            let InputSpec::Model(m) = &spec.input else {
                return Err(Error::Config("regime_check needs a model input".into()));
            };
            let model = m.build()?;
            for &seed in &seeds {
                outcome.regimes.push(eigenvalue_regime_check(&model, spec.samples, seed)?);
            }
            return Ok(outcome);
        }
        Task::AdvantageReport => {
            let powers = if spec.powers.is_empty() {
                vec![spec.p.expect("validated")]
            } else {
                spec.powers.clone()
            };
            for &seed in &seeds {
                let input = load_input(spec, seed)?;
                let a = sparse_of(&input, &spec.config)?;
                for &p in &powers {
                    outcome.advantages.push(accuracy_advantage_report(&a, p, spec.eps)?);
                }
            }
            return Ok(outcome);
        }
        _ => {}
    }
    let per_seed = |seed: u64| -> Result<Vec<EstimateReport>> {
        let input = load_input(spec, seed)?;
        run_estimators(spec, &input, seed)
    };
    let batches: Vec<Vec<EstimateReport>> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| seeds.par_iter().map(|&s| per_seed(s)).collect::<Result<_>>())?
    } else {
        seeds.iter().map(|&s| per_seed(s)).collect::<Result<_>>()?
    };
    outcome.reports = batches.into_iter().flatten().collect();
    outcome
        .reports
        .sort_by_key(|r| (r.estimator, r.seed));
    Ok(outcome)
}

fn run_estimators(spec: &ExperimentSpec, input: &Loaded, seed: u64) -> Result<Vec<EstimateReport>> {
    let truth = ground_truth(spec, input)?;
    let mut estimators = spec.estimators.clone();
    if truth.is_some() && !estimators.contains(&Estimator::Exact) {
        estimators.insert(0, Estimator::Exact);
    }
    estimators.sort();
    estimators.dedup();
    let mut out = Vec::new();
    for est in estimators {
        let report = match est {
            Estimator::Exact => match truth {
                Some(t) => EstimateReport::new(Estimator::Exact, "dense", t, 0.0),
                None => continue,
            },
            Estimator::Dqc1 => run_dqc1(spec, input, seed)?,
            Estimator::Walker => run_walker(spec, input, seed)?,
        };
        let report = report.with_seed(seed);
        out.push(match truth {
            Some(t) => report.with_truth(t),
            None => report,
        });
    }
    Ok(out)
}

/// Dense reference value, or `None` when the input is too large.
fn ground_truth(spec: &ExperimentSpec, input: &Loaded) -> Result<Option<f64>> {
    let config = &spec.config;
    if let Loaded::Circuit(seq) = input {
        return Ok((seq.n() <= config.n_dense_max).then(|| {
            linalg::trace(&seq.product()).re / (1u64 << seq.n()) as f64
        }));
    }
    let a = match dense_of(input, config) {
        Ok(a) => a,
        Err(Error::DimensionTooLarge { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let spec_report = spectrum_with(&a, config)?;
    let value = match spec.task {
        Task::SchattenTrace => spec_report.abs_power_mean(f64::from(spec.p.expect("validated"))),
        Task::TracePower => spec_report.power_mean(spec.p.expect("validated")),
        Task::GraphEnergy => spec_report.abs_power_mean(1.0),
        Task::TraceF => spec_report.trace_f(&spec.function.as_ref().expect("validated").build()?)?,
        Task::ClockReduction | Task::RegimeCheck | Task::AdvantageReport => {
            return Err(Error::Config(format!("task {:?} does not take this input", spec.task)))
        }
    };
    Ok(Some(value))
}

fn run_dqc1(spec: &ExperimentSpec, input: &Loaded, seed: u64) -> Result<EstimateReport> {
    let options = spec.trace_options(seed);
    match spec.task {
        Task::SchattenTrace => estimate_schatten_trace(
            local_of(input, Estimator::Dqc1)?,
            spec.p.expect("validated"),
            spec.eps,
            PowerKind::Abs,
            &options,
        ),
        Task::TracePower => estimate_schatten_trace(
            local_of(input, Estimator::Dqc1)?,
            spec.p.expect("validated"),
            spec.eps,
            PowerKind::Signed,
            &options,
        ),
        Task::GraphEnergy => {
            estimate_schatten_trace(local_of(input, Estimator::Dqc1)?, 1, spec.eps, PowerKind::Abs, &options)
        }
        Task::TraceF => run_trace_f(
            local_of(input, Estimator::Dqc1)?,
            &spec.function.as_ref().expect("validated").build()?,
            spec.eps,
            &options,
        ),
        Task::ClockReduction => match input {
            Loaded::Circuit(seq) => reduction_pipeline(seq, spec.eps, &options),
            _ => Err(Error::Config("clock_reduction needs a circuit input".into())),
        },
        Task::RegimeCheck | Task::AdvantageReport => unreachable!("handled before dispatch"),
    }
}

fn run_walker(spec: &ExperimentSpec, input: &Loaded, seed: u64) -> Result<EstimateReport> {
    if spec.task != Task::TracePower {
        return Err(Error::Config(format!(
            "the walker estimates Tr(A^p)/N only; task {:?} is not supported",
            spec.task
        )));
    }
    let a = sparse_of(input, &spec.config)?;
    let eps_prime = spec.eps_prime.unwrap_or(spec.eps);
    estimate_trace_power(
        &a,
        spec.p.expect("validated"),
        spec.eps,
        eps_prime,
        spec.fail_prob,
        spec.walk_mode,
        seed,
    )
}

const CSV_HEADER: &str = "estimator,value,truth,bound,pass,seed,ms,mode,eps,eta,phi,a,delta,r,C,shots,k,k_prime,vertices,eps_prime,fail_prob";

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One row per report; every column but `ms` is deterministic given the seeds.
pub fn reports_to_csv(reports: &[EstimateReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let b = r.budget.as_ref();
        let w = r.walk.as_ref();
        let eps = b.map(|b| b.eps).or(w.map(|w| w.eps));
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.3},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.estimator,
            r.value,
            opt(r.truth),
            r.claimed_bound,
            opt(r.pass),
            opt(r.seed),
            r.wallclock_ms,
            r.mode,
            opt(eps),
            opt(b.map(|b| b.eta)),
            opt(b.map(|b| b.phi)),
            opt(b.map(|b| b.a)),
            opt(b.map(|b| b.delta)),
            opt(b.and_then(|b| b.r)),
            opt(b.and_then(|b| b.c)),
            opt(r.shots),
            opt(w.map(|w| w.k)),
            opt(w.map(|w| w.k_prime)),
            opt(w.map(|w| w.vertices)),
            opt(w.map(|w| w.eps_prime)),
            opt(w.map(|w| w.fail_prob)),
        );
    }
    out
}

/// Fixed-width summary table for the terminal.
pub fn summary_table(outcome: &ExperimentOutcome) -> String {
    let mut out = String::new();
    if !outcome.reports.is_empty() {
        let _ = writeln!(
            out,
            "{:<8} {:>6} {:>16} {:>16} {:>12} {:>6} {:>10}",
            "estimator", "seed", "value", "truth", "bound", "pass", "ms"
        );
        for r in &outcome.reports {
            let _ = writeln!(
                out,
                "{:<8} {:>6} {:>16.10} {:>16} {:>12.3e} {:>6} {:>10.1}",
                r.estimator.to_string(),
                opt(r.seed),
                r.value,
                r.truth.map_or(String::from("-"), |t| format!("{t:.10}")),
                r.claimed_bound,
                r.pass.map_or("-", |p| if p { "yes" } else { "NO" }),
                r.wallclock_ms
            );
        }
    }
    for g in &outcome.regimes {
        let _ = writeln!(
            out,
            "regime {:?}: N = {}, d = {:.2}, d~ = {:.2}, mean lambda_max = {:.3} (sd {:.3}), predicted {:.3}, ratio {:.3}, margin {:.2}",
            g.regime, g.n, g.d, g.d_tilde, g.mean_lambda_max, g.std_lambda_max, g.predicted, g.ratio, g.margin
        );
    }
    for a in &outcome.advantages {
        let _ = writeln!(
            out,
            "advantage p = {}: |A| = {:.4}, d = {}, quantum {:.4e}, classical {:.4e}, ratio {:.4e}",
            a.p, a.norm, a.d, a.quantum_bound, a.classical_bound, a.ratio
        );
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the outputs named in `spec.output`.
pub fn write_outputs(spec: &ExperimentSpec, outcome: &ExperimentOutcome) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(p) = &spec.output.csv {
        write_file(p, &reports_to_csv(&outcome.reports))?;
        written.push(p.clone());
    }
    if let Some(p) = &spec.output.json {
        write_file(p, &serde_json::to_string_pretty(outcome)?)?;
        written.push(p.clone());
    }
    if let Some(dir) = &spec.output.plots {
        if !outcome.reports.is_empty() {
            written.extend(emit_plots(&outcome.reports, dir)?);
        }
        if !outcome.advantages.is_empty() {
            written.extend(emit_ratio_plot(&outcome.advantages, dir)?);
        }
    }
    Ok(written)
}

fn plot_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::io(path, std::io::Error::other(e.to_string()))
}

fn report_eps(r: &EstimateReport) -> Option<f64> {
    r.budget.as_ref().map(|b| b.eps).or(r.walk.as_ref().map(|w| w.eps))
}

/// `accuracy.svg` and `accuracy.csv`: claimed bound and, where truth is
/// known, the observed error against `eps`.
pub fn emit_plots(reports: &[EstimateReport], dir: &Path) -> Result<Vec<PathBuf>> {
    if reports.is_empty() {
        return Err(Error::InvalidInput("nothing to plot".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rows: Vec<(String, f64, f64, Option<f64>)> = reports
        .iter()
        .filter(|r| r.estimator != Estimator::Exact)
        .map(|r| (r.estimator.to_string(), report_eps(r).unwrap_or(f64::NAN), r.claimed_bound, r.error()))
        .collect();
    let csv_path = dir.join("accuracy.csv");
    let mut csv = String::from("estimator,eps,bound,error\n");
    for (e, eps, bound, err) in &rows {
        let _ = writeln!(csv, "{e},{eps},{bound},{}", opt(*err));
    }
    write_file(&csv_path, &csv)?;

    let svg_path = dir.join("accuracy.svg");
    let finite = |x: &f64| x.is_finite() && *x > 0.0;
    let xs: Vec<f64> = rows.iter().map(|r| r.1).filter(finite).collect();
    let ys: Vec<f64> = rows
        .iter()
        .flat_map(|r| [Some(r.2), r.3])
        .flatten()
        .filter(finite)
        .collect();
    let range = |v: &[f64], fallback: (f64, f64)| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() {
            (lo / 2.0, hi * 2.0)
        } else {
            fallback
        }
    };
    let (x0, x1) = range(&xs, (1e-3, 1.0));
    let (y0, y1) = range(&ys, (1e-6, 1.0));
    {
        let root = SVGBackend::new(&svg_path, (640, 480)).into_drawing_area();
        root.fill(&WHITE).map_err(|e| plot_error(&svg_path, e))?;
        let mut chart = ChartBuilder::on(&root)
            .caption("accuracy against eps", ("sans-serif", 20))
            .margin(10)
            .x_label_area_size(40)
            .y_label_area_size(60)
            .build_cartesian_2d((x0..x1).log_scale(), (y0..y1).log_scale())
            .map_err(|e| plot_error(&svg_path, e))?;
        chart
            .configure_mesh()
            .x_desc("eps")
            .y_desc("absolute error")
            .draw()
            .map_err(|e| plot_error(&svg_path, e))?;
        let bounds = rows.iter().filter(|r| finite(&r.1) && finite(&r.2)).map(|r| (r.1, r.2));
        chart
            .draw_series(bounds.map(|p| TriangleMarker::new(p, 6, BLUE)))
            .map_err(|e| plot_error(&svg_path, e))?
            .label("claimed bound")
            .legend(|(x, y)| TriangleMarker::new((x, y), 5, BLUE));
        let errors = rows
            .iter()
            .filter_map(|r| r.3.map(|e| (r.1, e)))
            .filter(|p| finite(&p.0) && finite(&p.1));
        chart
            .draw_series(errors.map(|p| Circle::new(p, 4, RED.filled())))
            .map_err(|e| plot_error(&svg_path, e))?
            .label("observed error")
            .legend(|(x, y)| Circle::new((x, y), 4, RED.filled()));
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .draw()
            .map_err(|e| plot_error(&svg_path, e))?;
        root.present().map_err(|e| plot_error(&svg_path, e))?;
    }
    Ok(vec![svg_path, csv_path])
}

/// `ratio.svg` and `ratio.csv`: quantum over classical bound against `p`.
pub fn emit_ratio_plot(reports: &[AdvantageReport], dir: &Path) -> Result<Vec<PathBuf>> {
    if reports.is_empty() {
        return Err(Error::InvalidInput("nothing to plot".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv_path = dir.join("ratio.csv");
    let mut csv = String::from("p,norm,d,quantum_bound,classical_bound,ratio\n");
    for r in reports {
        let _ = writeln!(csv, "{},{},{},{},{},{}", r.p, r.norm, r.d, r.quantum_bound, r.classical_bound, r.ratio);
    }
    write_file(&csv_path, &csv)?;
    let svg_path = dir.join("ratio.svg");
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .filter(|r| r.ratio.is_finite() && r.ratio > 0.0)
        .map(|r| (f64::from(r.p), r.ratio))
        .collect();
    let pmax = reports.iter().map(|r| r.p).max().unwrap_or(1) as f64;
    let lo = pts.iter().map(|p| p.1).fold(1.0, f64::min) / 2.0;
    {
        let root = SVGBackend::new(&svg_path, (640, 480)).into_drawing_area();
        root.fill(&WHITE).map_err(|e| plot_error(&svg_path, e))?;
        let mut chart = ChartBuilder::on(&root)
            .caption("quantum / classical accuracy", ("sans-serif", 20))
            .margin(10)
            .x_label_area_size(40)
            .y_label_area_size(60)
            .build_cartesian_2d(0.5..pmax + 0.5, (lo..2.0).log_scale())
            .map_err(|e| plot_error(&svg_path, e))?;
        chart
            .configure_mesh()
            .x_desc("p")
            .y_desc("ratio")
            .draw()
            .map_err(|e| plot_error(&svg_path, e))?;
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), BLUE))
            .map_err(|e| plot_error(&svg_path, e))?;
        chart
            .draw_series(pts.iter().map(|&p| Circle::new(p, 4, BLUE.filled())))
            .map_err(|e| plot_error(&svg_path, e))?;
        root.present().map_err(|e| plot_error(&svg_path, e))?;
    }
    Ok(vec![svg_path, csv_path])
}
