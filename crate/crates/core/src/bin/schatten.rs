use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use schatten_core::clock::{hardness_identity_check, reduction_pipeline, GateSequence};
use schatten_core::config::Config;
use schatten_core::dqc1::{estimate_schatten_trace, PowerKind, Simulation, TraceFMode, TraceFOptions};
use schatten_core::error::{Error, Result};
use schatten_core::graphs::{chung_lu_sample, ModelSpec};
use schatten_core::harness::{applicable_estimators, run_experiment, summary_table, write_outputs, ExperimentSpec, FunctionSpec, SEED_ENV};
use schatten_core::hamiltonian::{assemble_dense, LogLocalHamiltonian, SparseHermitian};
use schatten_core::oracle::{spectrum, spectrum_with, SpectrumReport};
use schatten_core::report::EstimateReport;
use schatten_core::walk::{estimate_trace_power, stream_rng, WalkMode};

#[derive(Parser)]
#[command(name = "schatten", version, about = "Trace, Schatten-norm and graph-energy estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment spec (JSON or TOML) and write its outputs.
    Run(RunArgs),
    /// Exact spectral quantities of a Hamiltonian (.json) or sparse matrix.
    Oracle {
        input: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        /// Spectral function as JSON, e.g. '{"kind": "power", "p": 2, "b": 3.0}'.
        #[arg(long)]
        f: Option<String>,
    },
    /// One-clean-qubit estimate of Tr|A|^p / 2^n.
    Dqc1 {
        hamiltonian: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Estimate Tr A^p instead of Tr|A|^p.
        #[arg(long)]
        signed: bool,
        #[arg(long, value_enum, default_value_t = ReadoutArg::ExactSubmatrix)]
        readout: ReadoutArg,
        #[arg(long, default_value_t = 0.05)]
        fail_prob: f64,
        /// Apply e^{iA} exactly instead of by Trotterisation.
        #[arg(long)]
        exact_simulation: bool,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Random-walk estimate of Tr(A^p) / N for a sparse matrix.
    Walk {
        matrix: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long)]
        eps_prime: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        fail_prob: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Corrected)]
        mode: ModeArg,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Recover Re Tr(U) / 2^n of a gate sequence through the clock Hamiltonian.
    Clock {
        circuit: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        fail_prob: f64,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Draw a Chung-Lu graph from a model JSON and print it in sparse text form.
    Graphgen {
        model: PathBuf,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        /// Reject models with a pair probability above 1.
        #[arg(long)]
        strict: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run a spec with every estimator that accepts its input.
    Compare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    spec: PathBuf,
    /// Seeds evaluated in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadoutArg {
    ExactSubmatrix,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Literal,
    Corrected,
    Exhaustive,
}

impl From<ModeArg> for WalkMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Literal => WalkMode::Literal,
            ModeArg::Corrected => WalkMode::Corrected,
            ModeArg::Exhaustive => WalkMode::Exhaustive,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_report(report: &EstimateReport) -> bool {
    println!("{}", report.to_json());
    report.pass != Some(false)
}

fn is_hamiltonian(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn load_spectrum(path: &Path) -> Result<SpectrumReport> {
    if is_hamiltonian(path) {
        spectrum(&assemble_dense(&LogLocalHamiltonian::load(path, &Config::default())?)?)
    } else {
        let a = SparseHermitian::load(path)?;
        spectrum_with(&a.to_dense(), &Config::default())
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run(args) => run_spec(&args, false),
        Command::Compare(args) => run_spec(&args, true),
        Command::Oracle { input, p, f } => {
            let spec = load_spectrum(&input)?;
            let mut out = json!({
                "dim": spec.dim(),
                "norm": spec.norm,
                "min_abs_eigenvalue": spec.min_abs_eig,
                "condition": if spec.condition.is_finite() { json!(spec.condition) } else { json!(null) },
                "energy_per_vertex": spec.abs_power_mean(1.0),
            });
            if let Some(p) = p {
                out["abs_power_mean"] = json!(spec.abs_power_mean(p));
                out["schatten_norm_normalised"] = json!(spec.schatten_p_norm(p)?);
            }
            if let Some(f) = f {
                let func: FunctionSpec =
                    serde_json::from_str(&f).map_err(|e| Error::InvalidInput(format!("--f: {e}")))?;
                out["trace_f"] = json!(spec.trace_f(&func.build()?)?);
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Command::Dqc1 {
            hamiltonian,
            p,
            eps,
            signed,
            readout,
            fail_prob,
            exact_simulation,
            seed,
        } => {
            let h = LogLocalHamiltonian::load(&hamiltonian, &Config::default())?;
            let options = TraceFOptions {
                mode: match readout {
                    ReadoutArg::ExactSubmatrix => TraceFMode::ExactSubmatrix,
                    ReadoutArg::Sampled => TraceFMode::Sampled { fail_prob },
                },
                simulation: if exact_simulation { Simulation::Exact } else { Simulation::Trotter },
                seed,
                config: Config::default(),
            };
            let kind = if signed { PowerKind::Signed } else { PowerKind::Abs };
            let spec = spectrum(&assemble_dense(&h)?)?;
            let truth = if signed { spec.power_mean(p) } else { spec.abs_power_mean(f64::from(p)) };
            let report = estimate_schatten_trace(&h, p, eps, kind, &options)?.with_truth(truth);
            Ok(print_report(&report))
        }
        Command::Walk {
            matrix,
            p,
            eps,
            eps_prime,
            fail_prob,
            mode,
            seed,
        } => {
            let a = SparseHermitian::load(&matrix)?;
            let mut report =
                estimate_trace_power(&a, p, eps, eps_prime.unwrap_or(eps), fail_prob, mode.into(), seed)?;
            if a.dim() <= Config::default().dense_eig_max_vertices {
                report = report.with_truth(spectrum(&a.to_dense())?.power_mean(p));
            }
            Ok(print_report(&report))
        }
        Command::Clock {
            circuit,
            eps,
            fail_prob,
            seed,
        } => {
            let seq = GateSequence::load(&circuit)?;
            let check = hardness_identity_check(&seq)?;
            eprintln!(
                "identity check (M = {}): lhs {:.12}, rhs {:.12}, residual {:.3e}",
                check.m, check.lhs, check.rhs, check.residual
            );
            let report = reduction_pipeline(&seq, eps, &TraceFOptions::sampled(fail_prob, seed))?;
            Ok(print_report(&report))
        }
        Command::Graphgen {
            model,
            seed,
            strict,
            out,
        } => {
            let text = std::fs::read_to_string(&model).map_err(|e| Error::Io {
                path: model.clone(),
                source: e,
            })?;
            let spec: ModelSpec = serde_json::from_str(&text).map_err(|e| Error::Parse {
                path: model.display().to_string(),
                line: e.line(),
                message: e.to_string(),
            })?;
            let m = spec.build()?;
            let g = chung_lu_sample(&m, &mut stream_rng(seed, 0), strict)?;
            if g.clipped > 0 {
                eprintln!("warning: {} pair probabilities clipped to 1", g.clipped);
            }
            match out {
                Some(path) => g.adjacency.save(path)?,
                None => print!("{}", g.adjacency.to_text()),
            }
            Ok(true)
        }
    }
}

fn run_spec(args: &RunArgs, compare: bool) -> Result<bool> {
    let mut spec = ExperimentSpec::load(&args.spec)?;
    if compare {
        spec.estimators = applicable_estimators(&spec);
    }
    let outcome = run_experiment(&spec, args.jobs)?;
    print!("{}", summary_table(&outcome));
    for path in write_outputs(&spec, &outcome)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(outcome.all_pass())
}
