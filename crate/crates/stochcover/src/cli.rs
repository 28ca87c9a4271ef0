//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 output failure, 2 bad flags, 3 unreadable or invalid
//! instance, 4 infeasible, 5 oracle size guard exceeded.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use stochcover_core::adaptive::{failure_probability, solve_adaptive_var_traced};
use stochcover_core::generate::{generate_random_graph, generate_random_setcover, generate_random_tree, ProbLaw, WeightLaw};
use stochcover_core::nonadaptive::{max_success_probability, solve_nonadaptive_traced};
use stochcover_core::oracle::{
    brute_force_adaptive_failure, brute_force_nonadaptive_opt, brute_force_setcover_opt, verify_hardness_sandwich,
    MonteCarloJob, OracleError,
};
use stochcover_core::{
    candidate_radii, solve_chance_setcover, DistanceMatrix, KCenterInstance, ProblemInstance, RootedTree, SolveError,
};

use crate::bench::{growth_exponent, run_suite, Suite};
use crate::document::{read_instance, serialize_instance};
use crate::montecarlo::{run_parallel, thread_budget};
use crate::report::{
    fingerprint, MonteCarloRow, Probe, ResultBlock, SetcoverOracle, SolveReport, Timings, VerifyRow, SCHEMA_VERSION,
};

#[derive(Debug, Parser)]
#[command(name = "stochcover", version, about = "Chance-constrained k-center and set cover solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KCenterMode {
    Nonadaptive,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Nonadaptive,
    Adaptive,
    Hardness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenType {
    Tree,
    Setcover,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchSuite {
    Nonadaptive,
    Adaptive,
}

fn parse_rho(s: &str) -> Result<f64, String> {
    let rho: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if rho > 0.0 && rho <= 1.0 {
        Ok(rho)
    } else {
        Err(format!("rho must be in (0, 1], got {rho}"))
    }
}

fn parse_radius(s: &str) -> Result<f64, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if r.is_finite() && r >= 0.0 {
        Ok(r)
    } else {
        Err(format!("radius must be a finite nonnegative number, got {r}"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smallest feasible radius (or the probability at one radius) for k centers on a tree.
    SolveKcenter {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: KCenterMode,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_rho, required_unless_present = "radius")]
        rho: Option<f64>,
        /// Evaluate this radius instead of searching.
        #[arg(long, value_parser = parse_radius)]
        radius: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy chance-constrained set cover.
    SolveSetcover {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = parse_rho)]
        rho: f64,
        /// Also enumerate every selection for the optimum and the cost ratio.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a dynamic program against exhaustive enumeration, or check the
    /// independent-set counting identity on a graph.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Check only this radius (default: every candidate radius).
        #[arg(long, value_parser = parse_radius)]
        radius: Option<f64>,
        /// Monte Carlo samples for the adaptive mode.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random instance document.
    Gen {
        #[arg(long = "type", value_enum)]
        kind: GenType,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Number of sets (setcover only, default n).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        p_low: f64,
        #[arg(long, default_value_t = 1.0)]
        p_high: f64,
        #[arg(long, default_value_t = 1.0)]
        w_low: f64,
        #[arg(long, default_value_t = 10.0)]
        w_high: f64,
        /// Draw integer weights or costs from [w-low, w-high].
        #[arg(long)]
        integer_weights: bool,
        /// Membership probability per (set, element) pair.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// Edge probability for graphs.
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the radius searches on seeded random trees.
    Bench {
        #[arg(long, value_enum)]
        suite: BenchSuite,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        sizes: Vec<usize>,
        #[arg(long = "k", value_delimiter = ',', required = true, num_args = 1..)]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_rho, default_value_t = 0.1)]
        rho: f64,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Output(String),
    Usage(String),
    Input(String),
    Infeasible(String),
    Guard(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Output(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Infeasible(_) => 4,
            Failure::Guard(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Output(m) | Failure::Usage(m) | Failure::Input(m) | Failure::Infeasible(m) | Failure::Guard(m) => m,
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InvalidRisk(_) => Failure::Usage(e.to_string()),
            SolveError::Infeasible => Failure::Infeasible(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::SizeGuard { .. } => Failure::Guard(e.to_string()),
            OracleError::IsolatedVertex(_) => Failure::Input(e.to_string()),
            OracleError::Infeasible => Failure::Infeasible(e.to_string()),
            OracleError::InvalidArgument(_) => Failure::Usage(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, echo) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn load(path: &Path) -> Result<ProblemInstance, Failure> {
    read_instance(path).map_err(|e| Failure::Input(e.to_string()))
}

fn load_tree(path: &Path) -> Result<(ProblemInstance, KCenterInstance), Failure> {
    let inst = load(path)?;
    match &inst {
        ProblemInstance::Tree(t) => {
            let t = t.clone();
            Ok((inst, t))
        }
        _ => Err(Failure::Input(format!("{} is not a tree instance", path.display()))),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Outcome {
    instance: Option<ProblemInstance>,
    result: ResultBlock,
    trace: Vec<Probe>,
}

fn execute(command: Command, echo: Vec<String>) -> Result<(), Failure> {
    let start = Instant::now();
    let (outcome, out) = match command {
        Command::Gen {
            kind,
            n,
            seed,
            m,
            p_low,
            p_high,
            w_low,
            w_high,
            integer_weights,
            density,
            edge_prob,
            out,
        } => {
            let probs = ProbLaw::Uniform { low: p_low, high: p_high };
            let weights = if integer_weights {
                if w_low < 0.0 || w_low.fract() != 0.0 || w_high.fract() != 0.0 || w_high > u32::MAX as f64 {
                    return Err(Failure::Usage("integer weights need whole-number bounds".into()));
                }
                WeightLaw::Integer { low: w_low as u32, high: w_high as u32 }
            } else {
                WeightLaw::Uniform { low: w_low, high: w_high }
            };
            let inst = match kind {
                GenType::Tree => generate_random_tree(n, seed, probs, weights).map(ProblemInstance::Tree),
                GenType::Setcover => generate_random_setcover(n, m.unwrap_or(n), seed, probs, weights, density)
                    .map(ProblemInstance::SetCover),
                GenType::Graph => generate_random_graph(n, seed, edge_prob, p_low).map(ProblemInstance::Graph),
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            return emit(&serialize_instance(&inst), out.as_deref());
        }
        Command::SolveKcenter {
            instance,
            mode,
            k,
            rho,
            radius,
            out,
        } => (solve_kcenter(&instance, mode, k, rho, radius)?, out),
        Command::SolveSetcover {
            instance,
            rho,
            oracle,
            out,
        } => (solve_setcover(&instance, rho, oracle)?, out),
        Command::Verify {
            instance,
            mode,
            k,
            radius,
            samples,
            seed,
            out,
        } => (verify(&instance, mode, k, radius, samples, seed)?, out),
        Command::Bench {
            suite,
            sizes,
            ks,
            seed,
            rho,
            repeats,
            out,
        } => {
            if sizes.is_empty() || ks.is_empty() {
                return Err(Failure::Usage("--sizes and --k need at least one value".into()));
            }
            if sizes.contains(&0) {
                return Err(Failure::Usage("sizes must be positive".into()));
            }
            let suite = match suite {
                BenchSuite::Nonadaptive => Suite::Nonadaptive,
                BenchSuite::Adaptive => Suite::Adaptive,
            };
            let cells = run_suite(suite, &sizes, &ks, rho, seed, repeats).map_err(|e| Failure::Usage(e.to_string()))?;
            let result = ResultBlock::Bench {
                suite: suite.name().into(),
                growth_exponent: growth_exponent(&cells),
                cells,
            };
            (Outcome { instance: None, result, trace: Vec::new() }, out)
        }
    };
    let report = SolveReport {
        schema_version: SCHEMA_VERSION,
        command: echo,
        instance_sha256: outcome.instance.as_ref().map(fingerprint),
        result: outcome.result,
        trace: outcome.trace,
        timings: Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    emit(&report.to_json(), out.as_deref())
}

fn solve_kcenter(path: &Path, mode: KCenterMode, k: usize, rho: Option<f64>, radius: Option<f64>) -> Result<Outcome, Failure> {
    let (doc, inst) = load_tree(path)?;
    let (result, trace) = match (mode, radius) {
        (KCenterMode::Nonadaptive, Some(r)) => {
            let tree = RootedTree::new(&inst);
            let d = DistanceMatrix::from_tree(&tree);
            let (p, table) = max_success_probability(&tree, &d, inst.probs(), k, r);
            let centers = table.reconstruct_centers(&tree);
            let result = ResultBlock::Nonadaptive { k, rho, radius: r, centers, success_probability: p };
            (result, vec![Probe { radius: r, probability: p }])
        }
        (KCenterMode::Adaptive, Some(r)) => {
            let tree = RootedTree::new(&inst);
            let d = DistanceMatrix::from_tree(&tree);
            let f = failure_probability(&tree, &d, inst.probs(), k, r);
            let result = ResultBlock::Adaptive { k, rho, radius: r, failure_probability: f };
            (result, vec![Probe { radius: r, probability: f }])
        }
        (KCenterMode::Nonadaptive, None) => {
            let rho = rho.expect("clap requires rho without radius");
            let (sol, probes) = solve_nonadaptive_traced(&inst, k, rho)?;
            let result = ResultBlock::Nonadaptive {
                k,
                rho: Some(rho),
                radius: sol.radius,
                centers: sol.centers,
                success_probability: sol.success_probability,
            };
            (result, probes.iter().map(|p| Probe { radius: p.radius, probability: p.probability }).collect())
        }
        (KCenterMode::Adaptive, None) => {
            let rho = rho.expect("clap requires rho without radius");
            let (var, probes) = solve_adaptive_var_traced(&inst, k, rho)?;
            let result = ResultBlock::Adaptive {
                k,
                rho: Some(rho),
                radius: var.radius,
                failure_probability: var.failure_probability,
            };
            (result, probes.iter().map(|p| Probe { radius: p.radius, probability: p.failure }).collect())
        }
    };
    Ok(Outcome { instance: Some(doc), result, trace })
}

fn solve_setcover(path: &Path, rho: f64, with_oracle: bool) -> Result<Outcome, Failure> {
    let doc = load(path)?;
    let ProblemInstance::SetCover(inst) = &doc else {
        return Err(Failure::Input(format!("{} is not a set cover instance", path.display())));
    };
    let sol = solve_chance_setcover(inst, rho)?;
    let oracle = if with_oracle {
        let (optimum_cost, optimum_sets) = brute_force_setcover_opt(inst, rho)?;
        let ratio = if optimum_cost > 0.0 { sol.cost / optimum_cost } else { 1.0 };
        Some(SetcoverOracle {
            optimum_cost,
            optimum_sets,
            ratio,
            ratio_bound: (inst.n() as f64).ln() + 1.0,
        })
    } else {
        None
    };
    let result = ResultBlock::Setcover {
        rho,
        chosen: sol.chosen,
        cost: sol.cost,
        uncovered: sol.uncovered,
        violation: sol.violation,
        oracle,
    };
    Ok(Outcome { instance: Some(doc), result, trace: Vec::new() })
}

fn verify(
    path: &Path,
    mode: VerifyMode,
    k: usize,
    radius: Option<f64>,
    samples: Option<u64>,
    seed: u64,
) -> Result<Outcome, Failure> {
    if mode == VerifyMode::Hardness {
        let doc = load(path)?;
        let ProblemInstance::Graph(g) = &doc else {
            return Err(Failure::Input(format!("{} is not a graph instance", path.display())));
        };
        let h = verify_hardness_sandwich(g)?;
        let result = ResultBlock::Hardness {
            n: h.n,
            m: h.m,
            independent_sets: h.independent_sets,
            n_m: h.n_m,
            f_m: h.f_m,
            p: h.p,
            lower: h.lower,
            upper: h.upper,
            holds: h.holds,
        };
        return Ok(Outcome { instance: Some(doc), result, trace: Vec::new() });
    }

    let (doc, inst) = load_tree(path)?;
    let tree = RootedTree::new(&inst);
    let d = DistanceMatrix::from_tree(&tree);
    let radii = match radius {
        Some(r) => vec![r],
        None => candidate_radii(&d).as_slice().to_vec(),
    };
    let probs = inst.probs();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in &radii {
        let (dp, oracle) = match mode {
            VerifyMode::Nonadaptive => (
                max_success_probability(&tree, &d, probs, k, r).0,
                brute_force_nonadaptive_opt(&d, probs, k, r)?.0,
            ),
            _ => (
                failure_probability(&tree, &d, probs, k, r),
                brute_force_adaptive_failure(&d, probs, k, r)?,
            ),
        };
        rows.push(VerifyRow { radius: r, dp, oracle, abs_diff: (dp - oracle).abs() });
    }
    let monte_carlo = match (mode, samples) {
        (VerifyMode::Adaptive, Some(samples)) => {
            // the given radius, or the middle candidate
            let row = rows[rows.len() / 2];
            let job = MonteCarloJob::new(&inst, k, row.radius, samples, seed)?;
            let est = run_parallel(&job, thread_budget());
            Some(MonteCarloRow {
                radius: row.radius,
                samples,
                seed,
                estimate: est.estimate,
                std_error: est.std_error,
                exact: row.oracle,
                within_3_se: (est.estimate - row.oracle).abs() <= 3.0 * est.std_error,
            })
        }
        _ => None,
    };
    let result = ResultBlock::Verify {
        mode: match mode {
            VerifyMode::Nonadaptive => "nonadaptive".into(),
            _ => "adaptive".into(),
        },
        k,
        max_abs_diff: rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max),
        rows,
        monte_carlo,
    };
    Ok(Outcome { instance: Some(doc), result, trace: Vec::new() })
}
