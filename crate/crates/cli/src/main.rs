//! `ugdecomp`: generate instances, solve the LP relaxations, round them and
//! run experiment grids.
//!
//! Exit codes: 0 success, 1 other failure (including failed experiment
//! rows), 2 bad usage, 3 cutting-plane loop did not converge, 4 the LP
//! solution handed to `round` is infeasible.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ugdecomp_core::error::PartialSolution;
use ugdecomp_core::exact::{
    brute_force_assignment, brute_force_transversal, enumerate_inconsistent_cycles, CYCLE_EDGE_CAP,
};
use ugdecomp_core::gen::{family_metadata, generate, CostModel, GenSpec};
use ugdecomp_core::lp::DEFAULT_TOL;
use ugdecomp_core::{Error, InstanceKind, Scheme, UgInstance};

use ugdecomp::error::{usage, CliError};
use ugdecomp::experiment;
use ugdecomp::format::{self, Report};
use ugdecomp::pipeline::{self, Algo, LpSolution, Mode, RoundSettings};

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "ugdecomp", version, about = "LP rounding for Unique Games, Max-2Lin and Min-Uncut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a planted instance plus `<out>.planted` and `<out>.flipped`.
    Gen(GenArgs),
    /// Solve the LP relaxation and print its objective.
    Solve(SolveArgs),
    /// Round an LP solution; writes the assignment and `<out>.report`.
    Round(RoundArgs),
    /// Run a brute-force oracle on a small instance.
    Oracle(OracleArgs),
    /// Run the full pipeline over a configured grid of instances.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Grid,
    Torus,
    Cycle,
    Bipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(name = "2lin")]
    TwoLin,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum CostArg {
    Unit,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    CycleLp,
    UgLp,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    #[value(name = "2lin")]
    TwoLin,
    Ug,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Ball,
    Kpr,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Assignment,
    Transversal,
    Cycles,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Vertex count for `cycle` and `bipartite`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "2lin")]
    kind: KindArg,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, value_enum, default_value = "unit")]
    cost: CostArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "cycle-lp")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Solution file; also written with the partial solution on
    /// non-convergence.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Cap on cutting-plane rounds.
    #[arg(long)]
    max_rounds: Option<usize>,
}

#[derive(clap::Args)]
struct RoundArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    lp_solution: PathBuf,
    #[arg(long, value_enum, default_value = "2lin")]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value = "ball")]
    scheme: SchemeArg,
    /// Decomposition diameter; defaults to 1/4 for 2lin and to
    /// `r * sqrt(LP / total cost)` for ug.
    #[arg(long)]
    delta: Option<f64>,
    /// Excluded-minor size: KPR round count and the ug diameter multiplier.
    #[arg(long, default_value_t = 5)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    repeats: usize,
    /// Assignment output; the report goes to `<out>.report`.
    #[arg(long)]
    out: PathBuf,
    /// Also write the final partition here.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    what: WhatArg,
    /// Edge cap for cycle enumeration.
    #[arg(long, default_value_t = CYCLE_EDGE_CAP)]
    max_edges: usize,
    /// Write the optimal assignment here (`--what assignment`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Table output; key=value blocks go to `<out>.kv`. Both go to stdout
    /// when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Round(a) => cmd_round(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Experiment(a) => experiment::run(&a.config, a.out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn write(path: &Path, contents: &str) -> CliResult {
    Ok(fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?)
}

fn load_instance(path: &Path) -> CliResult<UgInstance> {
    Ok(format::parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))?)
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn core_err(e: Error) -> CliError {
    CliError::Other(e.into())
}

fn cmd_gen(a: GenArgs) -> CliResult {
    let name = match a.family {
        FamilyArg::Grid => "grid",
        FamilyArg::Torus => "torus",
        FamilyArg::Cycle => "cycle",
        FamilyArg::Bipartite => "bipartite",
    };
    let family = pipeline::family(name, a.rows, a.cols, a.n).map_err(usage)?;
    let spec = GenSpec {
        family,
        k: a.k,
        kind: match a.kind {
            KindArg::TwoLin => InstanceKind::TwoLin,
            KindArg::General => InstanceKind::General,
        },
        noise: a.noise,
        cost: match a.cost {
            CostArg::Unit => CostModel::Unit,
            CostArg::Uniform => CostModel::Uniform,
        },
        seed: a.seed,
    };
    let g = generate(&spec).map_err(|e| match e {
        Error::InvalidParameter(_) | Error::EmptyAlphabet => usage(e.to_string()),
        other => core_err(other),
    })?;
    write(&a.out, &format::write_instance(&g.instance))?;
    write(&with_suffix(&a.out, ".planted"), &format::write_assignment(&g.planted, a.k))?;
    write(&with_suffix(&a.out, ".flipped"), &format::write_edge_list(&g.flipped))?;
    let meta = family_metadata(&family);
    let mut r = Report::default();
    r.push("n", g.instance.n())
        .push("m", g.instance.num_edges())
        .push("flipped", g.flipped.len())
        .push("planted_unsat_cost", g.instance.unsat_cost(&g.planted))
        .push("planar", meta.is_planar)
        .push("genus_upper", meta.genus_upper)
        .push("r_suggestion", meta.r_suggestion);
    print!("{}", r.render());
    Ok(())
}

fn dump_solution(sol: &LpSolution) -> String {
    match sol {
        LpSolution::Edge(s) => format::write_edge_solution(&s.x),
        LpSolution::Ug(s) => format::write_ug_solution(s),
    }
}

fn cmd_solve(a: SolveArgs) -> CliResult {
    let inst = load_instance(&a.instance)?;
    let mode = match a.mode {
        ModeArg::CycleLp => Mode::CycleLp,
        ModeArg::UgLp => Mode::UgLp,
    };
    if mode == Mode::CycleLp && inst.kind() != InstanceKind::TwoLin {
        return Err(usage("cycle-lp needs a 2lin instance; use --mode ug-lp"));
    }
    let sol = match pipeline::solve(&inst, mode, a.tol, a.max_rounds) {
        Ok(sol) => sol,
        Err(Error::NoConvergence { rounds, partial }) => {
            let partial = match *partial {
                PartialSolution::Edge(s) => LpSolution::Edge(s),
                PartialSolution::Ug(s) => LpSolution::Ug(s),
            };
            if let Some(path) = &a.dump {
                write(path, &dump_solution(&partial))?;
            }
            return Err(CliError::NoConvergence(format!(
                "no convergence within {rounds} rounds (partial objective {})",
                partial.objective()
            )));
        }
        Err(e) => return Err(core_err(e)),
    };
    if let Some(path) = &a.dump {
        write(path, &dump_solution(&sol))?;
    }
    let mut r = Report::default();
    r.push("objective", sol.objective())
        .push("feasible", sol.feasible())
        .push("rounds", sol.rounds())
        .push("cuts", sol.cuts_added());
    print!("{}", r.render());
    Ok(())
}

fn cmd_round(a: RoundArgs) -> CliResult {
    let inst = load_instance(&a.instance)?;
    let file = format::parse_lp_solution(&read(&a.lp_solution)?)
        .with_context(|| format!("parsing {}", a.lp_solution.display()))?;
    let algo = match a.algo {
        AlgoArg::TwoLin => Algo::TwoLin,
        AlgoArg::Ug => Algo::Ug,
    };
    let to_cli = |e: format::ParseError| match e {
        format::ParseError::Core(Error::InfeasibleSolution(msg)) => CliError::InfeasibleLp(msg.into()),
        format::ParseError::Core(Error::RequiresTwoLin) => usage("algo 2lin needs a 2lin instance"),
        other => CliError::Other(other.into()),
    };
    let lp = match algo {
        Algo::TwoLin => LpSolution::Edge(file.into_edge(&inst).map_err(to_cli)?),
        Algo::Ug => LpSolution::Ug(file.into_ug(&inst).map_err(to_cli)?),
    };
    if !lp.feasible() {
        return Err(CliError::InfeasibleLp(a.lp_solution.display().to_string()));
    }
    let scheme = match a.scheme {
        SchemeArg::Ball => Scheme::BallCarve,
        SchemeArg::Kpr => Scheme::Kpr { r: a.r },
    };
    let settings = RoundSettings {
        scheme,
        delta: a.delta,
        r: a.r,
        seed: a.seed,
        repeats: a.repeats,
    };
    let out = pipeline::round(&inst, &lp, &settings).map_err(|e| match e {
        Error::InfeasibleSolution(msg) => CliError::InfeasibleLp(msg.into()),
        Error::InvalidParameter(_) | Error::RequiresTwoLin => usage(e.to_string()),
        other => core_err(other),
    })?;
    write(&a.out, &format::write_assignment(&out.assignment, inst.k()))?;
    if let Some(path) = &a.partition {
        write(path, &format::write_partition(&out.partition))?;
    }
    let mut r = Report::default();
    r.push("algo", algo.name())
        .push("lp_obj", lp.objective())
        .push("deleted_cost", out.deleted_cost)
        .push("heavy", out.heavy.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .push("unsat_cost", out.unsat_cost)
        .push("delta", out.delta)
        .push("scheme", scheme.name())
        .push("repeats", a.repeats)
        .push("resplits", out.resplits)
        .push("best_repeat", out.repeat)
        .push("seed", a.seed);
    write(&with_suffix(&a.out, ".report"), &r.render())?;
    println!("unsat_cost={}", out.unsat_cost);
    Ok(())
}

fn cmd_oracle(a: OracleArgs) -> CliResult {
    let inst = load_instance(&a.instance)?;
    let oracle_err = |e: Error| match e {
        Error::SizeCapExceeded { .. } | Error::RequiresTwoLin => usage(e.to_string()),
        other => core_err(other),
    };
    let mut r = Report::default();
    match a.what {
        WhatArg::Assignment => {
            let res = brute_force_assignment(&inst).map_err(oracle_err)?;
            r.push("opt_unsat_cost", res.opt_unsat_cost).push("explored", res.explored);
            if let Some(path) = &a.out {
                write(path, &format::write_assignment(&res.witness, inst.k()))?;
            }
        }
        WhatArg::Transversal => {
            let res = brute_force_transversal(&inst).map_err(oracle_err)?;
            let edges: Vec<String> = res.edges.iter().map(ToString::to_string).collect();
            r.push("cost", res.cost)
                .push("edges", edges.join(","))
                .push("explored", res.explored);
        }
        WhatArg::Cycles => {
            let cycles = enumerate_inconsistent_cycles(&inst, a.max_edges).map_err(oracle_err)?;
            r.push("count", cycles.len());
            for c in &cycles {
                let edges: Vec<String> = c.edges.iter().map(ToString::to_string).collect();
                r.push("cycle", edges.join(","));
            }
        }
    }
    print!("{}", r.render());
    Ok(())
}
