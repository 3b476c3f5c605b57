use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use andor_core::generators::tictactoe;
use andor_core::generators::{
    alternating_tree, fixture_by_name, random_andor_dag, DagParams, GeneratorError, HeuristicMode, Objective,
    TreeParams,
};
use andor_core::graph::{explore_fully, from_json, to_json, GraphError, GraphWorld};
use andor_core::search::{
    compare, summarize, write_csv, Algorithm, Budget, LeafPick, SearchError, SummaryRow, TieBreak,
};
use andor_core::{Cost, CostScheme, ExplicitGraph, SearchParams, SearchStatus};

const EXIT_UNSOLVABLE: u8 = 10;
const EXIT_EXHAUSTED: u8 = 20;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "andor", version, about = "Best-first search on AND/OR graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one graph; exit 0 solvable, 10 unsolvable, 20 budget exhausted, 2 bad input.
    Solve(SolveArgs),
    /// Generate a random instance as graph JSON.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run several algorithms over many instances and write a CSV.
    Compare(CompareArgs),
    /// Write a built-in fixture as graph JSON.
    Export {
        /// fig1, fig1_terminalized, fig3, fig4 or fig6.
        name: String,
        /// Output path; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Cost scheme at AND nodes (bfmm needs max).
    #[arg(long, value_enum)]
    psi: Option<Psi>,
    /// Tie-break among equal children: first, last, random[:SEED].
    #[arg(long, default_value = "first")]
    tie: String,
    /// AO* leaf choice: first, random[:SEED], deepest, highest-h.
    #[arg(long, default_value = "first")]
    pick: String,
    /// Maximum number of expansions.
    #[arg(long, default_value_t = Budget::DEFAULT_EXPANSIONS)]
    budget: u64,
    /// Maximum number of nodes in the explicit graph.
    #[arg(long)]
    max_nodes: Option<usize>,
    /// Seed for `random` tie-breaks and picks without their own seed (ANDOR_SEED overrides).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Graph JSON path, or fixture:NAME.
    #[arg(long)]
    input: String,
    #[command(flatten)]
    search: SearchArgs,
    /// Value scale C for bfmm (hbar = C - h).
    #[arg(long, default_value_t = Algorithm::DEFAULT_SCALE)]
    scale: f64,
    /// Print one line per iteration.
    #[arg(long)]
    trace: bool,
    /// Write the certificate as JSON.
    #[arg(long)]
    emit_solution: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Graph JSON paths or fixture:NAME.
    inputs: Vec<String>,
    /// Generate this many random DAGs (seeds seed, seed+1, ...) instead of reading inputs.
    #[arg(long, conflicts_with = "inputs")]
    dags: Option<usize>,
    #[command(flatten)]
    dag: DagArgs,
    /// Comma-separated: ao-star, pns, pns-star, bfmm[:C].
    #[arg(long, default_value = "ao-star,pns-star", value_delimiter = ',')]
    algorithms: Vec<String>,
    #[command(flatten)]
    search: SearchArgs,
    /// CSV output path.
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Subcommand)]
enum GenKind {
    /// Layered random DAG.
    Dag {
        #[command(flatten)]
        dag: DagArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform alternating tree, OR at the root.
    Tree {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        branching: usize,
        /// Probability that a leaf is terminal.
        #[arg(long, default_value_t = 1.0)]
        terminal_prob: f64,
        /// Probability that a terminal leaf is solvable.
        #[arg(long, default_value_t = 0.5)]
        win_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full tic-tac-toe game graph, first player to win.
    Tictactoe {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DagArgs {
    #[arg(long, default_value_t = 30)]
    nodes: usize,
    #[arg(long, default_value_t = 5)]
    layers: usize,
    #[arg(long, default_value_t = 0.5)]
    or_fraction: f64,
    #[arg(long, default_value_t = 3)]
    max_children: usize,
    #[arg(long, default_value_t = 1.0)]
    cost_min: f64,
    #[arg(long, default_value_t = 4.0)]
    cost_max: f64,
    #[arg(long, default_value_t = 1.0)]
    terminal_fraction: f64,
    #[arg(long, default_value_t = 0.6)]
    solvable_fraction: f64,
    /// unit, admissible[:NOISE] or exact.
    #[arg(long, default_value = "unit")]
    heuristic: String,
    /// Scheme used for the oracle-based heuristics.
    #[arg(long = "heuristic-psi", value_enum, default_value_t = Psi::Sum)]
    heuristic_psi: Psi,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    AoStar,
    Pns,
    PnsStar,
    Bfmm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Psi {
    Sum,
    Max,
}

impl From<Psi> for CostScheme {
    fn from(p: Psi) -> Self {
        match p {
            Psi::Sum => CostScheme::Sum,
            Psi::Max => CostScheme::Max,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Graph { path: String, source: GraphError },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("writing CSV: {0}")]
    Csv(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("ANDOR_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("ANDOR_SEED is not an integer: `{v}`"))),
        Err(_) => Ok(flag),
    }
}

fn search_params(a: &SearchArgs, psi_default: CostScheme) -> Result<SearchParams, CliError> {
    let seed = effective_seed(a.seed)?;
    let tie = match a.tie.as_str() {
        "random" => TieBreak::RandomSeeded(seed),
        s => s.parse().map_err(CliError::Usage)?,
    };
    let pick = match a.pick.as_str() {
        "random" => LeafPick::AnyRandom(seed),
        s => s.parse().map_err(CliError::Usage)?,
    };
    Ok(SearchParams {
        psi: a.psi.map(CostScheme::from).unwrap_or(psi_default),
        tie,
        pick,
        budget: Budget { max_expansions: Some(a.budget), max_nodes: a.max_nodes },
        strict_marking: false,
    })
}

fn load_graph(input: &str) -> Result<ExplicitGraph, CliError> {
    if let Some(name) = input.strip_prefix("fixture:") {
        return Ok(fixture_by_name(name)?);
    }
    let path = Path::new(input);
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    from_json(&text).map_err(|source| CliError::Graph { path: input.to_string(), source })
}

fn write_graph(g: &ExplicitGraph, out: &Path) -> Result<(), CliError> {
    let text = to_json(g).map_err(|source| CliError::Graph { path: out.display().to_string(), source })?;
    fs::write(out, text + "\n").map_err(io_err(out))?;
    println!("wrote {}: {} nodes, {} edges", out.display(), g.len(), g.edge_count());
    Ok(())
}

fn dag_params(a: &DagArgs, seed: u64) -> Result<DagParams, CliError> {
    let heuristic_mode = match a.heuristic.as_str() {
        "unit" => HeuristicMode::Unit,
        "exact" => HeuristicMode::Exact,
        "admissible" => HeuristicMode::OracleAdmissible { noise: 0.5 },
        s => match s.strip_prefix("admissible:").and_then(|v| v.parse().ok()) {
            Some(noise) => HeuristicMode::OracleAdmissible { noise },
            None => {
                return Err(CliError::Usage(format!(
                    "unknown heuristic `{s}` (expected unit, admissible[:NOISE] or exact)"
                )))
            }
        },
    };
    Ok(DagParams {
        n_nodes: a.nodes,
        layers: a.layers,
        or_fraction: a.or_fraction,
        max_children: a.max_children,
        edge_cost_range: (a.cost_min, a.cost_max),
        terminal_fraction: a.terminal_fraction,
        solvable_fraction: a.solvable_fraction,
        heuristic_mode,
        psi: a.heuristic_psi.into(),
        seed,
    })
}

fn cmd_solve(a: SolveArgs) -> Result<SearchStatus, CliError> {
    let algorithm = match a.algorithm {
        AlgorithmArg::AoStar => Algorithm::AoStar,
        AlgorithmArg::Pns => Algorithm::Pns,
        AlgorithmArg::PnsStar => Algorithm::PnsStar,
        AlgorithmArg::Bfmm => {
            if a.search.psi == Some(Psi::Sum) {
                return Err(CliError::Usage("bfmm requires --psi max".into()));
            }
            let scale = Cost::new(a.scale)
                .filter(|c| c.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bad --scale {}", a.scale)))?;
            Algorithm::Bfmm(scale)
        }
    };
    let psi_default = if matches!(algorithm, Algorithm::Bfmm(_)) { CostScheme::Max } else { CostScheme::Sum };
    let params = search_params(&a.search, psi_default)?;
    let g = load_graph(&a.input)?;
    let out = algorithm.run(GraphWorld::new(&g), &params)?;

    let mut stdout = io::stdout().lock();
    if a.trace {
        for step in &out.trace {
            let _ = writeln!(stdout, "{step}");
        }
    }
    let _ = writeln!(stdout, "status: {}", out.status);
    let _ = writeln!(stdout, "root value: {}", out.root_value);
    let _ = writeln!(stdout, "expansions: {}", out.stats.expansions);
    let _ = writeln!(stdout, "nodes generated: {}", out.stats.nodes_generated);
    let _ = writeln!(stdout, "iterations: {}", out.stats.iterations);

    if let Some(path) = &a.emit_solution {
        match &out.solution {
            Some(s) => {
                let text = serde_json::to_string_pretty(s).expect("solution graphs serialize");
                fs::write(path, text + "\n").map_err(io_err(path))?;
            }
            None => eprintln!("no certificate to write: {}", out.status),
        }
    }
    Ok(out.status)
}

fn cmd_gen(kind: GenKind) -> Result<(), CliError> {
    match kind {
        GenKind::Dag { dag, seed, out } => {
            let g = random_andor_dag(&dag_params(&dag, effective_seed(seed)?)?)?;
            write_graph(&g, &out)
        }
        GenKind::Tree { depth, branching, terminal_prob, win_prob, seed, out } => {
            let g = alternating_tree(&TreeParams {
                depth,
                branching,
                terminal_prob,
                win_prob,
                seed: effective_seed(seed)?,
            })?;
            write_graph(&g, &out)
        }
        GenKind::Tictactoe { out } => {
            let g = explore_fully(&mut tictactoe(Objective::FirstPlayerWins))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            write_graph(&g, &out)
        }
    }
}

fn cmd_compare(a: CompareArgs) -> Result<(), CliError> {
    let algorithms: Vec<Algorithm> =
        a.algorithms.iter().map(|s| s.trim().parse()).collect::<Result<_, String>>().map_err(CliError::Usage)?;
    let params = search_params(&a.search, CostScheme::Sum)?;
    let (names, graphs): (Vec<String>, Vec<ExplicitGraph>) = match a.dags {
        Some(n) => {
            let base = effective_seed(a.search.seed)?;
            (0..n as u64)
                .map(|i| {
                    let seed = base + i;
                    Ok((format!("dag-{seed}"), random_andor_dag(&dag_params(&a.dag, seed)?)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?
                .into_iter()
                .unzip()
        }
        None if a.inputs.is_empty() => return Err(CliError::Usage("no inputs (give paths or --dags N)".into())),
        None => a
            .inputs
            .iter()
            .map(|s| Ok((s.clone(), load_graph(s)?)))
            .collect::<Result<Vec<_>, CliError>>()?
            .into_iter()
            .unzip(),
    };

    let rows = compare(&names, |i| GraphWorld::new(&graphs[i]), &algorithms, &params)?;
    let written = fs::File::create(&a.csv)
        .map_err(io_err(&a.csv))
        .and_then(|f| write_csv(&rows, io::BufWriter::new(f)).map_err(|e| CliError::Csv(e.to_string())));
    if let Err(e) = written {
        let _ = fs::remove_file(&a.csv);
        return Err(e);
    }

    println!("{} rows written to {}", rows.len(), a.csv.display());
    println!("{}", SummaryRow::HEADER);
    for s in summarize(&rows) {
        println!("{s}");
    }
    Ok(())
}

fn cmd_export(name: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    let g = fixture_by_name(name)?;
    match out {
        Some(path) => write_graph(&g, &path),
        None => {
            let text = to_json(&g).map_err(|source| CliError::Graph { path: name.to_string(), source })?;
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a).map(|status| match status {
            SearchStatus::ProvedSolvable => ExitCode::SUCCESS,
            SearchStatus::ProvedUnsolvable => ExitCode::from(EXIT_UNSOLVABLE),
            SearchStatus::ResourceExhausted => ExitCode::from(EXIT_EXHAUSTED),
        }),
        Command::Gen { kind } => cmd_gen(kind).map(|_| ExitCode::SUCCESS),
        Command::Compare(a) => cmd_compare(a).map(|_| ExitCode::SUCCESS),
        Command::Export { name, out } => cmd_export(&name, out).map(|_| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_INPUT)
    })
}
