use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use branchtool::report::{self, AnalysisRequest, Command, NodeSelector, OutputFormat};
use branchtool::walks::DEFAULT_BUDGET;
use branchtool::{parse_edge_list, Error, MultiGraph};

const BUDGET_VAR: &str = "BRANCHTOOL_BUDGET";

#[derive(Parser)]
#[command(
    name = "branchtool",
    version,
    about = "Walk counts and branching ratios of directed multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Branching ratio, growth-law fit and sandwich check per node.
    Analyze(Opts),
    /// Exact walk counts a_i(l) for l = 0..=max-len.
    Walks(Opts),
    /// Input tree of each selected node down to --depth.
    Tree(Opts),
    /// Perron data, period and small-block spectrum of every SCC.
    Spectrum(Opts),
}

#[derive(Args)]
struct Opts {
    /// Edge-list file: `src dst [multiplicity]` per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated node labels, or `all`.
    #[arg(long, default_value = "all")]
    node: String,
    #[arg(long, default_value_t = report::DEFAULT_MAX_LEN)]
    max_len: usize,
    #[arg(long, default_value_t = report::DEFAULT_DEPTH)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Order nodes by label instead of first appearance.
    #[arg(long)]
    sort_labels: bool,
    /// Relative tolerance for deciding Perron-eigenvalue ties.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Seed for randomized root-finding restarts.
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Io(String),
    Lib(Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Lib(e) => e.exit_code(),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(msg) => f.write_str(msg),
            Failure::Lib(e) => e.fmt(f),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn budget_from_env() -> Result<u64, Failure> {
    match std::env::var(BUDGET_VAR) {
        Err(_) => Ok(DEFAULT_BUDGET),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{BUDGET_VAR}={s:?} is not a non-negative integer")).into()),
    }
}

fn load(opts: &Opts) -> Result<MultiGraph, Failure> {
    let text = std::fs::read_to_string(&opts.graph)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", opts.graph.display())))?;
    let g = parse_edge_list(&text)?;
    Ok(if opts.sort_labels { g.with_sorted_labels() } else { g })
}

fn execute(cli: Cli) -> Result<String, Failure> {
    let (command, opts) = match cli.command {
        Cmd::Analyze(o) => (Command::Analyze, o),
        Cmd::Walks(o) => (Command::Walks, o),
        Cmd::Tree(o) => (Command::Tree, o),
        Cmd::Spectrum(o) => (Command::Spectrum, o),
    };
    let mut req = AnalysisRequest::new(command);
    req.graph_path = Some(opts.graph.clone());
    req.nodes = NodeSelector::parse(&opts.node);
    req.max_len = opts.max_len;
    req.depth = opts.depth;
    req.format = opts.format;
    req.sort_labels = opts.sort_labels;
    if let Some(tol) = opts.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("--tol must be a non-negative number, got {tol}")).into());
        }
        req.tolerance = tol;
    }
    if let Some(seed) = opts.seed {
        req.seed = seed;
    }
    req.budget = budget_from_env()?;

    let g = load(&opts)?;
    let report = report::run(&g, &req)?;
    Ok(report::render(&report, req.format))
}

fn main() -> ExitCode {
    // usage errors share exit code 1 with other invalid input; 2 is
    // reserved for an exhausted enumeration budget
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("branchtool: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
