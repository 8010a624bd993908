use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "chordal-td", version, about = "Triangular decomposition and chordal-graph tools for polynomial systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for zero-set enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a system and print its canonical form.
    Parse {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Associated graph of a system.
    Graph {
        file: PathBuf,
        #[arg(long)]
        weighted: bool,
        /// Write DOT here (`-` for stdout).
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Chordality verdict with a PEO or a chordless cycle.
    Chordal {
        file: PathBuf,
        /// Check this ordering instead, e.g. "x1<x2<x3".
        #[arg(long)]
        order: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Greedy chordal completion and a treewidth bound.
    Complete {
        file: PathBuf,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Also compute the exact treewidth (at most 10 vertices).
        #[arg(long)]
        exact: bool,
        /// Complete so that this ordering becomes a PEO.
        #[arg(long)]
        order: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Successive reduction redbar_n, ..., redbar_i.
    Reduce {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        to: usize,
        #[arg(long, default_value = "first")]
        pivot: String,
        /// Use the support-preserving map instead of pseudo-remainders.
        #[arg(long)]
        support_preserving: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Wang's method.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long, default_value = "first")]
        pivot: String,
        /// Write the decomposition tree JSON here (`-` for stdout).
        #[arg(long, value_name = "PATH")]
        tree: Option<PathBuf>,
        #[arg(long)]
        no_early_prune: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Zero-set check of a decomposition over small prime fields.
    Verify {
        file: PathBuf,
        tree: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        primes: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Subgraph theorems and zero-set checks on FILE and on random chordal systems.
    CheckTheorems {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        /// Defaults to $CHORDAL_TD_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Variable sparsity and weighted variable sparsity.
    Sparsity {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// What a command produced: text for stdout and whether its checks passed.
pub struct Outcome {
    pub stdout: String,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome { stdout, ok: true }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl From<chordal_td::Error> for CliError {
    fn from(e: chordal_td::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

pub fn write_output(path: &Path, text: &str) -> Result<Option<String>, CliError> {
    if path == Path::new("-") {
        return Ok(Some(text.to_string()));
    }
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(None)
}

fn default_seed() -> Result<u64, CliError> {
    match std::env::var("CHORDAL_TD_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("CHORDAL_TD_SEED is not an integer: `{s}`"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    use commands as c;
    match cli.command {
        Command::Parse { file, common } => c::parse(&file, &common),
        Command::Graph { file, weighted, dot, common } => c::graph(&file, weighted, dot.as_deref(), &common),
        Command::Chordal { file, order, common } => c::chordal(&file, order.as_deref(), &common),
        Command::Complete { file, dot, exact, order, common } => {
            c::complete(&file, dot.as_deref(), exact, order.as_deref(), &common)
        }
        Command::Reduce { file, to, pivot, support_preserving, common } => {
            c::reduce(&file, to, &pivot, support_preserving, &common)
        }
        Command::Decompose { file, field, pivot, tree, no_early_prune, common } => {
            c::decompose(&file, &field, &pivot, tree.as_deref(), !no_early_prune, &common)
        }
        Command::Verify { file, tree, primes, common } => c::verify(&file, &tree, &primes, &common),
        Command::CheckTheorems { file, runs, seed, common } => {
            let seed = match seed {
                Some(s) => s,
                None => default_seed()?,
            };
            c::check_theorems(&file, runs, seed, &common)
        }
        Command::Sparsity { file, common } => c::sparsity(&file, &common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
