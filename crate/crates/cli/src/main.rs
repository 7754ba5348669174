mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use unavoidable::realize::DEFAULT_CONSTRAINT_CAP;

use crate::report::{Context, SCHEMA};

/// Exact combinatorics of r-unavoidable simplicial complexes.
#[derive(Parser)]
#[command(name = "unavoidable", version)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the JSON schema of the reports and exit.
    #[arg(long)]
    schema: bool,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Facets, minimal non-faces, self-duality, partition number and
    /// unavoidability checks.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        r: Option<usize>,
        /// Require at least `s` face blocks (needs --r).
        #[arg(long, requires = "r")]
        s: Option<usize>,
    },
    /// Partition number, optionally restricted to blocks from a hypergraph.
    Pi {
        file: PathBuf,
        /// JSON array of blocks, e.g. [[1,2],[3]].
        #[arg(long)]
        hypergraph: Option<PathBuf>,
    },
    /// Alexander dual as a complex file.
    Dual { file: PathBuf },
    /// Linear realizability by exact LP.
    Realize {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        /// Only look for a realizable r-unavoidable subcomplex.
        #[arg(long)]
        subcomplex: bool,
        #[arg(long, default_value_t = DEFAULT_CONSTRAINT_CAP)]
        max_constraints: usize,
    },
    /// Weighted-hypergraph realization check.
    Wh {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Weighted hypergraph JSON; defaults to the canonical realization of
        /// a self-dual complex.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Generate example complexes.
    Gen {
        #[command(subcommand)]
        kind: GenCommand,
    },
    /// Join of two complexes.
    Join { first: PathBuf, second: PathBuf },
    /// Face counts of the r-fold deleted join.
    Deljoin {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1 << 30)]
        budget: u64,
    },
    /// Non-embeddability certificates.
    Certify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        r: usize,
        #[arg(long, required_unless_present = "index")]
        d: Option<usize>,
        /// Single-complex form instead of the join form.
        #[arg(long, conflicts_with = "index")]
        single: bool,
        /// Index lower bound for the deleted join or product instead.
        #[arg(long, value_enum)]
        index: Option<IndexKind>,
        #[arg(long, requires = "index")]
        s: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexKind {
    Join,
    Product,
}

#[derive(Subcommand)]
enum GenCommand {
    /// All subsets of [m] with at most k+1 elements.
    Skeleton {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// m isolated points.
    Points {
        #[arg(long)]
        m: usize,
    },
    /// Complex on the edges of K_n: S is a face when the other edges contain
    /// a clique.
    Ramsey {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        clique: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Also scan all r-colorings of the edges.
        #[arg(long)]
        check_admissible: bool,
        /// Skip colorings with an empty class.
        #[arg(long)]
        no_empty_classes: bool,
        #[arg(long, default_value_t = 1 << 26)]
        budget: u64,
    },
    /// Random weighted-majority (self-dual) complex.
    Selfdual {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Budget(String),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Budget(m) | CliError::Failed(m) => {
                m
            }
        }
    }
}

impl From<unavoidable::Error> for CliError {
    fn from(e: unavoidable::Error) -> Self {
        match e {
            unavoidable::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            unavoidable::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// Exit status of a successful run.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    NotCertified,
    Abstained,
}

pub struct Outcome {
    pub results: serde_json::Value,
    pub text: String,
    pub status: Status,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if cli.schema {
        print!("{SCHEMA}");
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(1);
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }

    let mut ctx = Context::default();
    let (name, outcome) = dispatch(command, &mut ctx);
    match outcome {
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
        Ok(outcome) => {
            if cli.json {
                let report = ctx.into_report(name, outcome.results);
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(match outcome.status {
                Status::Done => 0,
                Status::NotCertified => 3,
                Status::Abstained => 4,
            })
        }
    }
}

fn dispatch(command: Command, ctx: &mut Context) -> (&'static str, Result<Outcome, CliError>) {
    use commands::*;
    match command {
        Command::Analyze { file, r, s } => ("analyze", analyze(ctx, &file, r, s)),
        Command::Pi { file, hypergraph } => ("pi", pi(ctx, &file, hypergraph.as_deref())),
        Command::Dual { file } => ("dual", dual(ctx, &file)),
        Command::Realize {
            file,
            r,
            subcomplex,
            max_constraints,
        } => (
            "realize",
            realize(ctx, &file, r, subcomplex, max_constraints),
        ),
        Command::Wh { file, r, family } => ("wh", wh(ctx, &file, r, family.as_deref())),
        Command::Gen { kind } => {
            let out = match kind {
                GenCommand::Skeleton { k, m } => gen_skeleton(ctx, k, m),
                GenCommand::Points { m } => gen_points(ctx, m),
                GenCommand::Ramsey {
                    n,
                    clique,
                    r,
                    check_admissible,
                    no_empty_classes,
                    budget,
                } => gen_ramsey(
                    ctx,
                    n,
                    clique,
                    r,
                    check_admissible.then_some((!no_empty_classes, budget)),
                ),
                GenCommand::Selfdual { m, seed } => gen_selfdual(ctx, m, seed),
            };
            ("gen", out)
        }
        Command::Join { first, second } => ("join", join(ctx, &first, &second)),
        Command::Deljoin { file, r, budget } => ("deljoin", deljoin(ctx, &file, r, budget)),
        Command::Certify {
            files,
            r,
            d,
            single,
            index,
            s,
        } => {
            let out = match (index, d) {
                (Some(kind), _) => {
                    certify_index(ctx, &files, r, s, matches!(kind, IndexKind::Product))
                }
                (None, Some(d)) => certify(ctx, &files, r, d, single),
                (None, None) => Err(CliError::Usage("--d is required".into())),
            };
            ("certify", out)
        }
    }
}
