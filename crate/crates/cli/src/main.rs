mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmflow::bench::BenchConfig;
use mmflow::net::{BidirOptions, RandomNetConfig};
use mmflow::scalar::parse_rational;
use mmflow::{Mode, ProblemKind, Rational, SolveOptions};

use crate::commands::GenSpec;
use crate::error::{CliError, CliResult};

/// Maximum multiflow and maximum concurrent multiflow under link scheduling
/// constraints.
///
/// Exit status: 0 on success, 1 on invalid input (with line-anchored
/// diagnostics), 2 when a solver fails. Caps can be raised through
/// MMF_VERTEX_CAP, MMF_EDGE_CAP, MMF_CYCLE_CAP and MMF_MIS_CAP.
#[derive(Parser, Debug)]
#[command(name = "mmflow", version)]
struct Cli {
    /// Print errors as JSON objects on stderr.
    #[arg(long, global = true)]
    json_errors: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Joint rate-region/flow solve.
    Solve {
        #[command(flatten)]
        solve: SolveArgs,
        /// Include per-iteration duals and vertices.
        #[arg(long)]
        trace: bool,
    },
    /// Two-step reference method: full region, then one LP.
    Baseline {
        #[command(flatten)]
        solve: SolveArgs,
        /// Also reduce the region to its extreme points.
        #[arg(long)]
        hull: bool,
    },
    /// Write a generated netfile.
    Gen {
        #[command(subcommand)]
        which: GenCommand,
        /// Output path; stdout when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Maximum-weight independent set for a weight file.
    OracleMwis { netfile: PathBuf, weights: PathBuf },
    /// Maximum-mean cycle of the weighted scheduling graph.
    OracleMmc {
        netfile: PathBuf,
        weights: PathBuf,
        #[arg(long)]
        window: Option<usize>,
        /// Include the vertex list and adjacency matrix.
        #[arg(long)]
        dump: bool,
    },
    /// Desk-scale benchmark suites as CSV.
    Bench {
        #[arg(long, default_value = "lines")]
        suite: String,
        #[arg(long = "max-L", default_value_t = 6)]
        max_links: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random instances per size.
        #[arg(long, default_value_t = 3)]
        per_size: usize,
        #[arg(long)]
        skip_baseline: bool,
        #[arg(long)]
        exact: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    netfile: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::Mmf)]
    kind: KindArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Exact rational arithmetic throughout.
    #[arg(long)]
    exact: bool,
    /// Scheduling window; defaults to the largest delay (at least 1).
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Disable the largest-total-rate tie-break in the oracle.
    #[arg(long)]
    plain_ties: bool,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Unicast line N_{L,K} with delay d.
    Line {
        #[arg(long = "L")]
        links: usize,
        #[arg(long = "K", default_value_t = 1)]
        k: usize,
        #[arg(long = "d", default_value_t = 0, allow_negative_numbers = true)]
        d: i64,
    },
    /// Bidirectional line with two opposite unicast sessions.
    Bidir {
        #[arg(long = "N")]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        hop_delay: i64,
        /// Demands of the two sessions, e.g. `1,1/2`.
        #[arg(long, default_value = "1,1")]
        gammas: String,
    },
    /// Random connected acyclic multicast network, no delays.
    Random {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 1)]
        sessions: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = RandomNetConfig::DEFAULT_EDGE_PROB)]
        edge_prob: f64,
        #[arg(long)]
        max_links: Option<usize>,
        #[arg(long, default_value_t = 2)]
        sinks: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Mmf,
    Mcmf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Auto,
    ZeroDelay,
    Delay,
}

fn env_cap(name: &'static str) -> CliResult<Option<usize>> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Env {
                name,
                message: format!("`{v}` is not a nonnegative integer"),
            }),
        Err(_) => Ok(None),
    }
}

fn apply_env_caps(opts: &mut SolveOptions) -> CliResult<()> {
    if let Some(v) = env_cap("MMF_VERTEX_CAP")? {
        opts.graph_limits.max_vertices = v;
    }
    if let Some(v) = env_cap("MMF_EDGE_CAP")? {
        opts.graph_limits.max_edges = v;
    }
    if let Some(v) = env_cap("MMF_CYCLE_CAP")? {
        opts.max_cycles = v;
    }
    if let Some(v) = env_cap("MMF_MIS_CAP")? {
        opts.max_independent_sets = v;
    }
    Ok(())
}

fn options(a: &SolveArgs) -> CliResult<SolveOptions> {
    let kind = match a.kind {
        KindArg::Mmf => ProblemKind::Mmf,
        KindArg::Mcmf => ProblemKind::Mcmf,
    };
    let mode = match a.mode {
        ModeArg::Auto => Mode::Auto,
        ModeArg::ZeroDelay => Mode::ZeroDelay,
        ModeArg::Delay => Mode::Delay,
    };
    let mut opts = SolveOptions {
        window: a.window,
        prefer_total_rate: !a.plain_ties,
        ..SolveOptions::new(kind, mode).exact(a.exact)
    };
    if let Some(n) = a.max_iterations {
        opts.max_iterations = n;
    }
    apply_env_caps(&mut opts)?;
    Ok(opts)
}

fn parse_gammas(text: &str) -> CliResult<(Rational, Rational)> {
    let parts: Vec<Option<Rational>> = text.split(',').map(parse_rational).collect();
    match parts.as_slice() {
        [Some(a), Some(b)] => Ok((a.clone(), b.clone())),
        _ => Err(CliError::Usage(format!(
            "--gammas expects two numbers like `1,1/2`, got `{text}`"
        ))),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve { solve, trace } => {
            let opts = options(&solve)?;
            let v = commands::cmd_solve(&solve.netfile, &opts, trace)?;
            commands::emit(&v, None)
        }
        Command::Baseline { solve, hull } => {
            let opts = options(&solve)?;
            let v = commands::cmd_baseline(&solve.netfile, &opts, hull)?;
            commands::emit(&v, None)
        }
        Command::Gen { which, output } => {
            let spec = match which {
                GenCommand::Line { links, k, d } => GenSpec::Line { links, k, d },
                GenCommand::Bidir {
                    nodes,
                    hop_delay,
                    gammas,
                } => GenSpec::Bidir {
                    nodes,
                    opts: BidirOptions {
                        hop_delay,
                        gammas: parse_gammas(&gammas)?,
                    },
                },
                GenCommand::Random {
                    nodes,
                    sessions,
                    seed,
                    edge_prob,
                    max_links,
                    sinks,
                } => GenSpec::Random {
                    cfg: RandomNetConfig {
                        edge_prob,
                        max_links,
                        sinks_per_session: sinks,
                        ..RandomNetConfig::new(nodes, sessions)
                    },
                    seed,
                },
            };
            let text = commands::cmd_gen(&spec)?;
            commands::write_text(&text, output.as_deref())
        }
        Command::OracleMwis { netfile, weights } => {
            let v = commands::cmd_oracle_mwis(&netfile, &weights)?;
            commands::emit(&v, None)
        }
        Command::OracleMmc {
            netfile,
            weights,
            window,
            dump,
        } => {
            let mut opts = SolveOptions::default();
            apply_env_caps(&mut opts)?;
            let v = commands::cmd_oracle_mmc(&netfile, &weights, window, &opts, dump)?;
            commands::emit(&v, None)
        }
        Command::Bench {
            suite,
            max_links,
            seed,
            per_size,
            skip_baseline,
            exact,
            output,
        } => {
            let mut cfg = BenchConfig::new(commands::suite(&suite)?, max_links);
            cfg.seed = seed;
            cfg.random_per_size = per_size;
            cfg.skip_baseline = skip_baseline;
            cfg.options.exact = exact;
            apply_env_caps(&mut cfg.options)?;
            commands::cmd_bench(&cfg, output.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let json_errors = std::env::args().any(|a| a == "--json-errors");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let text = text.trim_end().trim_start_matches("error: ").to_string();
            let err = CliError::Usage(text);
            report_error(&err, json_errors);
            return ExitCode::from(err.exit_code());
        }
    };
    let json_errors = cli.json_errors;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report_error(&err, json_errors);
            ExitCode::from(err.exit_code())
        }
    }
}

fn report_error(err: &CliError, json: bool) {
    if json {
        eprintln!("{}", err.to_json());
    } else {
        eprintln!("{}", err.render());
    }
}
