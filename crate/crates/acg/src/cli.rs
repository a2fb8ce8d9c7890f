//! The `acg` command line.

use std::net::SocketAddr;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use acg_core::catalog::{builtin_catalog, check_content_scale, load_catalog, validate_catalog, Catalog};
use acg_core::Engine;
use acg_server::{Server, ServerConfig};
use acg_sim::report::games_csv;
use acg_sim::sweep::{is_non_decreasing, sweep_csv};
use acg_sim::{BotKind, BotStrategy, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "acg", version, about = "Illustrate-and-battle card game: server, simulator and content tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve matches over WebSocket and HTTP.
    Server(ServerArgs),
    /// Bot-vs-bot simulation.
    #[command(subcommand)]
    Sim(SimCommand),
    /// Content catalog tools.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, clap::Args)]
pub struct ServerArgs {
    #[arg(long, env = "ACG_BIND", default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
    /// Catalog JSON; the built-in catalog when omitted.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    #[arg(long, env = "ACG_DATA_DIR", default_value = "acg-data")]
    pub data_dir: PathBuf,
    /// Multiplies the 1080/600/420 s Illustrate schedule.
    #[arg(long, default_value_t = 1.0)]
    pub timer_scale: f64,
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Play N games and write a balance report.
    Run {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value = "random-legal")]
        bot_a: BotKind,
        #[arg(long, default_value = "random-legal")]
        bot_b: BotKind,
        #[arg(long, default_value_t = 1000)]
        games: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seat B with A's hand and round moves.
        #[arg(long)]
        mirror: bool,
    },
    /// Random command sequences, legal and not, against the engine.
    Fuzz {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        sequences: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Defense-biased vs greedy-damage win rate per dodge/reflect window.
    Sweep {
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// `1..10` (inclusive), `3..=7`, or a list such as `1,5,10`.
        #[arg(long, default_value = "1..10", value_parser = parse_windows)]
        windows: Windows,
        #[arg(long, default_value_t = 1000)]
        games_per: u64,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// Check a catalog file; exits nonzero on any violation.
    Validate {
        path: PathBuf,
        /// Also require the shipped content scale.
        #[arg(long)]
        scale: bool,
    },
    /// Print the built-in catalog.
    Dump,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Windows(pub Vec<u8>);

pub fn parse_windows(s: &str) -> Result<Windows, String> {
    let num = |t: &str| t.trim().parse::<u8>().map_err(|e| format!("`{t}`: {e}"));
    let range = |r: RangeInclusive<u8>| Windows(r.collect());
    if let Some((lo, hi)) = s.split_once("..=") {
        return Ok(range(num(lo)?..=num(hi)?));
    }
    if let Some((lo, hi)) = s.split_once("..") {
        return Ok(range(num(lo)?..=num(hi)?));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(Windows)
}

fn catalog_from(path: Option<&Path>) -> anyhow::Result<Catalog> {
    match path {
        None => Ok(builtin_catalog()),
        Some(p) => {
            let bytes = std::fs::read(p).with_context(|| format!("reading {}", p.display()))?;
            load_catalog(&bytes).with_context(|| format!("loading {}", p.display()))
        }
    }
}

pub fn run(cli: Cli) -> ExitCode {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Server(args) => serve(args),
        Command::Sim(cmd) => sim(cmd),
        Command::Catalog(CatalogCommand::Validate { path, scale }) => {
            let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
            let catalog = match load_catalog(&bytes) {
                Ok(c) => c,
                Err(e) => {
                    println!("{}: {e}", path.display());
                    return Ok(ExitCode::FAILURE);
                }
            };
            let mut violations = validate_catalog(&catalog);
            if scale {
                violations.extend(check_content_scale(&catalog));
            }
            for v in &violations {
                println!("{}: {v}", path.display());
            }
            if violations.is_empty() {
                println!("{}: ok (digest {})", path.display(), catalog.digest());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Catalog(CatalogCommand::Dump) => {
            println!("{}", builtin_catalog().to_json());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn serve(args: ServerArgs) -> anyhow::Result<ExitCode> {
    if !(args.timer_scale > 0.0 && args.timer_scale.is_finite()) {
        bail!("--timer-scale must be a positive number");
    }
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    let engine = Engine::new(catalog_from(args.catalog.as_deref())?)?;
    let config = ServerConfig {
        bind: args.bind,
        data_dir: args.data_dir,
        timer_scale: args.timer_scale,
        ..ServerConfig::default()
    };
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let server = Server::new(engine, config)?;
        let running = server.start().await?;
        println!("ws   {}", running.ws_url());
        println!("http {}", running.http_url());
        running.wait().await
    })?;
    Ok(ExitCode::SUCCESS)
}

fn sim(cmd: SimCommand) -> anyhow::Result<ExitCode> {
    match cmd {
        SimCommand::Run {
            catalog,
            bot_a,
            bot_b,
            games,
            seed,
            out,
            mirror,
        } => {
            let engine = Engine::new(catalog_from(catalog.as_deref())?)?;
            let a = BotStrategy::new(bot_a, seed ^ 0xA);
            let b = BotStrategy::new(bot_b, seed ^ 0xB);
            let opts = RunOptions {
                mirror_hands: mirror,
                keep_journals: false,
            };
            let output = acg_sim::run_games(&engine, &a, &b, games, seed, opts)?;
            print!("{}", output.report.summary());
            if let Some(dir) = out {
                output.report.write_dir(&dir)?;
                std::fs::write(dir.join("games.csv"), games_csv(&output.records))?;
                println!("report written to {}", dir.display());
            }
            let r = &output.report;
            Ok(if r.illegal_states == 0 && r.replay_failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        SimCommand::Fuzz {
            catalog,
            sequences,
            seed,
        } => {
            let engine = Engine::new(catalog_from(catalog.as_deref())?)?;
            let summary = acg_sim::fuzz(&engine, sequences, seed);
            print!("{}", summary.summary());
            for f in &summary.findings {
                println!("{}", serde_json::to_string(f)?);
            }
            Ok(if summary.is_clean() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        SimCommand::Sweep {
            catalog,
            windows,
            games_per,
            seed,
            out,
        } => {
            let catalog = catalog_from(catalog.as_deref())?;
            let rows = acg_sim::window_sweep(&catalog, &windows.0, games_per, seed)?;
            let csv = sweep_csv(&rows);
            print!("{csv}");
            if let Some(path) = out {
                std::fs::write(&path, &csv)?;
            }
            if !is_non_decreasing(&rows) {
                println!("note: win rate is not monotone in the window");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
