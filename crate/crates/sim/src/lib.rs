//! Bot-vs-bot play against [`acg_core`] for fuzzing, replay verification and
//! balance reports.
//!
//! Games are independent and seeded by `base_seed + game_index`, so a batch
//! produces the same report however it is scheduled across threads.

pub mod bot;
pub mod check;
pub mod fuzz;
pub mod report;
pub mod runner;
pub mod sweep;

pub use bot::{Bot, BotKind, BotStrategy};
pub use fuzz::{fuzz, FuzzFinding, FuzzSummary};
pub use report::BalanceReport;
pub use runner::{play_match, run_games, GameRecord, RunOptions, RunOutput};
pub use sweep::{window_sweep, with_defense_window, SweepRow};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("usage: {0}")]
    Usage(String),
    /// An operation the bots believed legal was rejected: an engine bug.
    #[error("game {game}: engine rejected a bot command: {source}")]
    Engine {
        game: u64,
        #[source]
        source: acg_core::GameError,
    },
    #[error(transparent)]
    Catalog(#[from] acg_core::CatalogError),
}
