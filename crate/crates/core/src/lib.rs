//! Rules engine for a synchronous two-player card game where each player
//! customizes one card per round, attaches an illustration to the new move,
//! and then battles in simultaneous plan/reveal turns.
//!
//! Everything here is pure: no clocks, no I/O, no ambient randomness. Time
//! enters as explicit commands ([`Command::ExpireIllustration`]) and dice
//! come from a counter-based stream keyed by the match seed, so any match can
//! be replayed bit-for-bit from `(catalog, seed, commands)`.
//!
//! ```
//! use acg_core::{catalog, Engine};
//!
//! let engine = Engine::new(catalog::builtin_catalog()).unwrap();
//! let state = engine.new_match(7);
//! assert_eq!(state.round(), 1);
//! ```

pub mod asset;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod journal;
pub mod plan;
pub mod resolve;
pub mod rng;
pub mod state;
pub mod view;

pub use asset::{AssetRef, MediaType};
pub use catalog::{Catalog, MoveKind, MoveSpec};
pub use engine::{Applied, Command, Engine, HandSelection};
pub use error::{CatalogError, ErrorKind, GameError, Violation};
pub use journal::{replay, Journal, JournalEntry};
pub use plan::{LegalPlans, PlanEntry, TurnPlan};
pub use resolve::{check_round_end, ResolutionLog, Step};
pub use state::{CardInstance, CardRef, DrawReason, MatchResult, MatchState, Phase, Player, RoundOutcome};
pub use view::PlayerView;

/// Rounds in a match.
pub const ROUNDS: u8 = 3;
/// Cards in every hand: the custom card in slot 0, two premade cards after it.
pub const HAND_SIZE: usize = 3;
