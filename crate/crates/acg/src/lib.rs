//! One crate for the whole game: the rules engine ([`core`]), the bot
//! simulator ([`sim`]) and the match server ([`server`]), plus the `acg`
//! command line in [`cli`].
//!
//! ```
//! use acg::core::{Engine, Player};
//!
//! let engine = Engine::builtin();
//! let state = engine.new_match(7);
//! let view = engine.project(&state, Player::A);
//! assert!(view.hand.is_empty());
//! ```

pub mod cli;

pub use acg_core as core;
pub use acg_server as server;
pub use acg_sim as sim;
