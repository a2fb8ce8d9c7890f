//! Command journals and deterministic replay.

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::engine::{Command, Engine};
use crate::error::GameError;
use crate::state::MatchState;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalEntry {
    pub command: Command,
    /// Hash of the state right after `command` was applied.
    pub state_hash: String,
}

/// Seed plus every accepted command, each with the hash it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Journal {
    pub seed: u64,
    pub catalog_digest: String,
    pub entries: Vec<JournalEntry>,
}

impl Journal {
    pub fn new(engine: &Engine, seed: u64) -> Self {
        Self {
            seed,
            catalog_digest: engine.catalog_digest().to_string(),
            entries: Vec::new(),
        }
    }

    pub fn record(&mut self, command: Command, after: &MatchState) {
        self.entries.push(JournalEntry {
            command,
            state_hash: after.state_hash(),
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn commands(&self) -> impl Iterator<Item = &Command> {
        self.entries.iter().map(|e| &e.command)
    }

    /// Replays every entry and checks each recorded hash. Fails at the first
    /// entry that is rejected or hashes differently.
    pub fn verify(&self, engine: &Engine) -> Result<MatchState, GameError> {
        if self.catalog_digest != engine.catalog_digest() {
            return Err(GameError::ReplayMismatch {
                index: 0,
                reason: "journal was recorded against a different catalog".into(),
            });
        }
        let mut state = engine.new_match(self.seed);
        for (index, entry) in self.entries.iter().enumerate() {
            state = engine
                .apply(&state, &entry.command)
                .map_err(|e| GameError::ReplayMismatch {
                    index,
                    reason: format!("{} rejected: {e}", entry.command.name()),
                })?
                .state;
            let hash = state.state_hash();
            if hash != entry.state_hash {
                return Err(GameError::ReplayMismatch {
                    index,
                    reason: format!("state hash {hash} != recorded {}", entry.state_hash),
                });
            }
        }
        Ok(state)
    }
}

impl Engine {
    /// Applies `commands` to a fresh match. Any rejected command is reported
    /// as a [`GameError::ReplayMismatch`] at its index.
    pub fn replay<'a>(
        &self,
        seed: u64,
        commands: impl IntoIterator<Item = &'a Command>,
    ) -> Result<MatchState, GameError> {
        let mut state = self.new_match(seed);
        for (index, command) in commands.into_iter().enumerate() {
            state = self
                .apply(&state, command)
                .map_err(|e| GameError::ReplayMismatch {
                    index,
                    reason: format!("{} rejected: {e}", command.name()),
                })?
                .state;
        }
        Ok(state)
    }
}

pub fn replay(catalog: &Catalog, seed: u64, commands: &[Command]) -> Result<MatchState, GameError> {
    Engine::new(catalog.clone())?.replay(seed, commands)
}
