use std::collections::{BTreeMap, BTreeSet};

use acg_core::{
    Command, Engine, Journal, MatchResult, MatchState, Phase, Player, ResolutionLog, RoundOutcome,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bot::{Bot, BotStrategy};
use crate::check::step_violations;
use crate::report::BalanceReport;
use crate::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Seat B copies seat A's hand and round picks.
    pub mirror_hands: bool,
    /// Keep every game's journal in the output.
    pub keep_journals: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            mirror_hands: false,
            keep_journals: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameRecord {
    pub index: u64,
    pub seed: u64,
    pub archetypes: [String; 2],
    pub result: MatchResult,
    pub rounds: Vec<RoundOutcome>,
    pub turns_per_round: Vec<u32>,
    /// Plan entries per move id, per seat.
    pub move_picks: [BTreeMap<String, u32>; 2],
    /// Dice windows of defensive moves each seat used.
    pub windows_used: [BTreeSet<u8>; 2],
    pub final_hash: String,
    pub violations: Vec<String>,
    pub replay_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub journal: Option<Journal>,
}

impl GameRecord {
    pub fn winner(&self) -> Option<Player> {
        match self.result {
            MatchResult::Winner { player } => Some(player),
            MatchResult::Drawn => None,
        }
    }
}

pub struct RunOutput {
    pub report: BalanceReport,
    pub records: Vec<GameRecord>,
}

struct Driver<'e> {
    engine: &'e Engine,
    index: u64,
    state: MatchState,
    journal: Journal,
    violations: Vec<String>,
}

impl Driver<'_> {
    fn step(&mut self, command: Command) -> Result<Option<ResolutionLog>, SimError> {
        let applied = self
            .engine
            .apply(&self.state, &command)
            .map_err(|source| SimError::Engine {
                game: self.index,
                source,
            })?;
        self.violations
            .extend(step_violations(&self.state, &applied.state, applied.log.as_ref()));
        self.journal.record(command, &applied.state);
        self.state = applied.state;
        Ok(applied.log)
    }
}

/// Plays one complete match between two bots.
pub fn play_match(
    engine: &Engine,
    bot_a: &BotStrategy,
    bot_b: &BotStrategy,
    index: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<GameRecord, SimError> {
    let mut bots: [Bot; 2] = [
        bot_a.instantiate(index, Player::A),
        bot_b.instantiate(index, Player::B),
    ];
    let mut d = Driver {
        engine,
        index,
        state: engine.new_match(seed),
        journal: Journal::new(engine, seed),
        violations: Vec::new(),
    };
    let mut turns_per_round = Vec::new();
    let mut move_picks: [BTreeMap<String, u32>; 2] = Default::default();
    let mut windows_used: [BTreeSet<u8>; 2] = Default::default();
    let placeholder = engine.catalog().placeholder_asset.clone();

    loop {
        match d.state.phase {
            Phase::Setup => {
                let a = bots[0].choose_hand(engine);
                let b = if opts.mirror_hands {
                    a.clone()
                } else {
                    bots[1].choose_hand(engine)
                };
                d.step(Command::SelectHand {
                    player: Player::A,
                    selection: a,
                })?;
                d.step(Command::SelectHand {
                    player: Player::B,
                    selection: b,
                })?;
            }
            Phase::Customize { .. } => {
                let a = bots[0].choose_round_move(engine, &d.state, Player::A);
                let b = if opts.mirror_hands {
                    a.clone()
                } else {
                    bots[1].choose_round_move(engine, &d.state, Player::B)
                };
                d.step(Command::SelectRoundMove {
                    player: Player::A,
                    move_id: a,
                })?;
                d.step(Command::SelectRoundMove {
                    player: Player::B,
                    move_id: b,
                })?;
            }
            Phase::Illustrate { round } => {
                for player in Player::BOTH {
                    d.step(Command::AttachIllustration {
                        player,
                        round,
                        asset: placeholder.clone(),
                    })?;
                }
            }
            Phase::AwaitPlans { round, .. } => {
                for player in Player::BOTH {
                    let plan = bots[player.index()].choose_plan(engine, &d.state, player);
                    for e in &plan.entries {
                        *move_picks[player.index()].entry(e.move_id.clone()).or_default() += 1;
                        let spec = engine.move_spec(&e.move_id).expect("legal move");
                        if spec.kind.is_defense() {
                            windows_used[player.index()].insert(spec.dice_window);
                        }
                    }
                    d.step(Command::SubmitPlan { player, plan })?;
                }
                d.step(Command::ResolveTurn)?;
                if turns_per_round.len() < round as usize {
                    turns_per_round.resize(round as usize, 0);
                }
                turns_per_round[round as usize - 1] += 1;
            }
            Phase::RoundOver { .. } => {
                d.step(Command::ConcludeRound)?;
            }
            Phase::MatchOver => break,
        }
    }

    let final_hash = d.state.state_hash();
    let replay_ok = d
        .journal
        .verify(engine)
        .is_ok_and(|s| s.state_hash() == final_hash);
    let archetypes = Player::BOTH.map(|p| d.state.side(p).archetype_id().unwrap_or_default().to_string());
    Ok(GameRecord {
        index,
        seed,
        archetypes,
        result: d.state.result.expect("MatchOver has a result"),
        rounds: d.state.rounds.clone(),
        turns_per_round,
        move_picks,
        windows_used,
        final_hash,
        violations: d.violations,
        replay_ok,
        journal: opts.keep_journals.then_some(d.journal),
    })
}

/// Plays `n` games; game `i` uses match seed `base_seed + i`.
pub fn run_games(
    engine: &Engine,
    bot_a: &BotStrategy,
    bot_b: &BotStrategy,
    n: u64,
    base_seed: u64,
    opts: RunOptions,
) -> Result<RunOutput, SimError> {
    if n == 0 {
        return Err(SimError::Usage("--games must be at least 1".into()));
    }
    let records = (0..n)
        .into_par_iter()
        .map(|i| play_match(engine, bot_a, bot_b, i, base_seed.wrapping_add(i), opts))
        .collect::<Result<Vec<_>, _>>()?;
    let report = BalanceReport::from_records(&records);
    Ok(RunOutput { report, records })
}
