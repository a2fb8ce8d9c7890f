//! Random command sequences, legal and otherwise, thrown at the engine.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use acg_core::plan::PlanEntry;
use acg_core::{
    AssetRef, Command, Engine, ErrorKind, HandSelection, MatchState, MediaType, Phase, Player,
    TurnPlan,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::step_violations;

/// Longest sequence tried; a full match with random plans usually fits.
const MAX_LEN: usize = 160;
const MAX_FINDINGS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "finding", rename_all = "snake_case")]
pub enum FuzzFinding {
    Panic {
        sequence: u64,
        match_seed: u64,
        message: String,
        repro: Vec<Command>,
    },
    Violation {
        sequence: u64,
        match_seed: u64,
        messages: Vec<String>,
        repro: Vec<Command>,
    },
    /// A rejected command still produced a different state.
    StateChangedOnError {
        sequence: u64,
        match_seed: u64,
        repro: Vec<Command>,
    },
    /// Replaying the accepted commands diverged at `index`; `repro` stops there.
    ReplayMismatch {
        sequence: u64,
        match_seed: u64,
        index: usize,
        repro: Vec<Command>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub sequences: u64,
    pub commands: u64,
    pub accepted: u64,
    pub rejected: BTreeMap<String, u64>,
    pub matches_completed: u64,
    pub panics: u64,
    pub corruptions: u64,
    pub findings: Vec<FuzzFinding>,
}

impl FuzzSummary {
    pub fn is_clean(&self) -> bool {
        self.panics == 0 && self.corruptions == 0
    }

    pub fn rejected_total(&self) -> u64 {
        self.rejected.values().sum()
    }

    fn merge(&mut self, other: FuzzSummary) {
        self.sequences += other.sequences;
        self.commands += other.commands;
        self.accepted += other.accepted;
        for (k, v) in other.rejected {
            *self.rejected.entry(k).or_default() += v;
        }
        self.matches_completed += other.matches_completed;
        self.panics += other.panics;
        self.corruptions += other.corruptions;
        let room = MAX_FINDINGS.saturating_sub(self.findings.len());
        self.findings.extend(other.findings.into_iter().take(room));
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "sequences {}  commands {}  accepted {}  completed matches {}\n",
            self.sequences, self.commands, self.accepted, self.matches_completed
        );
        for (k, v) in &self.rejected {
            s.push_str(&format!("  rejected {k:<17} {v}\n"));
        }
        s.push_str(&format!("panics {}  corruptions {}\n", self.panics, self.corruptions));
        s
    }
}

fn empty_summary() -> FuzzSummary {
    FuzzSummary {
        rejected: ErrorKind::ALL.iter().map(|k| (k.as_str().to_string(), 0)).collect(),
        ..FuzzSummary::default()
    }
}

/// Runs `n_sequences` sequences; sequence `i` is driven by `(seed, i)` alone.
pub fn fuzz(engine: &Engine, n_sequences: u64, seed: u64) -> FuzzSummary {
    (0..n_sequences)
        .into_par_iter()
        .map(|i| run_sequence(engine, seed, i))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(empty_summary(), |mut acc, s| {
            acc.merge(s);
            acc
        })
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "non-string panic".into())
}

fn run_sequence(engine: &Engine, seed: u64, index: u64) -> FuzzSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let match_seed: u64 = rng.random();
    let noise = rng.random_range(0..=4u32);
    let len = rng.random_range(1..=MAX_LEN);
    let mut out = empty_summary();
    out.sequences = 1;

    let mut accepted: Vec<Command> = Vec::new();
    // states[i] is the state after i accepted commands; the last is current.
    let mut states: Vec<MatchState> = vec![engine.new_match(match_seed)];
    // touched[i]: some rejected command was tried against states[i].
    let mut touched = vec![false];
    let mut tried: Vec<Command> = Vec::new();

    for _ in 0..len {
        let state = states.last().expect("initial state");
        let cmd = if rng.random_range(0..10) < noise {
            garbage_command(engine, &mut rng)
        } else {
            match legal_command(engine, state, &mut rng) {
                Some(c) => c,
                None => break,
            }
        };
        tried.push(cmd.clone());
        out.commands += 1;
        match catch_unwind(AssertUnwindSafe(|| engine.apply(state, &cmd))) {
            Err(p) => {
                out.panics += 1;
                out.findings.push(FuzzFinding::Panic {
                    sequence: index,
                    match_seed,
                    message: panic_message(p),
                    repro: tried,
                });
                return out;
            }
            Ok(Err(e)) => {
                *out.rejected.entry(e.kind().as_str().to_string()).or_default() += 1;
                touched[states.len() - 1] = true;
            }
            Ok(Ok(applied)) => {
                out.accepted += 1;
                let broken = step_violations(state, &applied.state, applied.log.as_ref());
                accepted.push(cmd);
                if !broken.is_empty() {
                    out.corruptions += 1;
                    out.findings.push(FuzzFinding::Violation {
                        sequence: index,
                        match_seed,
                        messages: broken,
                        repro: accepted,
                    });
                    return out;
                }
                states.push(applied.state);
                touched.push(false);
            }
        }
    }
    let state = states.last().expect("initial state");
    if state.phase == Phase::MatchOver {
        out.matches_completed += 1;
    }

    // Rebuild every prefix from the accepted commands alone. A stored state
    // that no longer matches was altered by a rejected command if one was
    // tried against it, otherwise replay itself diverged.
    let mut replayed = engine.new_match(match_seed);
    for (i, expected) in states.iter().enumerate() {
        if &replayed != expected {
            out.corruptions += 1;
            out.findings.push(if touched[i] {
                FuzzFinding::StateChangedOnError {
                    sequence: index,
                    match_seed,
                    repro: tried,
                }
            } else {
                FuzzFinding::ReplayMismatch {
                    sequence: index,
                    match_seed,
                    index: i,
                    repro: accepted[..i].to_vec(),
                }
            });
            break;
        }
        let Some(cmd) = accepted.get(i) else { break };
        match engine.apply(&replayed, cmd) {
            Ok(a) => replayed = a.state,
            Err(_) => {
                out.corruptions += 1;
                out.findings.push(FuzzFinding::ReplayMismatch {
                    sequence: index,
                    match_seed,
                    index: i + 1,
                    repro: accepted[..=i].to_vec(),
                });
                break;
            }
        }
    }
    out
}

fn pick_player(rng: &mut ChaCha8Rng) -> Player {
    if rng.random() {
        Player::A
    } else {
        Player::B
    }
}

fn junk_asset(rng: &mut ChaCha8Rng) -> AssetRef {
    let bytes: [u8; 8] = rng.random();
    AssetRef::for_bytes(&bytes, MediaType::Png)
}

/// A plausible command for the current phase, chosen from legal options.
pub fn legal_command(engine: &Engine, s: &MatchState, rng: &mut ChaCha8Rng) -> Option<Command> {
    let cat = engine.catalog();
    Some(match s.phase {
        Phase::Setup => {
            let player = if s.side(Player::A).has_selected() {
                Player::B
            } else {
                Player::A
            };
            let arch = cat.archetypes.choose(rng)?;
            let premades: Vec<_> = cat.premade_cards.choose_multiple(rng, 2).collect();
            Command::SelectHand {
                player,
                selection: HandSelection {
                    prompt_id: cat.prompts.choose(rng)?.id.clone(),
                    archetype_id: arch.id.clone(),
                    first_move_id: arch.move_pool.choose(rng)?.clone(),
                    premade_ids: [premades[0].id.clone(), premades[1].id.clone()],
                },
            }
        }
        Phase::Customize { round } => {
            let player = Player::BOTH
                .into_iter()
                .find(|&p| s.side(p).custom_card().map_or(0, |c| c.moves.len()) < round as usize)?;
            let side = s.side(player);
            let custom = side.custom_card()?;
            let arch = cat.archetype(side.archetype_id()?)?;
            let fresh: Vec<&String> = arch
                .move_pool
                .iter()
                .filter(|m| !custom.moves.iter().any(|c| &c.move_id == *m))
                .collect();
            Command::SelectRoundMove {
                player,
                move_id: (*fresh.choose(rng)?).clone(),
            }
        }
        Phase::Illustrate { round } => {
            if rng.random_ratio(1, 5) {
                Command::ExpireIllustration { round }
            } else {
                let player = Player::BOTH.into_iter().find(|&p| {
                    s.side(p)
                        .custom_card()
                        .and_then(|c| c.moves.get(round as usize - 1))
                        .is_some_and(|m| m.cover_art.is_none())
                })?;
                Command::AttachIllustration {
                    player,
                    round,
                    asset: junk_asset(rng),
                }
            }
        }
        Phase::AwaitPlans { .. } => {
            if s.both_plans_in() {
                Command::ResolveTurn
            } else {
                let player = Player::BOTH.into_iter().find(|&p| s.side(p).plan.is_none())?;
                match rng.random_range(0..80) {
                    0 => Command::Forfeit { player },
                    1 | 2 => Command::DeclareTie { player },
                    _ => Command::SubmitPlan {
                        player,
                        plan: random_legal_plan(engine, s, player, rng),
                    },
                }
            }
        }
        Phase::RoundOver { .. } => Command::ConcludeRound,
        Phase::MatchOver => return None,
    })
}

fn random_legal_plan(engine: &Engine, s: &MatchState, p: Player, rng: &mut ChaCha8Rng) -> TurnPlan {
    let legal = engine.legal_plans(s, p);
    let mut plan = TurnPlan::pass();
    for card in &legal.cards {
        let n = card.options.len();
        let pick = rng.random_range(0..=n);
        if pick < n {
            let o = &card.options[pick];
            plan.entries.push(PlanEntry {
                slot: card.slot,
                move_id: o.move_id.clone(),
                target: o.target,
            });
        }
    }
    plan
}

/// Any command with arbitrary fields; mostly illegal.
pub fn garbage_command(engine: &Engine, rng: &mut ChaCha8Rng) -> Command {
    let cat = engine.catalog();
    let player = pick_player(rng);
    let any_move = |rng: &mut ChaCha8Rng| {
        if rng.random_ratio(1, 8) {
            "no_such_move".to_string()
        } else {
            cat.moves.choose(rng).expect("moves").id.clone()
        }
    };
    match rng.random_range(0..9) {
        0 => Command::SelectHand {
            player,
            selection: HandSelection {
                prompt_id: if rng.random_ratio(1, 6) {
                    "no_such_prompt".into()
                } else {
                    cat.prompts.choose(rng).expect("prompts").id.clone()
                },
                archetype_id: cat.archetypes.choose(rng).expect("archetypes").id.clone(),
                first_move_id: any_move(rng),
                premade_ids: [
                    cat.premade_cards.choose(rng).expect("premades").id.clone(),
                    cat.premade_cards.choose(rng).expect("premades").id.clone(),
                ],
            },
        },
        1 => Command::SelectRoundMove {
            player,
            move_id: any_move(rng),
        },
        2 => Command::AttachIllustration {
            player,
            round: rng.random_range(0..5),
            asset: junk_asset(rng),
        },
        3 => Command::ExpireIllustration {
            round: rng.random_range(0..5),
        },
        4 => {
            let mut plan = TurnPlan::pass();
            for _ in 0..rng.random_range(0..4) {
                let target = if rng.random_ratio(1, 3) {
                    None
                } else {
                    Some(rng.random_range(0..4))
                };
                plan = plan.with(rng.random_range(0..4), any_move(rng), target);
            }
            Command::SubmitPlan { player, plan }
        }
        5 => Command::ResolveTurn,
        6 => Command::ConcludeRound,
        7 => Command::DeclareTie { player },
        _ => Command::Forfeit { player },
    }
}
