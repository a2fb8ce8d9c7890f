//! Scripted players. Every decision is drawn from the options the engine
//! reports as legal.

use std::fmt;
use std::str::FromStr;

use acg_core::catalog::{MoveKind, PremadeCard};
use acg_core::plan::{PlanEntry, PlanOption};
use acg_core::{Engine, HandSelection, MatchState, Player, TurnPlan};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BotKind {
    /// Uniform over legal options, passing one time in ten.
    RandomLegal,
    /// Maximizes expected immediate damage using exact d10 odds.
    GreedyDamage,
    /// Reflects whenever it can and dodges when hurt; attacks otherwise.
    DefenseBiased,
}

impl BotKind {
    pub const ALL: [BotKind; 3] = [BotKind::RandomLegal, BotKind::GreedyDamage, BotKind::DefenseBiased];

    pub fn name(self) -> &'static str {
        match self {
            BotKind::RandomLegal => "random-legal",
            BotKind::GreedyDamage => "greedy-damage",
            BotKind::DefenseBiased => "defense-biased",
        }
    }
}

impl fmt::Display for BotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BotKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown bot `{s}` (expected random-legal, greedy-damage or defense-biased)"))
    }
}

/// A bot kind plus its own seed, independent of the match seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BotStrategy {
    pub kind: BotKind,
    pub seed: u64,
}

impl BotStrategy {
    pub fn new(kind: BotKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    /// The bot instance for one seat of one game.
    pub fn instantiate(&self, game_index: u64, seat: Player) -> Bot {
        let mixed = self.seed
            ^ game_index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ (seat.index() as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03);
        Bot {
            kind: self.kind,
            rng: ChaCha8Rng::seed_from_u64(mixed),
        }
    }
}

pub struct Bot {
    kind: BotKind,
    rng: ChaCha8Rng,
}

fn attack_value(engine: &Engine, card: &PremadeCard) -> u32 {
    card.moves
        .iter()
        .filter_map(|m| engine.move_spec(&m.move_id))
        .map(|s| s.magnitude)
        .sum()
}

fn defense_score(engine: &Engine, ids: impl IntoIterator<Item = impl AsRef<str>>) -> u32 {
    ids.into_iter()
        .filter_map(|id| engine.move_spec(id.as_ref()))
        .map(|s| match s.kind {
            MoveKind::Reflect => 2,
            MoveKind::Dodge => 1,
            MoveKind::Attack => 0,
        })
        .sum()
}

impl Bot {
    pub fn kind(&self) -> BotKind {
        self.kind
    }

    pub fn choose_hand(&mut self, engine: &Engine) -> HandSelection {
        let cat = engine.catalog();
        let prompt_id = cat.prompts.choose(&mut self.rng).expect("prompts").id.clone();
        match self.kind {
            BotKind::RandomLegal => {
                let arch = cat.archetypes.choose(&mut self.rng).expect("archetypes");
                let picks: Vec<_> = cat.premade_cards.choose_multiple(&mut self.rng, 2).collect();
                HandSelection {
                    prompt_id,
                    archetype_id: arch.id.clone(),
                    first_move_id: arch.move_pool.choose(&mut self.rng).expect("pool").clone(),
                    premade_ids: [picks[0].id.clone(), picks[1].id.clone()],
                }
            }
            BotKind::GreedyDamage => {
                let arch = cat
                    .archetypes
                    .iter()
                    .max_by(|a, b| a.base_hp.cmp(&b.base_hp).then(b.id.cmp(&a.id)))
                    .expect("archetypes");
                let mut deck: Vec<_> = cat.premade_cards.iter().collect();
                deck.sort_by(|a, b| {
                    (attack_value(engine, b) + b.max_hp)
                        .cmp(&(attack_value(engine, a) + a.max_hp))
                        .then(a.id.cmp(&b.id))
                });
                HandSelection {
                    prompt_id,
                    archetype_id: arch.id.clone(),
                    first_move_id: self.pick_pool_move(engine, &arch.move_pool, &[]),
                    premade_ids: [deck[0].id.clone(), deck[1].id.clone()],
                }
            }
            BotKind::DefenseBiased => {
                let arch = cat
                    .archetypes
                    .iter()
                    .max_by(|a, b| {
                        defense_score(engine, &a.move_pool)
                            .cmp(&defense_score(engine, &b.move_pool))
                            .then(a.base_hp.cmp(&b.base_hp))
                            .then(b.id.cmp(&a.id))
                    })
                    .expect("archetypes");
                let mut deck: Vec<_> = cat.premade_cards.iter().collect();
                let score = |c: &PremadeCard| defense_score(engine, c.moves.iter().map(|m| &m.move_id));
                deck.sort_by(|a, b| {
                    score(b)
                        .cmp(&score(a))
                        .then(b.max_hp.cmp(&a.max_hp))
                        .then(a.id.cmp(&b.id))
                });
                HandSelection {
                    prompt_id,
                    archetype_id: arch.id.clone(),
                    first_move_id: self.pick_pool_move(engine, &arch.move_pool, &[]),
                    premade_ids: [deck[0].id.clone(), deck[1].id.clone()],
                }
            }
        }
    }

    /// The custom card's move for the current `Customize` round.
    pub fn choose_round_move(&mut self, engine: &Engine, state: &MatchState, me: Player) -> String {
        let side = state.side(me);
        let arch = engine
            .catalog()
            .archetype(side.archetype_id().expect("custom card"))
            .expect("validated archetype");
        let taken: Vec<&str> = side
            .custom_card()
            .expect("custom card")
            .moves
            .iter()
            .map(|m| m.move_id.as_str())
            .collect();
        self.pick_pool_move(engine, &arch.move_pool, &taken)
    }

    fn pick_pool_move(&mut self, engine: &Engine, pool: &[String], taken: &[&str]) -> String {
        let fresh: Vec<&String> = pool.iter().filter(|m| !taken.contains(&m.as_str())).collect();
        let spec = |id: &str| engine.move_spec(id).expect("validated move");
        let best = match self.kind {
            BotKind::RandomLegal => return (*fresh.choose(&mut self.rng).expect("fresh move")).clone(),
            // Biggest attack first, then the widest defensive window.
            BotKind::GreedyDamage => fresh.iter().max_by(|a, b| {
                let (sa, sb) = (spec(a), spec(b));
                (sa.kind == MoveKind::Attack, sa.magnitude, sa.dice_window)
                    .cmp(&(sb.kind == MoveKind::Attack, sb.magnitude, sb.dice_window))
                    .then(b.cmp(a))
            }),
            // Reflect, then Dodge, then the biggest attack.
            BotKind::DefenseBiased => fresh.iter().max_by(|a, b| {
                let (sa, sb) = (spec(a), spec(b));
                let rank = |k: MoveKind| match k {
                    MoveKind::Reflect => 2,
                    MoveKind::Dodge => 1,
                    MoveKind::Attack => 0,
                };
                (rank(sa.kind), sa.dice_window, sa.magnitude)
                    .cmp(&(rank(sb.kind), sb.dice_window, sb.magnitude))
                    .then(b.cmp(a))
            }),
        };
        (*best.expect("pool has a fresh move")).clone()
    }

    pub fn choose_plan(&mut self, engine: &Engine, state: &MatchState, me: Player) -> TurnPlan {
        let legal = engine.legal_plans(state, me);
        let mut plan = TurnPlan::pass();
        match self.kind {
            BotKind::RandomLegal => {
                for card in &legal.cards {
                    if card.options.is_empty() || self.rng.random_ratio(1, 10) {
                        continue;
                    }
                    let o = card.options.choose(&mut self.rng).expect("non-empty");
                    plan.entries.push(entry(card.slot, o));
                }
            }
            BotKind::GreedyDamage | BotKind::DefenseBiased => {
                let opp = &state.side(me.other()).hand;
                let mut remaining: Vec<u32> = opp.iter().map(|c| c.hp).collect();
                let incoming = expected_incoming(engine, state, me);
                for card in &legal.cards {
                    let own = &state.side(me).hand[card.slot as usize];
                    let choice = if self.kind == BotKind::DefenseBiased {
                        defensive_choice(engine, &card.options, own.hp * 2 <= own.max_hp)
                    } else {
                        None
                    };
                    let choice = choice.or_else(|| best_by_expected_damage(engine, &card.options, &remaining, incoming));
                    if let Some(o) = choice {
                        if let (MoveKind::Attack, Some(t)) = (o.kind, o.target) {
                            let m = engine.move_spec(&o.move_id).expect("move").magnitude;
                            remaining[t as usize] = remaining[t as usize].saturating_sub(m);
                        }
                        plan.entries.push(entry(card.slot, o));
                    }
                }
            }
        }
        plan
    }
}

fn entry(slot: u8, o: &PlanOption) -> PlanEntry {
    PlanEntry {
        slot,
        move_id: o.move_id.clone(),
        target: o.target,
    }
}

/// Damage a single own card can expect to receive this turn: the opponent's
/// strongest unlocked attack per alive card, spread over our alive cards.
fn expected_incoming(engine: &Engine, state: &MatchState, me: Player) -> f64 {
    let round = state.round();
    let total: u32 = state
        .side(me.other())
        .hand
        .iter()
        .filter(|c| !c.knocked_out())
        .map(|c| {
            c.moves
                .iter()
                .filter(|m| m.activation_round <= round)
                .filter_map(|m| engine.move_spec(&m.move_id))
                .filter(|s| s.kind == MoveKind::Attack)
                .map(|s| s.magnitude)
                .max()
                .unwrap_or(0)
        })
        .sum();
    let alive = state.side(me).hand.iter().filter(|c| !c.knocked_out()).count().max(1);
    f64::from(total) / alive as f64
}

/// Highest expected damage to the opponent; ties keep the earliest option
/// (lowest move id, then lowest target). Zero-value options are skipped.
fn best_by_expected_damage<'a>(
    engine: &Engine,
    options: &'a [PlanOption],
    remaining: &[u32],
    incoming: f64,
) -> Option<&'a PlanOption> {
    let mut sorted: Vec<&PlanOption> = options.iter().collect();
    sorted.sort_by(|a, b| a.move_id.cmp(&b.move_id).then(a.target.cmp(&b.target)));
    let mut best: Option<(&PlanOption, f64)> = None;
    for o in sorted {
        let spec = engine.move_spec(&o.move_id).expect("move");
        let value = match (o.kind, o.target) {
            (MoveKind::Attack, Some(t)) => f64::from(spec.magnitude.min(remaining[t as usize])),
            (MoveKind::Reflect, _) => f64::from(spec.dice_window) / 10.0 * incoming,
            _ => 0.0,
        };
        if value > 0.0 && best.map_or(true, |(_, v)| value > v) {
            best = Some((o, value));
        }
    }
    best.map(|(o, _)| o)
}

fn defensive_choice<'a>(engine: &Engine, options: &'a [PlanOption], hurt: bool) -> Option<&'a PlanOption> {
    let widest = |kind: MoveKind| {
        options
            .iter()
            .filter(|o| o.kind == kind)
            .max_by_key(|o| (engine.move_spec(&o.move_id).map_or(0, |s| s.dice_window), std::cmp::Reverse(o.move_id.clone())))
    };
    widest(MoveKind::Reflect).or_else(|| if hurt { widest(MoveKind::Dodge) } else { None })
}
