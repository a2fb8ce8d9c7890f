#![allow(dead_code)]

use acg_core::catalog::MoveKind;
use acg_core::plan::{PlanEntry, TurnPlan};
use acg_core::{AssetRef, Command, Engine, HandSelection, MatchState, MediaType, Phase, Player};

pub fn engine() -> Engine {
    Engine::builtin()
}

pub fn selection(archetype: &str, first_move: &str, premades: [&str; 2]) -> HandSelection {
    HandSelection {
        prompt_id: "feline_warrior".into(),
        archetype_id: archetype.into(),
        first_move_id: first_move.into(),
        premade_ids: premades.map(String::from),
    }
}

/// A: Vanguard (52 HP) opening with Chilling Axe, plus Blind Rex and Feline Duelist.
pub fn sel_a() -> HandSelection {
    selection("vanguard", "chilling_axe", ["blind_rex", "feline_duelist"])
}

/// B: Arcanist (30 HP) opening with Ember Bolt, plus Ice Sentry and Vine Maw.
pub fn sel_b() -> HandSelection {
    selection("arcanist", "ember_bolt", ["ice_sentry", "vine_maw"])
}

pub fn art(tag: &str) -> AssetRef {
    AssetRef::for_bytes(tag.as_bytes(), MediaType::Png)
}

pub fn setup(engine: &Engine, seed: u64, a: &HandSelection, b: &HandSelection) -> MatchState {
    let s = engine.new_match(seed);
    let s = engine.select_hand(&s, Player::A, a).unwrap();
    engine.select_hand(&s, Player::B, b).unwrap()
}

/// Illustrate(round) -> AwaitPlans(round, 1) with both players attaching.
pub fn illustrate(engine: &Engine, s: &MatchState, round: u8) -> MatchState {
    let s = engine
        .attach_illustration(s, Player::A, round, &art(&format!("a{round}")))
        .unwrap();
    engine
        .attach_illustration(&s, Player::B, round, &art(&format!("b{round}")))
        .unwrap()
}

pub fn battle_ready(engine: &Engine, seed: u64, a: &HandSelection, b: &HandSelection) -> MatchState {
    let s = setup(engine, seed, a, b);
    illustrate(engine, &s, 1)
}

pub fn set_hp(s: &mut MatchState, player: Player, hp: [u32; 3]) {
    for (card, hp) in s.side_mut(player).hand.iter_mut().zip(hp) {
        card.hp = hp;
    }
}

pub fn submit_both(engine: &Engine, s: &MatchState, a: &TurnPlan, b: &TurnPlan) -> MatchState {
    let s = engine.submit_plan(s, Player::A, a).unwrap();
    engine.submit_plan(&s, Player::B, b).unwrap()
}

/// Small deterministic generator for test drivers.
#[derive(Clone)]
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

pub fn random_plan(engine: &Engine, s: &MatchState, p: Player, rng: &mut Lcg) -> TurnPlan {
    let legal = engine.legal_plans(s, p);
    let mut plan = TurnPlan::pass();
    for card in &legal.cards {
        let n = card.options.len();
        let pick = rng.below(n + 1);
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

/// One legal command for the current phase, picked at random.
pub fn random_legal_command(engine: &Engine, s: &MatchState, rng: &mut Lcg) -> Option<Command> {
    let cat = engine.catalog();
    Some(match s.phase {
        Phase::Setup => {
            let player = if s.side(Player::A).has_selected() { Player::B } else { Player::A };
            let arch = &cat.archetypes[rng.below(cat.archetypes.len())];
            let i = rng.below(cat.premade_cards.len());
            let j = (i + 1 + rng.below(cat.premade_cards.len() - 1)) % cat.premade_cards.len();
            Command::SelectHand {
                player,
                selection: HandSelection {
                    prompt_id: cat.prompts[rng.below(cat.prompts.len())].id.clone(),
                    archetype_id: arch.id.clone(),
                    first_move_id: arch.move_pool[rng.below(arch.move_pool.len())].clone(),
                    premade_ids: [cat.premade_cards[i].id.clone(), cat.premade_cards[j].id.clone()],
                },
            }
        }
        Phase::Customize { round } => {
            let player = Player::BOTH
                .into_iter()
                .find(|&p| s.side(p).custom_card().unwrap().moves.len() < round as usize)?;
            let side = s.side(player);
            let custom = side.custom_card().unwrap();
            let arch = cat.archetype(side.archetype_id().unwrap()).unwrap();
            let fresh: Vec<_> = arch
                .move_pool
                .iter()
                .filter(|m| !custom.moves.iter().any(|c| &c.move_id == *m))
                .collect();
            Command::SelectRoundMove {
                player,
                move_id: fresh[rng.below(fresh.len())].clone(),
            }
        }
        Phase::Illustrate { round } => {
            if rng.below(4) == 0 {
                Command::ExpireIllustration { round }
            } else {
                let player = Player::BOTH.into_iter().find(|&p| {
                    s.side(p).custom_card().unwrap().moves[round as usize - 1]
                        .cover_art
                        .is_none()
                })?;
                Command::AttachIllustration {
                    player,
                    round,
                    asset: art(&format!("{player}{round}-{}", rng.next())),
                }
            }
        }
        Phase::AwaitPlans { .. } => {
            if s.both_plans_in() {
                Command::ResolveTurn
            } else {
                let player = Player::BOTH.into_iter().find(|&p| s.side(p).plan.is_none())?;
                match rng.below(60) {
                    0 => Command::Forfeit { player },
                    1 | 2 => Command::DeclareTie { player },
                    _ => Command::SubmitPlan {
                        player,
                        plan: random_plan(engine, s, player, rng),
                    },
                }
            }
        }
        Phase::RoundOver { .. } => Command::ConcludeRound,
        Phase::MatchOver => return None,
    })
}

pub fn kind_of(engine: &Engine, move_id: &str) -> MoveKind {
    engine.move_spec(move_id).unwrap().kind
}
