//! Reveal and resolution of one battle turn.
//!
//! Fixed order: every Dodge roll, then every Reflect roll, then attacks. Within
//! each step the initiative player's cards go first, slot 0 to 2. A card
//! knocked out during the attack step loses its own pending attack, and
//! attacks on a card already at 0 HP fizzle without retargeting. A successful
//! Dodge or Reflect covers the card against every attack that turn.

use serde::{Deserialize, Serialize};

use crate::catalog::MoveKind;
use crate::engine::Engine;
use crate::plan::TurnPlan;
use crate::rng::{window_succeeds, DiceStream};
use crate::state::{CardRef, DrawReason, MatchState, Phase, Player, RoundOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FizzleReason {
    AttackerKnockedOut,
    TargetKnockedOut,
    Dodged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    DiceRolled {
        card: CardRef,
        move_id: String,
        kind: MoveKind,
        face: u8,
        window: u8,
        success: bool,
    },
    /// `to` lost `amount` HP. When `reflected`, `from` is the reflecting card
    /// and `to` is the original attacker.
    DamageDealt {
        from: CardRef,
        to: CardRef,
        move_id: String,
        amount: u32,
        reflected: bool,
    },
    AttackFizzled {
        attacker: CardRef,
        target: CardRef,
        move_id: String,
        reason: FizzleReason,
    },
    Knockout {
        card: CardRef,
    },
    RoundEnd {
        outcome: RoundOutcome,
    },
}

/// Ordered record of one turn's reveal. Applying it to the pre-turn state
/// with [`apply_log`] reproduces the post-turn state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionLog {
    pub round: u8,
    pub turn: u32,
    pub initiative: Player,
    /// Revealed plans, indexed by player.
    pub plans: [TurnPlan; 2],
    pub steps: Vec<Step>,
    pub rng_cursor_after: u64,
}

impl ResolutionLog {
    pub fn round_end(&self) -> Option<RoundOutcome> {
        self.steps.iter().find_map(|s| match s {
            Step::RoundEnd { outcome } => Some(*outcome),
            _ => None,
        })
    }
}

/// Outcome implied by the current HP: a side with every card at 0 loses;
/// both sides at 0 is a drawn round.
pub fn check_round_end(state: &MatchState) -> Option<RoundOutcome> {
    let wiped_a = state.side(Player::A).wiped();
    let wiped_b = state.side(Player::B).wiped();
    match (wiped_a, wiped_b) {
        (true, true) => Some(RoundOutcome::Drawn {
            reason: DrawReason::MutualWipe,
        }),
        (true, false) => Some(RoundOutcome::Won { winner: Player::B }),
        (false, true) => Some(RoundOutcome::Won { winner: Player::A }),
        (false, false) => None,
    }
}

/// Resolves the turn in place. Caller guarantees phase `AwaitPlans` and both
/// plans present and legal.
pub(crate) fn resolve_in_place(engine: &Engine, state: &mut MatchState) -> ResolutionLog {
    let Phase::AwaitPlans { round, turn } = state.phase else {
        unreachable!("resolve_in_place outside AwaitPlans");
    };
    let plans = [
        state.players[0].plan.take().unwrap_or_default(),
        state.players[1].plan.take().unwrap_or_default(),
    ];
    let order = [state.initiative, state.initiative.other()];
    let mut dice = DiceStream::new(state.seed, state.rng_cursor);
    let mut guard: [[Option<MoveKind>; crate::HAND_SIZE]; 2] = Default::default();
    let mut steps = Vec::new();

    for kind in [MoveKind::Dodge, MoveKind::Reflect] {
        for &p in &order {
            for e in &plans[p.index()].entries {
                let spec = engine.move_spec(&e.move_id).expect("validated move");
                if spec.kind != kind {
                    continue;
                }
                let face = dice.d10();
                let success = window_succeeds(face, spec.dice_window);
                if success {
                    guard[p.index()][e.slot as usize] = Some(kind);
                }
                steps.push(Step::DiceRolled {
                    card: CardRef::new(p, e.slot),
                    move_id: e.move_id.clone(),
                    kind,
                    face,
                    window: spec.dice_window,
                    success,
                });
            }
        }
    }

    for &p in &order {
        for e in &plans[p.index()].entries {
            let spec = engine.move_spec(&e.move_id).expect("validated move");
            if spec.kind != MoveKind::Attack {
                continue;
            }
            let attacker = CardRef::new(p, e.slot);
            let target = CardRef::new(p.other(), e.target.expect("validated target"));
            let fizzle = |reason| Step::AttackFizzled {
                attacker,
                target,
                move_id: e.move_id.clone(),
                reason,
            };
            if state.card(attacker).map_or(true, |c| c.knocked_out()) {
                steps.push(fizzle(FizzleReason::AttackerKnockedOut));
                continue;
            }
            if state.card(target).map_or(true, |c| c.knocked_out()) {
                steps.push(fizzle(FizzleReason::TargetKnockedOut));
                continue;
            }
            let (from, to, reflected) = match guard[target.player.index()][target.slot as usize] {
                Some(MoveKind::Dodge) => {
                    steps.push(fizzle(FizzleReason::Dodged));
                    continue;
                }
                Some(MoveKind::Reflect) => (target, attacker, true),
                _ => (attacker, target, false),
            };
            let card = state.card_mut(to).expect("card exists");
            let amount = spec.magnitude.min(card.hp);
            card.hp -= amount;
            let knocked = card.hp == 0;
            steps.push(Step::DamageDealt {
                from,
                to,
                move_id: e.move_id.clone(),
                amount,
                reflected,
            });
            if knocked {
                steps.push(Step::Knockout { card: to });
            }
        }
    }

    let outcome = check_round_end(state).or_else(|| {
        (turn >= state.max_turns).then_some(RoundOutcome::Drawn {
            reason: DrawReason::TurnCap,
        })
    });
    match outcome {
        Some(outcome) => {
            steps.push(Step::RoundEnd { outcome });
            state.phase = Phase::RoundOver { round };
            state.pending_outcome = Some(outcome);
        }
        None => state.phase = Phase::AwaitPlans { round, turn: turn + 1 },
    }
    let log = ResolutionLog {
        round,
        turn,
        initiative: state.initiative,
        plans,
        steps,
        rng_cursor_after: dice.cursor(),
    };
    state.initiative = state.initiative.other();
    state.rng_cursor = dice.cursor();
    log
}

/// Rebuilds the post-turn state from the pre-turn state and its log alone.
pub fn apply_log(pre: &MatchState, log: &ResolutionLog) -> MatchState {
    let mut s = pre.clone();
    for step in &log.steps {
        if let Step::DamageDealt { to, amount, .. } = step {
            if let Some(card) = s.card_mut(*to) {
                card.hp = card.hp.saturating_sub(*amount);
            }
        }
    }
    for side in &mut s.players {
        side.plan = None;
    }
    match log.round_end() {
        Some(outcome) => {
            s.phase = Phase::RoundOver { round: log.round };
            s.pending_outcome = Some(outcome);
        }
        None => {
            s.phase = Phase::AwaitPlans {
                round: log.round,
                turn: log.turn + 1,
            }
        }
    }
    s.initiative = log.initiative.other();
    s.rng_cursor = log.rng_cursor_after;
    s
}
