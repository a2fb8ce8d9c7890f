//! Per-step invariant checks applied to every accepted command.

use acg_core::resolve::apply_log;
use acg_core::{MatchState, Phase, ResolutionLog, Step};

fn battle_round(phase: Phase) -> Option<u8> {
    match phase {
        Phase::AwaitPlans { round, .. } | Phase::RoundOver { round } => Some(round),
        _ => None,
    }
}

/// Describes every invariant broken by the transition `prev -> next`.
pub fn step_violations(prev: &MatchState, next: &MatchState, log: Option<&ResolutionLog>) -> Vec<String> {
    let mut out = Vec::new();
    let same_battle = battle_round(prev.phase).is_some() && battle_round(prev.phase) == battle_round(next.phase);

    for (p, (side, before)) in next.players.iter().zip(&prev.players).enumerate() {
        if next.phase != Phase::Setup && side.hand.len() != acg_core::HAND_SIZE {
            out.push(format!("player {p} holds {} cards in {}", side.hand.len(), next.phase));
        }
        for (card, old) in side.hand.iter().zip(&before.hand) {
            if card.hp > card.max_hp {
                out.push(format!("player {p} slot {} hp {} > max {}", card.slot, card.hp, card.max_hp));
            }
            if same_battle && card.hp > old.hp {
                out.push(format!("player {p} slot {} healed mid-round", card.slot));
            }
        }
        if let Some(custom) = side.custom_card() {
            let n = custom.moves.len();
            let ok = match next.phase {
                Phase::Setup => n == 1,
                Phase::Customize { round } => n == round as usize - 1 || n == round as usize,
                _ => n == next.round() as usize,
            };
            if !ok {
                out.push(format!("player {p} custom card has {n} moves in {}", next.phase));
            }
            if matches!(next.phase, Phase::AwaitPlans { .. } | Phase::RoundOver { .. })
                && custom.moves.iter().any(|m| m.cover_art.is_none())
            {
                out.push(format!("player {p} battles with a move lacking cover art"));
            }
        }
    }

    let wins: usize = next.players.iter().map(|s| s.round_wins as usize).sum();
    if wins + next.drawn_rounds() > acg_core::ROUNDS as usize {
        out.push("more than three rounds concluded".into());
    }
    if (next.phase == Phase::MatchOver) != next.result.is_some() {
        out.push("match result out of sync with phase".into());
    }

    if let Some(log) = log {
        for step in &log.steps {
            let (card, move_id) = match step {
                Step::DiceRolled { card, move_id, .. } => (*card, move_id),
                Step::DamageDealt { from, to, move_id, reflected, .. } => (if *reflected { *to } else { *from }, move_id),
                Step::AttackFizzled { attacker, move_id, .. } => (*attacker, move_id),
                _ => continue,
            };
            let gated = prev
                .card(card)
                .and_then(|c| c.moves.iter().find(|m| &m.move_id == move_id))
                .map_or(true, |m| m.activation_round > log.round);
            if gated {
                out.push(format!("{card} used `{move_id}` before it unlocked"));
            }
        }
        if &apply_log(prev, log) != next {
            out.push(format!("resolution log for turn {} does not rebuild the state", log.turn));
        }
    }
    out
}
