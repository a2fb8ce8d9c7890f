//! Per-player projections of match state.
//!
//! The opponent's plan never appears in a projection, only whether one was
//! submitted. Choices that are made simultaneously (setup hands, the round's
//! new move, the round's illustration) stay hidden until both sides are done.

use serde::{Deserialize, Serialize};

use crate::asset::AssetRef;
use crate::catalog::MoveKind;
use crate::engine::Engine;
use crate::plan::{LegalPlans, TurnPlan};
use crate::state::{CardInstance, MatchResult, MatchState, Phase, Player, RoundOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibleMove {
    pub move_id: String,
    pub display_name: String,
    pub kind: MoveKind,
    pub magnitude: u32,
    pub dice_window: u8,
    pub activation_round: u8,
    pub effect_text: String,
    pub cover_art: Option<AssetRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibleCard {
    pub slot: u8,
    pub name: String,
    pub custom: bool,
    pub max_hp: u32,
    pub hp: u32,
    pub cover: Option<String>,
    pub moves: Vec<VisibleMove>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpponentView {
    pub hand_selected: bool,
    pub hand: Vec<VisibleCard>,
    pub round_wins: u8,
    pub move_selected: bool,
    pub illustrated: bool,
    pub plan_submitted: bool,
    pub tie_offered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerView {
    pub match_id: String,
    pub you: Player,
    pub phase: Phase,
    pub round: u8,
    pub initiative: Player,
    pub hand: Vec<VisibleCard>,
    pub round_wins: u8,
    pub plan: Option<TurnPlan>,
    pub tie_offered: bool,
    pub opponent: OpponentView,
    pub rounds: Vec<RoundOutcome>,
    pub pending_outcome: Option<RoundOutcome>,
    pub result: Option<MatchResult>,
    /// Present during `AwaitPlans` until this player submits.
    pub legal: Option<LegalPlans>,
}

fn visible(engine: &Engine, card: &CardInstance, move_limit: usize, hide_art_of: Option<usize>) -> VisibleCard {
    let moves = card
        .moves
        .iter()
        .take(move_limit)
        .enumerate()
        .map(|(i, m)| {
            let spec = engine.move_spec(&m.move_id);
            VisibleMove {
                move_id: m.move_id.clone(),
                display_name: spec.map(|s| s.display_name.clone()).unwrap_or_default(),
                kind: spec.map_or(MoveKind::Attack, |s| s.kind),
                magnitude: spec.map_or(0, |s| s.magnitude),
                dice_window: spec.map_or(0, |s| s.dice_window),
                activation_round: m.activation_round,
                effect_text: spec.map(|s| s.effect_text.clone()).unwrap_or_default(),
                cover_art: if hide_art_of == Some(i) {
                    None
                } else {
                    m.cover_art.clone()
                },
            }
        })
        .collect();
    VisibleCard {
        slot: card.slot,
        name: card.name.clone(),
        custom: card.is_custom(),
        max_hp: card.max_hp,
        hp: card.hp,
        cover: card.cover.clone(),
        moves,
    }
}

pub(crate) fn project(engine: &Engine, state: &MatchState, me: Player) -> PlayerView {
    let mine = state.side(me);
    let theirs = state.side(me.other());
    let round = state.round();

    let (move_selected, illustrated) = match state.phase {
        Phase::Customize { round } => (
            theirs.custom_card().is_some_and(|c| c.moves.len() >= round as usize),
            false,
        ),
        Phase::Illustrate { round } => (
            true,
            theirs
                .custom_card()
                .and_then(|c| c.moves.get(round as usize - 1))
                .is_some_and(|m| m.cover_art.is_some()),
        ),
        _ => (theirs.has_selected(), theirs.has_selected()),
    };

    let opponent_hand = if state.phase == Phase::Setup {
        Vec::new()
    } else {
        theirs
            .hand
            .iter()
            .map(|c| {
                if !c.is_custom() {
                    return visible(engine, c, usize::MAX, None);
                }
                match state.phase {
                    // The pick for this round stays hidden until both have picked.
                    Phase::Customize { round } => visible(engine, c, round as usize - 1, None),
                    Phase::Illustrate { round } => visible(engine, c, usize::MAX, Some(round as usize - 1)),
                    _ => visible(engine, c, usize::MAX, None),
                }
            })
            .collect()
    };

    let legal = match state.phase {
        Phase::AwaitPlans { .. } if mine.plan.is_none() => Some(engine.legal_plans(state, me)),
        _ => None,
    };

    PlayerView {
        match_id: state.match_id.clone(),
        you: me,
        phase: state.phase,
        round,
        initiative: state.initiative,
        hand: mine
            .hand
            .iter()
            .map(|c| visible(engine, c, usize::MAX, None))
            .collect(),
        round_wins: mine.round_wins,
        plan: mine.plan.clone(),
        tie_offered: mine.tie_consent,
        opponent: OpponentView {
            hand_selected: theirs.has_selected(),
            hand: opponent_hand,
            round_wins: theirs.round_wins,
            move_selected,
            illustrated,
            plan_submitted: theirs.plan.is_some(),
            tie_offered: theirs.tie_consent,
        },
        rounds: state.rounds.clone(),
        pending_outcome: state.pending_outcome,
        result: state.result,
        legal,
    }
}
