//! Turn plans and the legal-option space they are checked against.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::catalog::MoveKind;
use crate::engine::Engine;
use crate::state::{MatchState, Phase, Player};

/// One card's action for the turn. Attacks name an opposing slot; defensive
/// moves have no target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanEntry {
    pub slot: u8,
    pub move_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<u8>,
}

/// A player's private assignment for one turn. Cards without an entry pass.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TurnPlan {
    pub entries: Vec<PlanEntry>,
}

impl TurnPlan {
    pub fn pass() -> Self {
        Self::default()
    }

    pub fn with(mut self, slot: u8, move_id: impl Into<String>, target: Option<u8>) -> Self {
        self.entries.push(PlanEntry {
            slot,
            move_id: move_id.into(),
            target,
        });
        self
    }

    pub fn entry(&self, slot: u8) -> Option<&PlanEntry> {
        self.entries.iter().find(|e| e.slot == slot)
    }

    /// Entries sorted by slot, the form stored in match state.
    pub fn canonical(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.sort();
        Self { entries }
    }
}

/// One selectable `(move, target)` pair for a card.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanOption {
    pub move_id: String,
    pub kind: MoveKind,
    pub target: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardOptions {
    pub slot: u8,
    /// Empty for knocked-out cards. Passing is always allowed and not listed.
    pub options: Vec<PlanOption>,
}

/// Every legal choice per card; a legal plan picks at most one option per card.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalPlans {
    pub player: Player,
    pub round: u8,
    pub cards: Vec<CardOptions>,
}

impl LegalPlans {
    pub fn for_slot(&self, slot: u8) -> &[PlanOption] {
        self.cards
            .iter()
            .find(|c| c.slot == slot)
            .map_or(&[], |c| c.options.as_slice())
    }

    pub fn allows(&self, plan: &TurnPlan) -> bool {
        let mut seen = BTreeSet::new();
        plan.entries.iter().all(|e| {
            seen.insert(e.slot)
                && self
                    .for_slot(e.slot)
                    .iter()
                    .any(|o| o.move_id == e.move_id && o.target == e.target)
        })
    }

    /// Number of distinct legal plans (product of `options + 1` per card).
    pub fn count(&self) -> u64 {
        self.cards
            .iter()
            .map(|c| c.options.len() as u64 + 1)
            .product()
    }
}

pub(crate) fn legal_plans(engine: &Engine, state: &MatchState, player: Player) -> LegalPlans {
    let round = state.round();
    let mut cards = Vec::new();
    if !matches!(state.phase, Phase::AwaitPlans { .. }) {
        return LegalPlans {
            player,
            round,
            cards,
        };
    }
    let opponents: Vec<u8> = state
        .side(player.other())
        .hand
        .iter()
        .filter(|c| !c.knocked_out())
        .map(|c| c.slot)
        .collect();
    for card in &state.side(player).hand {
        let mut options = Vec::new();
        if !card.knocked_out() {
            for m in card.moves.iter().filter(|m| m.activation_round <= round) {
                let Some(spec) = engine.move_spec(&m.move_id) else {
                    continue;
                };
                if spec.kind == MoveKind::Attack {
                    options.extend(opponents.iter().map(|&t| PlanOption {
                        move_id: m.move_id.clone(),
                        kind: spec.kind,
                        target: Some(t),
                    }));
                } else {
                    options.push(PlanOption {
                        move_id: m.move_id.clone(),
                        kind: spec.kind,
                        target: None,
                    });
                }
            }
        }
        cards.push(CardOptions {
            slot: card.slot,
            options,
        });
    }
    LegalPlans {
        player,
        round,
        cards,
    }
}

/// Checks `plan` directly against the rules; `Err` carries the reason.
pub(crate) fn check_plan(
    engine: &Engine,
    state: &MatchState,
    player: Player,
    plan: &TurnPlan,
) -> Result<(), String> {
    let round = state.round();
    let mine = &state.side(player).hand;
    let theirs = &state.side(player.other()).hand;
    let mut used = BTreeSet::new();
    for e in &plan.entries {
        if !used.insert(e.slot) {
            return Err(format!("slot {} has more than one move", e.slot));
        }
        let card = mine
            .get(e.slot as usize)
            .ok_or_else(|| format!("no card in slot {}", e.slot))?;
        if card.knocked_out() {
            return Err(format!("card in slot {} is knocked out", e.slot));
        }
        let owned = card
            .moves
            .iter()
            .find(|m| m.move_id == e.move_id)
            .ok_or_else(|| format!("card in slot {} has no move `{}`", e.slot, e.move_id))?;
        if owned.activation_round > round {
            return Err(format!(
                "move `{}` unlocks in round {}, current round is {round}",
                e.move_id, owned.activation_round
            ));
        }
        let spec = engine
            .move_spec(&e.move_id)
            .ok_or_else(|| format!("unknown move `{}`", e.move_id))?;
        match (spec.kind, e.target) {
            (MoveKind::Attack, None) => return Err(format!("attack `{}` needs a target", e.move_id)),
            (MoveKind::Attack, Some(t)) => match theirs.get(t as usize) {
                None => return Err(format!("no opposing card in slot {t}")),
                Some(c) if c.knocked_out() => {
                    return Err(format!("opposing card in slot {t} is knocked out"))
                }
                Some(_) => {}
            },
            (_, Some(_)) => return Err(format!("`{}` takes no target", e.move_id)),
            (_, None) => {}
        }
    }
    Ok(())
}
