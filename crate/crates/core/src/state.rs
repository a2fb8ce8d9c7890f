use std::fmt;

use serde::{Deserialize, Serialize};

use crate::asset::{self, AssetRef};
use crate::plan::TurnPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    A,
    B,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::A, Player::B];

    pub fn index(self) -> usize {
        match self {
            Player::A => 0,
            Player::B => 1,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }

    pub fn from_index(i: usize) -> Player {
        if i == 0 {
            Player::A
        } else {
            Player::B
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum Phase {
    Setup,
    /// Both players pick the custom card's move for rounds 2 and 3.
    Customize { round: u8 },
    Illustrate { round: u8 },
    /// Plans for `turn` are being collected.
    AwaitPlans { round: u8, turn: u32 },
    RoundOver { round: u8 },
    MatchOver,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::Setup => "Setup",
            Phase::Customize { .. } => "Customize",
            Phase::Illustrate { .. } => "Illustrate",
            Phase::AwaitPlans { .. } => "AwaitPlans",
            Phase::RoundOver { .. } => "RoundOver",
            Phase::MatchOver => "MatchOver",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Setup => f.write_str("Setup"),
            Phase::Customize { round } => write!(f, "Customize({round})"),
            Phase::Illustrate { round } => write!(f, "Illustrate({round})"),
            Phase::AwaitPlans { round, turn } => write!(f, "AwaitPlans({round}, {turn})"),
            Phase::RoundOver { round } => write!(f, "RoundOver({round})"),
            Phase::MatchOver => f.write_str("MatchOver"),
        }
    }
}

/// A card position: owner plus slot `0..3` in their hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CardRef {
    pub player: Player,
    pub slot: u8,
}

impl CardRef {
    pub fn new(player: Player, slot: u8) -> Self {
        Self { player, slot }
    }
}

impl fmt::Display for CardRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.player, self.slot)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "origin", rename_all = "snake_case")]
pub enum CardOrigin {
    Custom { prompt_id: String, archetype_id: String },
    Premade { card_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardMove {
    pub move_id: String,
    pub activation_round: u8,
    /// Only custom-card moves carry per-move art.
    pub cover_art: Option<AssetRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardInstance {
    pub slot: u8,
    #[serde(flatten)]
    pub origin: CardOrigin,
    pub name: String,
    pub max_hp: u32,
    pub hp: u32,
    /// Card-level art for premade cards.
    pub cover: Option<String>,
    pub moves: Vec<CardMove>,
}

impl CardInstance {
    pub fn knocked_out(&self) -> bool {
        self.hp == 0
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.origin, CardOrigin::Custom { .. })
    }

    /// The move, if this card has it unlocked by `round`.
    pub fn usable_move(&self, move_id: &str, round: u8) -> Option<&CardMove> {
        self.moves
            .iter()
            .find(|m| m.move_id == move_id && m.activation_round <= round)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerSide {
    pub hand: Vec<CardInstance>,
    pub round_wins: u8,
    /// This turn's committed plan. Never exposed to the opponent.
    pub plan: Option<TurnPlan>,
    pub tie_consent: bool,
}

impl PlayerSide {
    pub fn has_selected(&self) -> bool {
        !self.hand.is_empty()
    }

    pub fn custom_card(&self) -> Option<&CardInstance> {
        self.hand.iter().find(|c| c.is_custom())
    }

    pub fn custom_card_mut(&mut self) -> Option<&mut CardInstance> {
        self.hand.iter_mut().find(|c| c.is_custom())
    }

    pub fn wiped(&self) -> bool {
        self.hand.iter().all(CardInstance::knocked_out)
    }

    pub fn archetype_id(&self) -> Option<&str> {
        match &self.custom_card()?.origin {
            CardOrigin::Custom { archetype_id, .. } => Some(archetype_id),
            CardOrigin::Premade { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrawReason {
    /// Both sides lost their last card in the same resolution.
    MutualWipe,
    /// Both players declared a tie.
    Agreed,
    /// The round hit the turn cap.
    TurnCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RoundOutcome {
    Won { winner: Player },
    Forfeited { winner: Player },
    Drawn { reason: DrawReason },
}

impl RoundOutcome {
    pub fn winner(&self) -> Option<Player> {
        match *self {
            RoundOutcome::Won { winner } | RoundOutcome::Forfeited { winner } => Some(winner),
            RoundOutcome::Drawn { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum MatchResult {
    Winner { player: Player },
    Drawn,
}

/// Full authoritative state of one match. Cloneable snapshot; engine
/// operations never mutate their input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchState {
    pub match_id: String,
    pub seed: u64,
    pub catalog_digest: String,
    pub timer_schedule: [u32; 3],
    pub max_turns: u32,
    pub phase: Phase,
    pub players: [PlayerSide; 2],
    /// Whose attacks land first this turn.
    pub initiative: Player,
    pub rng_cursor: u64,
    /// Outcomes of concluded rounds, in order.
    pub rounds: Vec<RoundOutcome>,
    /// Outcome of the round awaiting conclusion (set in `RoundOver`).
    pub pending_outcome: Option<RoundOutcome>,
    pub result: Option<MatchResult>,
}

impl MatchState {
    pub fn side(&self, p: Player) -> &PlayerSide {
        &self.players[p.index()]
    }

    pub fn side_mut(&mut self, p: Player) -> &mut PlayerSide {
        &mut self.players[p.index()]
    }

    pub fn card(&self, r: CardRef) -> Option<&CardInstance> {
        self.side(r.player).hand.get(r.slot as usize)
    }

    pub fn card_mut(&mut self, r: CardRef) -> Option<&mut CardInstance> {
        self.side_mut(r.player).hand.get_mut(r.slot as usize)
    }

    /// Current round, `1..=3`.
    pub fn round(&self) -> u8 {
        match self.phase {
            Phase::Setup => 1,
            Phase::Customize { round }
            | Phase::Illustrate { round }
            | Phase::AwaitPlans { round, .. }
            | Phase::RoundOver { round } => round,
            Phase::MatchOver => crate::ROUNDS,
        }
    }

    pub fn turn(&self) -> Option<u32> {
        match self.phase {
            Phase::AwaitPlans { turn, .. } => Some(turn),
            _ => None,
        }
    }

    /// Rounds that ended drawn.
    pub fn drawn_rounds(&self) -> usize {
        self.rounds.iter().filter(|o| o.winner().is_none()).count()
    }

    pub fn both_plans_in(&self) -> bool {
        self.players.iter().all(|s| s.plan.is_some())
    }

    /// Deterministic field-ordered encoding.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("match state serializes")
    }

    /// 256-bit digest of [`canonical_bytes`](Self::canonical_bytes), hex.
    pub fn state_hash(&self) -> String {
        asset::sha256_hex(&self.canonical_bytes())
    }
}
