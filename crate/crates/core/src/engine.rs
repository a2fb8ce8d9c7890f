//! Match operations. Every operation takes a state by reference and returns a
//! new state or a typed error; the input is never modified.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::asset::{self, AssetRef};
use crate::catalog::{self, Catalog, MoveSpec};
use crate::error::{CatalogError, GameError};
use crate::plan::{self, LegalPlans, TurnPlan};
use crate::resolve::{self, ResolutionLog};
use crate::rng::DiceStream;
use crate::state::{
    CardInstance, CardMove, CardOrigin, DrawReason, MatchResult, MatchState, Phase, Player,
    PlayerSide, RoundOutcome,
};
use crate::view::{self, PlayerView};
use crate::ROUNDS;

/// Setup choices: the custom card's prompt, archetype and first move, plus
/// two distinct premade cards.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HandSelection {
    pub prompt_id: String,
    pub archetype_id: String,
    pub first_move_id: String,
    pub premade_ids: [String; 2],
}

/// Input to one engine operation. A match is fully determined by its catalog,
/// seed and the sequence of accepted commands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Command {
    SelectHand {
        player: Player,
        #[serde(flatten)]
        selection: HandSelection,
    },
    SelectRoundMove {
        player: Player,
        move_id: String,
    },
    AttachIllustration {
        player: Player,
        round: u8,
        asset: AssetRef,
    },
    ExpireIllustration {
        round: u8,
    },
    SubmitPlan {
        player: Player,
        plan: TurnPlan,
    },
    ResolveTurn,
    ConcludeRound,
    DeclareTie {
        player: Player,
    },
    Forfeit {
        player: Player,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SelectHand { .. } => "select_hand",
            Command::SelectRoundMove { .. } => "select_round_move",
            Command::AttachIllustration { .. } => "attach_illustration",
            Command::ExpireIllustration { .. } => "expire_illustration",
            Command::SubmitPlan { .. } => "submit_plan",
            Command::ResolveTurn => "resolve_turn",
            Command::ConcludeRound => "conclude_round",
            Command::DeclareTie { .. } => "declare_tie",
            Command::Forfeit { .. } => "forfeit",
        }
    }
}

/// Result of [`Engine::apply`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub state: MatchState,
    /// Present only for `ResolveTurn`.
    pub log: Option<ResolutionLog>,
}

/// A validated catalog plus lookup tables. Cheap to clone and share.
#[derive(Debug, Clone)]
pub struct Engine {
    catalog: Arc<Catalog>,
    digest: String,
    moves: Arc<HashMap<String, usize>>,
}

fn phase_error(op: &'static str, state: &MatchState) -> GameError {
    GameError::PhaseViolation {
        op,
        phase: state.phase.to_string(),
    }
}

impl Engine {
    pub fn new(catalog: Catalog) -> Result<Self, CatalogError> {
        Self::from_shared(Arc::new(catalog))
    }

    pub fn from_shared(catalog: Arc<Catalog>) -> Result<Self, CatalogError> {
        let violations = catalog::validate_catalog(&catalog);
        if !violations.is_empty() {
            return Err(CatalogError::Validation(violations));
        }
        let moves = catalog
            .moves
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        Ok(Self {
            digest: catalog.digest(),
            catalog,
            moves: Arc::new(moves),
        })
    }

    pub fn builtin() -> Self {
        Self::new(catalog::builtin_catalog()).expect("built-in catalog is valid")
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn shared_catalog(&self) -> Arc<Catalog> {
        Arc::clone(&self.catalog)
    }

    pub fn catalog_digest(&self) -> &str {
        &self.digest
    }

    pub fn move_spec(&self, id: &str) -> Option<&MoveSpec> {
        self.moves.get(id).map(|&i| &self.catalog.moves[i])
    }

    /// Fresh match in `Setup`. The first draw of the seeded stream decides
    /// initial initiative by parity.
    pub fn new_match(&self, seed: u64) -> MatchState {
        let mut dice = DiceStream::new(seed, 0);
        let initiative = if dice.next_u64() & 1 == 0 {
            Player::A
        } else {
            Player::B
        };
        let match_id = asset::sha256_hex(format!("{}:{seed}", self.digest).as_bytes())[..16].to_string();
        MatchState {
            match_id,
            seed,
            catalog_digest: self.digest.clone(),
            timer_schedule: self.catalog.timer_schedule,
            max_turns: self.catalog.max_turns_per_round,
            phase: Phase::Setup,
            players: Default::default(),
            initiative,
            rng_cursor: dice.cursor(),
            rounds: Vec::new(),
            pending_outcome: None,
            result: None,
        }
    }

    pub fn select_hand(
        &self,
        state: &MatchState,
        player: Player,
        selection: &HandSelection,
    ) -> Result<MatchState, GameError> {
        if state.phase != Phase::Setup {
            return Err(phase_error("select_hand", state));
        }
        if state.side(player).has_selected() {
            return Err(GameError::InvalidSelection(format!(
                "player {player} already selected a hand"
            )));
        }
        let [p0, p1] = &selection.premade_ids;
        if p0 == p1 {
            return Err(GameError::InvalidSelection(format!(
                "premade card `{p0}` picked twice"
            )));
        }
        let unknown = |id: &str| GameError::UnknownContent(id.to_string());
        let prompt = self
            .catalog
            .prompt(&selection.prompt_id)
            .ok_or_else(|| unknown(&selection.prompt_id))?;
        let archetype = self
            .catalog
            .archetype(&selection.archetype_id)
            .ok_or_else(|| unknown(&selection.archetype_id))?;
        if !archetype.move_pool.contains(&selection.first_move_id) {
            return Err(unknown(&selection.first_move_id));
        }
        let premades = [
            self.catalog.premade(p0).ok_or_else(|| unknown(p0))?,
            self.catalog.premade(p1).ok_or_else(|| unknown(p1))?,
        ];

        let mut hand = vec![CardInstance {
            slot: 0,
            origin: CardOrigin::Custom {
                prompt_id: prompt.id.clone(),
                archetype_id: archetype.id.clone(),
            },
            name: prompt.name.clone(),
            max_hp: archetype.base_hp,
            hp: archetype.base_hp,
            cover: None,
            moves: vec![CardMove {
                move_id: selection.first_move_id.clone(),
                activation_round: 1,
                cover_art: None,
            }],
        }];
        for (i, card) in premades.into_iter().enumerate() {
            let mut moves: Vec<CardMove> = card
                .moves
                .iter()
                .map(|m| CardMove {
                    move_id: m.move_id.clone(),
                    activation_round: m.activation_round,
                    cover_art: None,
                })
                .collect();
            moves.sort_by_key(|m| m.activation_round);
            hand.push(CardInstance {
                slot: i as u8 + 1,
                origin: CardOrigin::Premade {
                    card_id: card.id.clone(),
                },
                name: card.name.clone(),
                max_hp: card.max_hp,
                hp: card.max_hp,
                cover: Some(card.cover.clone()),
                moves,
            });
        }

        let mut next = state.clone();
        next.side_mut(player).hand = hand;
        if next.players.iter().all(PlayerSide::has_selected) {
            next.phase = Phase::Illustrate { round: 1 };
        }
        Ok(next)
    }

    /// Adds the round's new move to the player's custom card. The move
    /// becomes usable from this round regardless of its catalog
    /// `activation_round`.
    pub fn select_round_move(
        &self,
        state: &MatchState,
        player: Player,
        move_id: &str,
    ) -> Result<MatchState, GameError> {
        let Phase::Customize { round } = state.phase else {
            return Err(phase_error("select_round_move", state));
        };
        let custom = state
            .side(player)
            .custom_card()
            .expect("hands exist after setup");
        if custom.moves.len() >= round as usize {
            return Err(GameError::InvalidSelection(format!(
                "player {player} already picked a move for round {round}"
            )));
        }
        let archetype_id = state.side(player).archetype_id().expect("custom card");
        let archetype = self.catalog.archetype(archetype_id).expect("validated hand");
        if !archetype.move_pool.iter().any(|m| m == move_id) {
            return Err(GameError::UnknownContent(move_id.to_string()));
        }
        if custom.moves.iter().any(|m| m.move_id == move_id) {
            return Err(GameError::InvalidSelection(format!(
                "move `{move_id}` is already on the custom card"
            )));
        }

        let mut next = state.clone();
        next.side_mut(player)
            .custom_card_mut()
            .expect("custom card")
            .moves
            .push(CardMove {
                move_id: move_id.to_string(),
                activation_round: round,
                cover_art: None,
            });
        let done = next.players.iter().all(|s| {
            s.custom_card()
                .is_some_and(|c| c.moves.len() == round as usize)
        });
        if done {
            next.phase = Phase::Illustrate { round };
        }
        Ok(next)
    }

    pub fn attach_illustration(
        &self,
        state: &MatchState,
        player: Player,
        round: u8,
        asset: &AssetRef,
    ) -> Result<MatchState, GameError> {
        if state.phase != (Phase::Illustrate { round }) {
            return Err(phase_error("attach_illustration", state));
        }
        if round_move(state.side(player), round).cover_art.is_some() {
            return Err(GameError::AlreadyAttached);
        }
        let mut next = state.clone();
        round_move_mut(next.side_mut(player), round).cover_art = Some(asset.clone());
        if Player::BOTH
            .iter()
            .all(|&p| round_move(next.side(p), round).cover_art.is_some())
        {
            begin_battle(&mut next, round);
        }
        Ok(next)
    }

    /// Deadline hit: every missing illustration gets the catalog placeholder
    /// and the battle starts.
    pub fn expire_illustration(&self, state: &MatchState, round: u8) -> Result<MatchState, GameError> {
        if state.phase != (Phase::Illustrate { round }) {
            return Err(phase_error("expire_illustration", state));
        }
        let mut next = state.clone();
        for p in Player::BOTH {
            let m = round_move_mut(next.side_mut(p), round);
            if m.cover_art.is_none() {
                m.cover_art = Some(self.catalog.placeholder_asset.clone());
            }
        }
        begin_battle(&mut next, round);
        Ok(next)
    }

    /// Legal options per card. Empty outside `AwaitPlans`.
    pub fn legal_plans(&self, state: &MatchState, player: Player) -> LegalPlans {
        plan::legal_plans(self, state, player)
    }

    pub fn submit_plan(
        &self,
        state: &MatchState,
        player: Player,
        plan: &TurnPlan,
    ) -> Result<MatchState, GameError> {
        if !matches!(state.phase, Phase::AwaitPlans { .. }) {
            return Err(phase_error("submit_plan", state));
        }
        if state.side(player).plan.is_some() {
            return Err(GameError::AlreadySubmitted);
        }
        plan::check_plan(self, state, player, plan).map_err(GameError::InvalidPlan)?;
        let mut next = state.clone();
        next.side_mut(player).plan = Some(plan.canonical());
        Ok(next)
    }

    pub fn resolve_turn(&self, state: &MatchState) -> Result<(MatchState, ResolutionLog), GameError> {
        if !matches!(state.phase, Phase::AwaitPlans { .. }) {
            return Err(phase_error("resolve_turn", state));
        }
        if !state.both_plans_in() {
            return Err(GameError::NotReady);
        }
        let mut next = state.clone();
        let log = resolve::resolve_in_place(self, &mut next);
        Ok((next, log))
    }

    pub fn conclude_round(&self, state: &MatchState) -> Result<MatchState, GameError> {
        let Phase::RoundOver { round } = state.phase else {
            return Err(phase_error("conclude_round", state));
        };
        let outcome = state.pending_outcome.expect("RoundOver carries an outcome");
        let mut next = state.clone();
        conclude(&mut next, round, outcome);
        Ok(next)
    }

    /// Records the caller's consent; the round is drawn once both consent.
    pub fn declare_tie(&self, state: &MatchState, player: Player) -> Result<MatchState, GameError> {
        let Phase::AwaitPlans { round, .. } = state.phase else {
            return Err(phase_error("declare_tie", state));
        };
        let mut next = state.clone();
        next.side_mut(player).tie_consent = true;
        if next.players.iter().all(|s| s.tie_consent) {
            for side in &mut next.players {
                side.plan = None;
            }
            next.phase = Phase::RoundOver { round };
            next.pending_outcome = Some(RoundOutcome::Drawn {
                reason: DrawReason::Agreed,
            });
        }
        Ok(next)
    }

    /// Concedes the current round; the match moves on immediately.
    pub fn forfeit(&self, state: &MatchState, player: Player) -> Result<MatchState, GameError> {
        let Phase::AwaitPlans { round, .. } = state.phase else {
            return Err(phase_error("forfeit", state));
        };
        let mut next = state.clone();
        conclude(
            &mut next,
            round,
            RoundOutcome::Forfeited {
                winner: player.other(),
            },
        );
        Ok(next)
    }

    pub fn apply(&self, state: &MatchState, command: &Command) -> Result<Applied, GameError> {
        let plain = |state| Applied { state, log: None };
        match command {
            Command::SelectHand { player, selection } => {
                self.select_hand(state, *player, selection).map(plain)
            }
            Command::SelectRoundMove { player, move_id } => {
                self.select_round_move(state, *player, move_id).map(plain)
            }
            Command::AttachIllustration {
                player,
                round,
                asset,
            } => self.attach_illustration(state, *player, *round, asset).map(plain),
            Command::ExpireIllustration { round } => self.expire_illustration(state, *round).map(plain),
            Command::SubmitPlan { player, plan } => self.submit_plan(state, *player, plan).map(plain),
            Command::ResolveTurn => self.resolve_turn(state).map(|(state, log)| Applied {
                state,
                log: Some(log),
            }),
            Command::ConcludeRound => self.conclude_round(state).map(plain),
            Command::DeclareTie { player } => self.declare_tie(state, *player).map(plain),
            Command::Forfeit { player } => self.forfeit(state, *player).map(plain),
        }
    }

    /// What `player` is allowed to see.
    pub fn project(&self, state: &MatchState, player: Player) -> PlayerView {
        view::project(self, state, player)
    }
}

fn round_move(side: &PlayerSide, round: u8) -> &CardMove {
    &side.custom_card().expect("custom card").moves[round as usize - 1]
}

fn round_move_mut(side: &mut PlayerSide, round: u8) -> &mut CardMove {
    &mut side.custom_card_mut().expect("custom card").moves[round as usize - 1]
}

fn begin_battle(state: &mut MatchState, round: u8) {
    for side in &mut state.players {
        side.plan = None;
        side.tie_consent = false;
    }
    state.phase = Phase::AwaitPlans { round, turn: 1 };
}

fn conclude(state: &mut MatchState, round: u8, outcome: RoundOutcome) {
    state.pending_outcome = None;
    state.rounds.push(outcome);
    if let Some(w) = outcome.winner() {
        state.side_mut(w).round_wins += 1;
    }
    for side in &mut state.players {
        side.plan = None;
        side.tie_consent = false;
    }
    if round < ROUNDS {
        for side in &mut state.players {
            for card in &mut side.hand {
                card.hp = card.max_hp;
            }
        }
        state.phase = Phase::Customize { round: round + 1 };
    } else {
        let (a, b) = (state.players[0].round_wins, state.players[1].round_wins);
        state.result = Some(match a.cmp(&b) {
            std::cmp::Ordering::Greater => MatchResult::Winner { player: Player::A },
            std::cmp::Ordering::Less => MatchResult::Winner { player: Player::B },
            std::cmp::Ordering::Equal => MatchResult::Drawn,
        });
        state.phase = Phase::MatchOver;
    }
}
