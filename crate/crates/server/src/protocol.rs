//! JSON envelopes exchanged over the match stream.
//!
//! Every frame is one object:
//!
//! ```json
//! {"protocol_version":1,"seq":4,"kind":"submit_plan","match_id":"…","payload":{"plan":{"entries":[]}}}
//! ```
//!
//! `seq` increases strictly per sender. Server frames answering a client
//! frame carry its `seq` in `reply_to`.

use acg_core::{HandSelection, MatchResult, Player, PlayerView, ResolutionLog, RoundOutcome, TurnPlan};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub protocol_version: u32,
    pub seq: u64,
    #[serde(flatten)]
    pub body: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reply_to: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum ClientMsg {
    Hello,
    JoinLobby { name: String },
    CreateRoom { name: String },
    JoinRoom { name: String, code: String },
    Resume { token: String },
    SelectHand(HandSelection),
    SelectRoundMove { move_id: String },
    SubmitPlan { plan: TurnPlan },
    DeclareTie,
    Forfeit,
}

impl ClientMsg {
    pub fn kind(&self) -> &'static str {
        match self {
            ClientMsg::Hello => "hello",
            ClientMsg::JoinLobby { .. } => "join_lobby",
            ClientMsg::CreateRoom { .. } => "create_room",
            ClientMsg::JoinRoom { .. } => "join_room",
            ClientMsg::Resume { .. } => "resume",
            ClientMsg::SelectHand(_) => "select_hand",
            ClientMsg::SelectRoundMove { .. } => "select_round_move",
            ClientMsg::SubmitPlan { .. } => "submit_plan",
            ClientMsg::DeclareTie => "declare_tie",
            ClientMsg::Forfeit => "forfeit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum ServerMsg {
    Welcome {
        protocol_version: u32,
        catalog_digest: String,
    },
    Queued {
        position: usize,
    },
    RoomCreated {
        code: String,
    },
    MatchFound {
        match_id: String,
        token: String,
        you: Player,
        view: Box<PlayerView>,
    },
    PhaseChange {
        view: Box<PlayerView>,
        /// Time left in the current Illustrate phase.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        remaining_ms: Option<u64>,
    },
    /// The current projection, sent on resume and when it changes within a phase.
    Snapshot {
        view: Box<PlayerView>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        remaining_ms: Option<u64>,
    },
    TimerSync {
        round: u8,
        remaining_ms: u64,
    },
    PlanAck {
        round: u8,
        turn: u32,
    },
    Resolved {
        log: Box<ResolutionLog>,
        view: Box<PlayerView>,
    },
    RoundEnd {
        round: u8,
        outcome: RoundOutcome,
        round_wins: [u8; 2],
    },
    MatchEnd {
        result: MatchResult,
        view: Box<PlayerView>,
    },
    Error {
        code: ErrorCode,
        message: String,
    },
}

impl ServerMsg {
    pub fn kind(&self) -> &'static str {
        match self {
            ServerMsg::Welcome { .. } => "welcome",
            ServerMsg::Queued { .. } => "queued",
            ServerMsg::RoomCreated { .. } => "room_created",
            ServerMsg::MatchFound { .. } => "match_found",
            ServerMsg::PhaseChange { .. } => "phase_change",
            ServerMsg::Snapshot { .. } => "snapshot",
            ServerMsg::TimerSync { .. } => "timer_sync",
            ServerMsg::PlanAck { .. } => "plan_ack",
            ServerMsg::Resolved { .. } => "resolved",
            ServerMsg::RoundEnd { .. } => "round_end",
            ServerMsg::MatchEnd { .. } => "match_end",
            ServerMsg::Error { .. } => "error",
        }
    }

    /// The projection carried by this message, if any.
    pub fn view(&self) -> Option<&PlayerView> {
        match self {
            ServerMsg::MatchFound { view, .. }
            | ServerMsg::PhaseChange { view, .. }
            | ServerMsg::Snapshot { view, .. }
            | ServerMsg::Resolved { view, .. }
            | ServerMsg::MatchEnd { view, .. } => Some(view),
            _ => None,
        }
    }
}

/// Error codes on the wire: the engine's error kinds plus transport failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorCode {
    CatalogError,
    PhaseViolation,
    InvalidSelection,
    UnknownContent,
    AlreadyAttached,
    InvalidPlan,
    AlreadySubmitted,
    NotReady,
    ReplayMismatch,
    ProtocolError,
    NameTaken,
    RoomNotFound,
    SessionNotFound,
    NotInMatch,
    TooLarge,
    BadMedia,
    Internal,
}

impl From<acg_core::ErrorKind> for ErrorCode {
    fn from(k: acg_core::ErrorKind) -> Self {
        use acg_core::ErrorKind as K;
        match k {
            K::CatalogError => ErrorCode::CatalogError,
            K::PhaseViolation => ErrorCode::PhaseViolation,
            K::InvalidSelection => ErrorCode::InvalidSelection,
            K::UnknownContent => ErrorCode::UnknownContent,
            K::AlreadyAttached => ErrorCode::AlreadyAttached,
            K::InvalidPlan => ErrorCode::InvalidPlan,
            K::AlreadySubmitted => ErrorCode::AlreadySubmitted,
            K::NotReady => ErrorCode::NotReady,
            K::ReplayMismatch => ErrorCode::ReplayMismatch,
        }
    }
}

/// A typed failure destined for one client.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{code:?}: {message}")]
pub struct WireError {
    pub code: ErrorCode,
    pub message: String,
}

impl WireError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn protocol(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::ProtocolError, message)
    }
}

impl From<acg_core::GameError> for WireError {
    fn from(e: acg_core::GameError) -> Self {
        WireError::new(e.kind().into(), e.to_string())
    }
}

impl From<WireError> for ServerMsg {
    fn from(e: WireError) -> Self {
        ServerMsg::Error {
            code: e.code,
            message: e.message,
        }
    }
}

#[derive(Deserialize)]
struct RawEnvelope {
    protocol_version: u32,
    seq: u64,
    kind: String,
    #[serde(default)]
    payload: Option<Value>,
    #[serde(default)]
    match_id: Option<String>,
}

/// Parses one client frame. The returned `seq` is `None` when the frame
/// was too broken to carry one.
pub fn parse_client(text: &str) -> Result<Envelope<ClientMsg>, (Option<u64>, WireError)> {
    let raw: RawEnvelope = serde_json::from_str(text).map_err(|e| {
        let seq = serde_json::from_str::<Value>(text)
            .ok()
            .and_then(|v| v.get("seq").and_then(Value::as_u64));
        (seq, WireError::protocol(format!("malformed envelope: {e}")))
    })?;
    if raw.protocol_version != PROTOCOL_VERSION {
        return Err((
            Some(raw.seq),
            WireError::protocol(format!(
                "protocol_version {} unsupported (server speaks {PROTOCOL_VERSION})",
                raw.protocol_version
            )),
        ));
    }
    let mut tagged = serde_json::Map::new();
    tagged.insert("kind".into(), Value::String(raw.kind.clone()));
    if let Some(p) = raw.payload {
        tagged.insert("payload".into(), p);
    }
    let body: ClientMsg = serde_json::from_value(Value::Object(tagged))
        .map_err(|e| (Some(raw.seq), WireError::protocol(format!("bad `{}` payload: {e}", raw.kind))))?;
    Ok(Envelope {
        protocol_version: raw.protocol_version,
        seq: raw.seq,
        body,
        match_id: raw.match_id,
        reply_to: None,
    })
}

pub fn encode<T: Serialize>(env: &Envelope<T>) -> String {
    serde_json::to_string(env).expect("envelopes serialize")
}
