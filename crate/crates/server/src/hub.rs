//! Lobby, sessions and the per-match command path shared by every connection.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard};

use acg_core::{
    AssetRef, Command, Engine, Journal, MatchState, MediaType, Phase, Player, ResolutionLog,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tokio::sync::mpsc;

use crate::clock::{illustrate_duration_ms, Clock};
use crate::config::ServerConfig;
use crate::protocol::{ClientMsg, Envelope, ErrorCode, ServerMsg, WireError};
use crate::storage::{
    prune_journals, read_journal, system_time_from_ms, AssetStore, JournalFile, JournalHeader,
};

const ROOM_ALPHABET: &[u8] = b"ABCDEFGHJKMNPQRSTUVWXYZ23456789";

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|p| p.into_inner())
}

/// A frame waiting for its connection's writer, which assigns `seq`.
#[derive(Debug, Clone)]
pub struct Outgoing {
    pub body: ServerMsg,
    pub match_id: Option<String>,
    pub reply_to: Option<u64>,
}

pub type Outbox = mpsc::UnboundedSender<Outgoing>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Binding {
    match_id: String,
    player: Player,
}

pub struct Conn {
    id: u64,
    tx: Outbox,
    binding: Mutex<Option<Binding>>,
    /// Name held in the lobby or a room while waiting for a partner.
    waiting_as: Mutex<Option<String>>,
    last_seq: Mutex<Option<u64>>,
}

impl Conn {
    fn send(&self, body: ServerMsg, reply_to: Option<u64>) {
        let _ = self.tx.send(Outgoing {
            body,
            match_id: None,
            reply_to,
        });
    }
}

struct Waiting {
    name: String,
    conn: Arc<Conn>,
}

#[derive(Default)]
struct Lobby {
    queue: VecDeque<Waiting>,
    rooms: HashMap<String, Waiting>,
    /// Names queued, hosting a room, or seated in an unfinished match.
    active: HashSet<String>,
}

struct Session {
    seed: u64,
    names: [String; 2],
    state: MatchState,
    journal: Journal,
    file: Option<JournalFile>,
    deadline_ms: Option<u64>,
    last_sync_ms: u64,
    last_activity_ms: u64,
    finished_at_ms: Option<u64>,
    outboxes: [Option<(u64, Outbox)>; 2],
}

/// Read-only facts about one session, for tests and operators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionInfo {
    pub match_id: String,
    pub phase: Phase,
    pub deadline_ms: Option<u64>,
    pub journal_len: usize,
    pub state_hash: String,
    pub finished: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub match_id: String,
    /// The in-memory journal replays to the live state.
    pub memory_ok: bool,
    /// The on-disk journal replays to the live state.
    pub disk_ok: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GcReport {
    pub sessions: usize,
    pub journals: usize,
    pub assets: usize,
}

pub struct Hub {
    pub(crate) engine: Engine,
    pub(crate) config: ServerConfig,
    pub(crate) clock: Arc<dyn Clock>,
    pub(crate) assets: AssetStore,
    journal_dir: PathBuf,
    rng: Mutex<ChaCha8Rng>,
    lobby: Mutex<Lobby>,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    tokens: Mutex<HashMap<String, (String, Player)>>,
    next_conn: AtomicU64,
}

/// Messages produced under a session lock, delivered after it is released.
#[derive(Default)]
struct Mail {
    out: Vec<(Outbox, Outgoing)>,
    finished_names: Option<[String; 2]>,
}

impl Mail {
    fn deliver(self, hub: &Hub) {
        for (tx, msg) in self.out {
            let _ = tx.send(msg);
        }
        if let Some(names) = self.finished_names {
            let mut lobby = lock(&hub.lobby);
            for n in names {
                lobby.active.remove(&n);
            }
        }
    }
}

impl Hub {
    pub fn new(engine: Engine, config: ServerConfig, clock: Arc<dyn Clock>) -> io::Result<Self> {
        let assets = AssetStore::open(config.asset_dir())?;
        let placeholder = engine.catalog().placeholder_asset.clone();
        if placeholder.content_hash == acg_core::asset::sha256_hex(acg_core::catalog::PLACEHOLDER_PNG) {
            assets.put(acg_core::catalog::PLACEHOLDER_PNG, placeholder.media_type)?;
        }
        let journal_dir = config.journal_dir();
        std::fs::create_dir_all(&journal_dir)?;
        let rng = match config.rng_seed {
            Some(s) => ChaCha8Rng::seed_from_u64(s),
            None => ChaCha8Rng::from_rng(&mut rand::rng()),
        };
        Ok(Self {
            engine,
            config,
            clock,
            assets,
            journal_dir,
            rng: Mutex::new(rng),
            lobby: Mutex::default(),
            sessions: Mutex::default(),
            tokens: Mutex::default(),
            next_conn: AtomicU64::new(1),
        })
    }

    pub fn connect(&self, tx: Outbox) -> Arc<Conn> {
        Arc::new(Conn {
            id: self.next_conn.fetch_add(1, Ordering::Relaxed),
            tx,
            binding: Mutex::new(None),
            waiting_as: Mutex::new(None),
            last_seq: Mutex::new(None),
        })
    }

    pub fn disconnect(&self, conn: &Conn) {
        if let Some(name) = lock(&conn.waiting_as).take() {
            let mut lobby = lock(&self.lobby);
            lobby.queue.retain(|w| w.conn.id != conn.id);
            lobby.rooms.retain(|_, w| w.conn.id != conn.id);
            lobby.active.remove(&name);
        }
        if let Some(b) = lock(&conn.binding).take() {
            if let Some(session) = self.session(&b.match_id) {
                let mut s = lock(&session);
                let slot = &mut s.outboxes[b.player.index()];
                if slot.as_ref().is_some_and(|(id, _)| *id == conn.id) {
                    *slot = None;
                }
            }
        }
    }

    fn session(&self, match_id: &str) -> Option<Arc<Mutex<Session>>> {
        lock(&self.sessions).get(match_id).cloned()
    }

    fn token(&self) -> String {
        let bytes: [u8; 16] = lock(&self.rng).random();
        hex::encode(bytes)
    }

    /// Handles one text frame from `conn`.
    pub fn handle_text(&self, conn: &Arc<Conn>, text: &str) {
        let env = match crate::protocol::parse_client(text) {
            Ok(env) => env,
            Err((seq, e)) => return conn.send(e.into(), seq),
        };
        let seq = env.seq;
        {
            let mut last = lock(&conn.last_seq);
            if last.is_some_and(|l| seq <= l) {
                drop(last);
                return conn.send(WireError::protocol("seq must increase").into(), Some(seq));
            }
            *last = Some(seq);
        }
        if let Err(e) = self.dispatch(conn, env) {
            conn.send(e.into(), Some(seq));
        }
    }

    fn dispatch(&self, conn: &Arc<Conn>, env: Envelope<ClientMsg>) -> Result<(), WireError> {
        let seq = env.seq;
        let player_cmd = |player: Player| -> Option<Command> {
            Some(match &env.body {
                ClientMsg::SelectHand(selection) => Command::SelectHand {
                    player,
                    selection: selection.clone(),
                },
                ClientMsg::SelectRoundMove { move_id } => Command::SelectRoundMove {
                    player,
                    move_id: move_id.clone(),
                },
                ClientMsg::SubmitPlan { plan } => Command::SubmitPlan {
                    player,
                    plan: plan.clone(),
                },
                ClientMsg::DeclareTie => Command::DeclareTie { player },
                ClientMsg::Forfeit => Command::Forfeit { player },
                _ => return None,
            })
        };
        match &env.body {
            ClientMsg::Hello => {
                conn.send(
                    ServerMsg::Welcome {
                        protocol_version: crate::protocol::PROTOCOL_VERSION,
                        catalog_digest: self.engine.catalog_digest().into(),
                    },
                    Some(seq),
                );
                Ok(())
            }
            ClientMsg::JoinLobby { name } => self.join_lobby(conn, name, seq),
            ClientMsg::CreateRoom { name } => self.create_room(conn, name, seq),
            ClientMsg::JoinRoom { name, code } => self.join_room(conn, name, code, seq),
            ClientMsg::Resume { token } => self.resume(conn, token, seq),
            _ => {
                let b = lock(&conn.binding)
                    .clone()
                    .ok_or_else(|| WireError::new(ErrorCode::NotInMatch, "join a match first"))?;
                if env.match_id.as_ref().is_some_and(|m| *m != b.match_id) {
                    return Err(WireError::new(ErrorCode::NotInMatch, "match_id does not match this connection"));
                }
                let cmd = player_cmd(b.player).expect("remaining messages are game commands");
                self.command(&b.match_id, cmd, Some((b.player, seq)))
            }
        }
    }

    fn claim_name(&self, lobby: &mut Lobby, conn: &Conn, name: &str) -> Result<(), WireError> {
        if name.trim().is_empty() {
            return Err(WireError::protocol("name must be non-empty"));
        }
        if lock(&conn.waiting_as).is_some() || lock(&conn.binding).is_some() {
            return Err(WireError::protocol("this connection is already waiting or seated"));
        }
        if !lobby.active.insert(name.to_string()) {
            return Err(WireError::new(ErrorCode::NameTaken, format!("`{name}` is already playing")));
        }
        *lock(&conn.waiting_as) = Some(name.to_string());
        Ok(())
    }

    fn join_lobby(&self, conn: &Arc<Conn>, name: &str, seq: u64) -> Result<(), WireError> {
        let mut lobby = lock(&self.lobby);
        self.claim_name(&mut lobby, conn, name)?;
        match lobby.queue.pop_front() {
            Some(first) => {
                drop(lobby);
                let second = Waiting {
                    name: name.to_string(),
                    conn: conn.clone(),
                };
                self.start_match(first, second, None, Some(seq))
            }
            None => {
                lobby.queue.push_back(Waiting {
                    name: name.to_string(),
                    conn: conn.clone(),
                });
                conn.send(ServerMsg::Queued { position: 1 }, Some(seq));
                Ok(())
            }
        }
    }

    fn create_room(&self, conn: &Arc<Conn>, name: &str, seq: u64) -> Result<(), WireError> {
        let mut lobby = lock(&self.lobby);
        self.claim_name(&mut lobby, conn, name)?;
        let code = loop {
            let code: String = {
                let mut rng = lock(&self.rng);
                (0..6)
                    .map(|_| ROOM_ALPHABET[rng.random_range(0..ROOM_ALPHABET.len())] as char)
                    .collect()
            };
            if !lobby.rooms.contains_key(&code) {
                break code;
            }
        };
        lobby.rooms.insert(
            code.clone(),
            Waiting {
                name: name.to_string(),
                conn: conn.clone(),
            },
        );
        conn.send(ServerMsg::RoomCreated { code }, Some(seq));
        Ok(())
    }

    fn join_room(&self, conn: &Arc<Conn>, name: &str, code: &str, seq: u64) -> Result<(), WireError> {
        let mut lobby = lock(&self.lobby);
        if !lobby.rooms.contains_key(code) {
            return Err(WireError::new(ErrorCode::RoomNotFound, format!("no room `{code}`")));
        }
        self.claim_name(&mut lobby, conn, name)?;
        let host = lobby.rooms.remove(code).expect("checked above");
        drop(lobby);
        let guest = Waiting {
            name: name.to_string(),
            conn: conn.clone(),
        };
        self.start_match(host, guest, None, Some(seq))
    }

    /// Seats `a` as player A and `b` as player B in a fresh match.
    fn start_match(&self, a: Waiting, b: Waiting, reply_a: Option<u64>, reply_b: Option<u64>) -> Result<(), WireError> {
        let seed: u64 = lock(&self.rng).random();
        let tokens = [self.token(), self.token()];
        let state = self.engine.new_match(seed);
        let match_id = state.match_id.clone();
        let header = JournalHeader {
            match_id: match_id.clone(),
            seed,
            catalog_digest: self.engine.catalog_digest().into(),
        };
        let file = JournalFile::create(&self.journal_dir, &header)
            .inspect_err(|e| tracing::warn!(%match_id, "journal file unavailable: {e}"))
            .ok();
        let now = self.clock.now_ms();
        let seats = [(a, reply_a), (b, reply_b)];
        let session = Session {
            seed,
            names: [seats[0].0.name.clone(), seats[1].0.name.clone()],
            journal: Journal::new(&self.engine, seed),
            file,
            deadline_ms: None,
            last_sync_ms: now,
            last_activity_ms: now,
            finished_at_ms: None,
            outboxes: [
                Some((seats[0].0.conn.id, seats[0].0.conn.tx.clone())),
                Some((seats[1].0.conn.id, seats[1].0.conn.tx.clone())),
            ],
            state,
        };
        {
            let mut t = lock(&self.tokens);
            t.insert(tokens[0].clone(), (match_id.clone(), Player::A));
            t.insert(tokens[1].clone(), (match_id.clone(), Player::B));
        }
        let views = Player::BOTH.map(|p| self.engine.project(&session.state, p));
        lock(&self.sessions).insert(match_id.clone(), Arc::new(Mutex::new(session)));
        tracing::info!(%match_id, seed, "match started");
        for ((w, reply), (p, view)) in seats.into_iter().zip(Player::BOTH.into_iter().zip(views)) {
            *lock(&w.conn.waiting_as) = None;
            *lock(&w.conn.binding) = Some(Binding {
                match_id: match_id.clone(),
                player: p,
            });
            let _ = w.conn.tx.send(Outgoing {
                body: ServerMsg::MatchFound {
                    match_id: match_id.clone(),
                    token: tokens[p.index()].clone(),
                    you: p,
                    view: Box::new(view),
                },
                match_id: Some(match_id.clone()),
                reply_to: reply,
            });
        }
        Ok(())
    }

    fn resume(&self, conn: &Arc<Conn>, token: &str, seq: u64) -> Result<(), WireError> {
        let not_found = || WireError::new(ErrorCode::SessionNotFound, "unknown or expired token");
        let (match_id, player) = lock(&self.tokens).get(token).cloned().ok_or_else(not_found)?;
        let session = self.session(&match_id).ok_or_else(not_found)?;
        if lock(&conn.waiting_as).is_some() {
            return Err(WireError::protocol("this connection is waiting in the lobby"));
        }
        let now = self.clock.now_ms();
        let mut s = lock(&session);
        s.outboxes[player.index()] = Some((conn.id, conn.tx.clone()));
        *lock(&conn.binding) = Some(Binding {
            match_id: match_id.clone(),
            player,
        });
        let view = self.engine.project(&s.state, player);
        let remaining_ms = s.deadline_ms.map(|d| d.saturating_sub(now));
        drop(s);
        let _ = conn.tx.send(Outgoing {
            body: ServerMsg::Snapshot {
                view: Box::new(view),
                remaining_ms,
            },
            match_id: Some(match_id),
            reply_to: Some(seq),
        });
        Ok(())
    }

    /// Applies `cmd` to a session, then any automatic follow-ups.
    pub(crate) fn command(&self, match_id: &str, cmd: Command, actor: Option<(Player, u64)>) -> Result<(), WireError> {
        let session = self
            .session(match_id)
            .ok_or_else(|| WireError::new(ErrorCode::SessionNotFound, "session is gone"))?;
        let mut mail = Mail::default();
        {
            let mut s = lock(&session);
            self.apply(&mut s, match_id, &cmd, actor, &mut mail)?;
            self.drive(&mut s, match_id, &mut mail);
        }
        mail.deliver(self);
        Ok(())
    }

    fn apply(
        &self,
        s: &mut Session,
        match_id: &str,
        cmd: &Command,
        actor: Option<(Player, u64)>,
        mail: &mut Mail,
    ) -> Result<(), WireError> {
        let applied = self.engine.apply(&s.state, cmd)?;
        self.commit(s, match_id, cmd.clone(), applied.state, applied.log, actor, mail);
        Ok(())
    }

    /// Resolves full turns and concludes finished rounds without client input.
    fn drive(&self, s: &mut Session, match_id: &str, mail: &mut Mail) {
        loop {
            let next = match s.state.phase {
                Phase::AwaitPlans { .. } if s.state.both_plans_in() => Command::ResolveTurn,
                Phase::RoundOver { .. } => Command::ConcludeRound,
                _ => break,
            };
            if let Err(e) = self.apply(s, match_id, &next, None, mail) {
                tracing::error!(%match_id, "automatic {} rejected: {e:?}", next.name());
                break;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn commit(
        &self,
        s: &mut Session,
        match_id: &str,
        cmd: Command,
        next: MatchState,
        log: Option<ResolutionLog>,
        actor: Option<(Player, u64)>,
        mail: &mut Mail,
    ) {
        let now = self.clock.now_ms();
        let prev = std::mem::replace(&mut s.state, next);
        s.journal.record(cmd.clone(), &s.state);
        if let (Some(f), Some(entry)) = (s.file.as_mut(), s.journal.entries.last()) {
            if let Err(e) = f.append(entry) {
                tracing::warn!(%match_id, "journal append failed: {e}");
            }
        }
        s.last_activity_ms = now;

        let state = &s.state;
        match state.phase {
            Phase::Illustrate { round } if prev.phase != state.phase => {
                let d = illustrate_duration_ms(&state.timer_schedule, round, self.config.timer_scale);
                s.deadline_ms = Some(now + d);
                s.last_sync_ms = now;
            }
            Phase::Illustrate { .. } => {}
            _ => s.deadline_ms = None,
        }
        let remaining_ms = s.deadline_ms.map(|d| d.saturating_sub(now));

        let phase_changed = prev.phase != state.phase;
        let round_ended = state.rounds.len() > prev.rounds.len();
        let match_ended = state.result.is_some() && prev.result.is_none();
        if match_ended {
            s.finished_at_ms = Some(now);
            mail.finished_names = Some(s.names.clone());
            tracing::info!(%match_id, "match over");
        }

        for p in Player::BOTH {
            let Some((_, tx)) = &s.outboxes[p.index()] else {
                continue;
            };
            let mut reply = actor.filter(|(a, _)| *a == p).map(|(_, seq)| seq);
            let mut push = |body: ServerMsg| {
                mail.out.push((
                    tx.clone(),
                    Outgoing {
                        body,
                        match_id: Some(match_id.to_string()),
                        reply_to: reply.take(),
                    },
                ));
            };
            if let (Command::SubmitPlan { .. }, Some((a, _))) = (&cmd, actor) {
                if a == p {
                    push(ServerMsg::PlanAck {
                        round: prev.round(),
                        turn: prev.turn().unwrap_or(0),
                    });
                }
            }
            let view = || Box::new(self.engine.project(&s.state, p));
            if let Some(log) = &log {
                push(ServerMsg::Resolved {
                    log: Box::new(log.clone()),
                    view: view(),
                });
            }
            if round_ended {
                let outcome = state.rounds.last().expect("round ended").clone();
                push(ServerMsg::RoundEnd {
                    round: state.rounds.len() as u8,
                    outcome,
                    round_wins: [state.players[0].round_wins, state.players[1].round_wins],
                });
            }
            if match_ended {
                push(ServerMsg::MatchEnd {
                    result: state.result.expect("match ended"),
                    view: view(),
                });
            } else if log.is_none() {
                if phase_changed {
                    push(ServerMsg::PhaseChange {
                        view: view(),
                        remaining_ms,
                    });
                } else {
                    push(ServerMsg::Snapshot {
                        view: view(),
                        remaining_ms,
                    });
                }
            }
        }
    }

    /// Expires overdue illustrations and sends periodic timer syncs.
    /// Returns how many Illustrate phases were expired.
    pub fn tick(&self) -> usize {
        let now = self.clock.now_ms();
        let sessions: Vec<(String, Arc<Mutex<Session>>)> =
            lock(&self.sessions).iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut expired = 0;
        for (match_id, session) in sessions {
            let mut mail = Mail::default();
            {
                let mut s = lock(&session);
                let (Some(deadline), Phase::Illustrate { round }) = (s.deadline_ms, s.state.phase) else {
                    continue;
                };
                if now >= deadline {
                    let cmd = Command::ExpireIllustration { round };
                    match self.apply(&mut s, &match_id, &cmd, None, &mut mail) {
                        Ok(()) => expired += 1,
                        Err(e) => tracing::error!(%match_id, "expiry rejected: {e:?}"),
                    }
                    self.drive(&mut s, &match_id, &mut mail);
                } else if now.saturating_sub(s.last_sync_ms) >= self.config.sync_interval.as_millis() as u64 {
                    s.last_sync_ms = now;
                    for (_, tx) in s.outboxes.iter().flatten() {
                        mail.out.push((
                            tx.clone(),
                            Outgoing {
                                body: ServerMsg::TimerSync {
                                    round,
                                    remaining_ms: deadline - now,
                                },
                                match_id: Some(match_id.clone()),
                                reply_to: None,
                            },
                        ));
                    }
                }
            }
            mail.deliver(self);
        }
        expired
    }

    /// Stores an uploaded illustration and attaches it for the token's player.
    pub fn upload(&self, token: &str, bytes: &[u8], media_type: MediaType) -> Result<AssetRef, WireError> {
        if bytes.len() > self.config.upload_cap {
            return Err(WireError::new(
                ErrorCode::TooLarge,
                format!("{} bytes exceeds the {} byte cap", bytes.len(), self.config.upload_cap),
            ));
        }
        let (match_id, player) = lock(&self.tokens)
            .get(token)
            .cloned()
            .ok_or_else(|| WireError::new(ErrorCode::SessionNotFound, "unknown or expired token"))?;
        let session = self
            .session(&match_id)
            .ok_or_else(|| WireError::new(ErrorCode::SessionNotFound, "session is gone"))?;
        let asset = AssetRef::for_bytes(bytes, media_type);
        let attach = |s: &Session| -> Result<Command, WireError> {
            let Phase::Illustrate { round } = s.state.phase else {
                return Err(WireError::new(
                    ErrorCode::PhaseViolation,
                    format!("uploads are accepted during Illustrate, not {}", s.state.phase),
                ));
            };
            self.engine.attach_illustration(&s.state, player, round, &asset)?;
            Ok(Command::AttachIllustration {
                player,
                round,
                asset: asset.clone(),
            })
        };
        attach(&lock(&session))?;

        let format = match media_type {
            MediaType::Png => image::ImageFormat::Png,
            MediaType::Jpeg => image::ImageFormat::Jpeg,
        };
        image::load_from_memory_with_format(bytes, format)
            .map_err(|e| WireError::new(ErrorCode::BadMedia, format!("not a decodable {}: {e}", media_type.mime())))?;
        self.assets
            .put(bytes, media_type)
            .map_err(|e| WireError::new(ErrorCode::Internal, format!("storage failed: {e}")))?;

        let mut mail = Mail::default();
        {
            let mut s = lock(&session);
            let cmd = attach(&s)?;
            self.apply(&mut s, &match_id, &cmd, None, &mut mail)?;
            self.drive(&mut s, &match_id, &mut mail);
        }
        mail.deliver(self);
        Ok(asset)
    }

    pub fn session_info(&self, match_id: &str) -> Option<SessionInfo> {
        let session = self.session(match_id)?;
        let s = lock(&session);
        Some(SessionInfo {
            match_id: match_id.to_string(),
            phase: s.state.phase,
            deadline_ms: s.deadline_ms,
            journal_len: s.journal.len(),
            state_hash: s.state.state_hash(),
            finished: s.finished_at_ms.is_some(),
        })
    }

    pub fn match_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = lock(&self.sessions).keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn assets(&self) -> &AssetStore {
        &self.assets
    }

    /// Replays every session's journal, from memory and from disk.
    pub fn audit(&self) -> Vec<AuditReport> {
        let mut out = Vec::new();
        for match_id in self.match_ids() {
            let Some(session) = self.session(&match_id) else {
                continue;
            };
            let s = lock(&session);
            let memory_ok = s.journal.seed == s.seed
                && s.journal.verify(&self.engine).is_ok_and(|st| st == s.state);
            let disk_ok = s.file.as_ref().is_some_and(|f| {
                read_journal(f.path())
                    .ok()
                    .and_then(|(_, j)| j.verify(&self.engine).ok())
                    .is_some_and(|st| st == s.state)
            });
            out.push(AuditReport {
                match_id,
                memory_ok,
                disk_ok,
            });
        }
        out
    }

    /// Drops sessions idle or finished for longer than the retention window,
    /// and deletes journal and asset files older than it.
    pub fn gc(&self) -> io::Result<GcReport> {
        let now = self.clock.now_ms();
        let keep_ms = self.config.retention.as_millis() as u64;
        let mut report = GcReport::default();
        let stale: Vec<String> = lock(&self.sessions)
            .iter()
            .filter(|(_, s)| {
                let s = lock(s);
                s.finished_at_ms.unwrap_or(s.last_activity_ms) + keep_ms <= now
            })
            .map(|(k, _)| k.clone())
            .collect();
        for id in &stale {
            if let Some(session) = lock(&self.sessions).remove(id) {
                let s = lock(&session);
                let mut lobby = lock(&self.lobby);
                for n in &s.names {
                    lobby.active.remove(n);
                }
            }
            report.sessions += 1;
        }
        lock(&self.tokens).retain(|_, (m, _)| !stale.contains(m));
        if let Some(cutoff) = now.checked_sub(keep_ms) {
            let cutoff = system_time_from_ms(cutoff);
            report.journals = prune_journals(&self.journal_dir, cutoff)?;
            let placeholder = self.engine.catalog().placeholder_asset.content_hash.clone();
            report.assets = self.assets.prune(cutoff, &[&placeholder])?;
        }
        Ok(report)
    }
}
