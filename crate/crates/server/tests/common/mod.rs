#![allow(dead_code)]

use std::sync::Arc;
use std::time::Duration;

use acg_core::{Engine, HandSelection, Phase, PlayerView};
use acg_server::script::ScriptedPlayer;
use acg_server::{Client, ClientMsg, Envelope, MockClock, RunningServer, Server, ServerConfig, ServerMsg};
use tempfile::TempDir;

pub const T0: u64 = 1_700_000_000_000;

pub struct Harness {
    pub server: Server,
    pub running: RunningServer,
    pub clock: Option<MockClock>,
    pub dir: TempDir,
}

impl Harness {
    pub fn ws(&self) -> String {
        self.running.ws_url()
    }

    pub fn http(&self) -> String {
        self.running.http_url()
    }
}

pub fn config(dir: &TempDir) -> ServerConfig {
    ServerConfig {
        bind: "127.0.0.1:0".parse().unwrap(),
        data_dir: dir.path().to_path_buf(),
        rng_seed: Some(42),
        ..ServerConfig::default()
    }
}

/// Server on an ephemeral port driven by a mock clock; ticks are manual.
pub async fn mock_server() -> Harness {
    let dir = tempfile::tempdir().unwrap();
    let clock = MockClock::new(T0);
    let cfg = ServerConfig {
        tick_interval: None,
        ..config(&dir)
    };
    let server = Server::with_clock(Engine::builtin(), cfg, Arc::new(clock.clone())).unwrap();
    let running = server.start().await.unwrap();
    Harness {
        server,
        running,
        clock: Some(clock),
        dir,
    }
}

/// Server on the system clock with its own timer task.
pub async fn live_server(timer_scale: f64) -> Harness {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ServerConfig {
        timer_scale,
        tick_interval: Some(Duration::from_millis(20)),
        ..config(&dir)
    };
    let server = Server::new(Engine::builtin(), cfg).unwrap();
    let running = server.start().await.unwrap();
    Harness {
        server,
        running,
        clock: None,
        dir,
    }
}

pub fn selection(archetype: &str, first_move: &str, premades: [&str; 2]) -> HandSelection {
    HandSelection {
        prompt_id: "feline_warrior".into(),
        archetype_id: archetype.into(),
        first_move_id: first_move.into(),
        premade_ids: premades.map(String::from),
    }
}

pub fn sel_a() -> HandSelection {
    selection("vanguard", "chilling_axe", ["blind_rex", "feline_duelist"])
}

pub fn sel_b() -> HandSelection {
    selection("arcanist", "ember_bolt", ["ice_sentry", "vine_maw"])
}

pub fn scripted(name: &str, selection: HandSelection) -> ScriptedPlayer {
    ScriptedPlayer {
        name: name.into(),
        selection,
        tie_rounds: Vec::new(),
        skip_upload_rounds: Vec::new(),
    }
}

pub struct Seat {
    pub client: Client,
    pub match_id: String,
    pub token: String,
}

/// Two clients paired through the FIFO lobby, `ana` seated as A.
pub async fn pair(h: &Harness) -> (Seat, Seat) {
    let mut a = Client::connect(&h.ws()).await.unwrap();
    let mut b = Client::connect(&h.ws()).await.unwrap();
    let q = a.request(ClientMsg::JoinLobby { name: "ana".into() }).await.unwrap();
    assert!(matches!(q.body, ServerMsg::Queued { .. }), "{q:?}");
    let found_b = b.request(ClientMsg::JoinLobby { name: "bo".into() }).await.unwrap();
    let found_a = a.recv().await.unwrap();
    let seat = |client, env: Envelope<ServerMsg>| match env.body {
        ServerMsg::MatchFound { match_id, token, .. } => Seat {
            client,
            match_id,
            token,
        },
        other => panic!("expected match_found, got {other:?}"),
    };
    (seat(a, found_a), seat(b, found_b))
}

/// Waits for a projection whose phase satisfies `pred`.
pub async fn until_phase(c: &mut Client, pred: impl Fn(Phase) -> bool) -> PlayerView {
    let (env, _) = c
        .recv_until(|e| e.body.view().is_some_and(|v| pred(v.phase)))
        .await
        .unwrap();
    env.body.view().unwrap().clone()
}

/// Both seats pick their hands; returns once both see Illustrate(1).
pub async fn select_hands(a: &mut Seat, b: &mut Seat) {
    a.client.send(ClientMsg::SelectHand(sel_a())).await.unwrap();
    b.client.send(ClientMsg::SelectHand(sel_b())).await.unwrap();
    until_phase(&mut a.client, |p| p == Phase::Illustrate { round: 1 }).await;
    until_phase(&mut b.client, |p| p == Phase::Illustrate { round: 1 }).await;
}
