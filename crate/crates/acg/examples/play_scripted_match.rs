//! Two headless scripted clients play a full match against an in-process
//! server with the Illustrate timers shrunk a hundredfold. The second player
//! skips its round-3 upload, so that round starts on the deadline.

use acg::core::HandSelection;
use acg::server::script::{scripted_match, ScriptedPlayer};
use acg::server::{Server, ServerConfig};

fn player(name: &str, archetype: &str, first_move: &str, premades: [&str; 2]) -> ScriptedPlayer {
    ScriptedPlayer {
        name: name.into(),
        selection: HandSelection {
            prompt_id: "storm_courier".into(),
            archetype_id: archetype.into(),
            first_move_id: first_move.into(),
            premade_ids: premades.map(String::from),
        },
        tie_rounds: Vec::new(),
        skip_upload_rounds: Vec::new(),
    }
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let data = std::env::temp_dir().join("acg-scripted-demo");
    let config = ServerConfig {
        bind: "127.0.0.1:0".parse().unwrap(),
        data_dir: data.clone(),
        timer_scale: 0.01,
        tick_interval: Some(std::time::Duration::from_millis(20)),
        ..ServerConfig::default()
    };
    let server = Server::new(acg::core::Engine::builtin(), config)?;
    let running = server.start().await?;

    let ana = player("ana", "vanguard", "chilling_axe", ["blind_rex", "feline_duelist"]);
    let mut bo = player("bo", "arcanist", "ember_bolt", ["ice_sentry", "vine_maw"]);
    bo.skip_upload_rounds = vec![3];
    let [a, b] = scripted_match(&running.ws_url(), &running.http_url(), ana, bo)
        .await
        .expect("match completes");

    println!("match {}", a.match_id);
    for (i, outcome) in a.rounds.iter().enumerate() {
        println!("round {}: {outcome:?}", i + 1);
    }
    println!("result: {:?}", a.result);
    println!("turns resolved: {}", a.logs.len());
    println!("frames received: A {} / B {}", a.transcript.len(), b.transcript.len());
    for r in server.audit() {
        println!("journal {} replays: memory {} disk {}", r.match_id, r.memory_ok, r.disk_ok);
    }
    println!("journals under {}", data.join("journals").display());
    running.shutdown().await
}
