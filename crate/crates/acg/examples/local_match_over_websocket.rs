//! Drives one turn of a private-room match by hand over the wire protocol
//! and prints every frame each side receives.

use acg::core::{HandSelection, MediaType, Phase, PlayerView, TurnPlan};
use acg::server::script::{sample_png, upload};
use acg::server::{Client, ClientMsg, Server, ServerConfig, ServerMsg};

fn hand(archetype: &str, first_move: &str, premades: [&str; 2]) -> HandSelection {
    HandSelection {
        prompt_id: "clockwork_owl".into(),
        archetype_id: archetype.into(),
        first_move_id: first_move.into(),
        premade_ids: premades.map(String::from),
    }
}

async fn wait_for(c: &mut Client, pred: impl Fn(Phase) -> bool) -> PlayerView {
    let (env, _) = c
        .recv_until(|e| e.body.view().is_some_and(|v| pred(v.phase)))
        .await
        .expect("server keeps talking");
    env.body.view().unwrap().clone()
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let config = ServerConfig {
        bind: "127.0.0.1:0".parse().unwrap(),
        data_dir: std::env::temp_dir().join("acg-ws-demo"),
        ..ServerConfig::default()
    };
    let server = Server::new(acg::core::Engine::builtin(), config)?;
    let running = server.start().await?;
    let (ws, http) = (running.ws_url(), running.http_url());

    let mut host = Client::connect(&ws).await.unwrap();
    let mut guest = Client::connect(&ws).await.unwrap();
    host.request(ClientMsg::Hello).await.unwrap();
    let ServerMsg::RoomCreated { code } = host.request(ClientMsg::CreateRoom { name: "host".into() }).await.unwrap().body
    else {
        panic!("room not created")
    };
    println!("room code {code}");
    let joined = guest.request(ClientMsg::JoinRoom { name: "guest".into(), code }).await.unwrap();
    let ServerMsg::MatchFound { token: guest_token, .. } = joined.body else {
        panic!("not paired")
    };
    let ServerMsg::MatchFound { token: host_token, .. } = host.recv().await.unwrap().body else {
        panic!("not paired")
    };

    host.send(ClientMsg::SelectHand(hand("vanguard", "chilling_axe", ["blind_rex", "feline_duelist"])))
        .await
        .unwrap();
    guest
        .send(ClientMsg::SelectHand(hand("arcanist", "ember_bolt", ["ice_sentry", "vine_maw"])))
        .await
        .unwrap();
    wait_for(&mut host, |p| matches!(p, Phase::Illustrate { .. })).await;

    for (token, tag) in [(&host_token, 1), (&guest_token, 2)] {
        let asset = upload(&http, token, sample_png(tag), MediaType::Png).await.unwrap().unwrap();
        println!("uploaded {} ({} bytes)", asset.content_hash, asset.byte_size);
    }
    let view = wait_for(&mut host, |p| matches!(p, Phase::AwaitPlans { .. })).await;
    wait_for(&mut guest, |p| matches!(p, Phase::AwaitPlans { .. })).await;

    // Host attacks with the first legal option of every card; guest passes.
    let mut plan = TurnPlan::pass();
    for card in &view.legal.as_ref().unwrap().cards {
        if let Some(o) = card.options.first() {
            plan = plan.with(card.slot, o.move_id.clone(), o.target);
        }
    }
    host.request(ClientMsg::SubmitPlan { plan }).await.unwrap();
    guest.request(ClientMsg::SubmitPlan { plan: TurnPlan::pass() }).await.unwrap();
    for c in [&mut host, &mut guest] {
        c.recv_until(|e| matches!(e.body, ServerMsg::Resolved { .. })).await.unwrap();
    }

    for (who, c) in [("host", &host), ("guest", &guest)] {
        println!("\n-- frames to {who}");
        for frame in &c.transcript {
            let v: serde_json::Value = serde_json::from_str(frame).unwrap();
            println!("seq {:>2} {:<13} {} bytes", v["seq"], v["kind"].as_str().unwrap_or("?"), frame.len());
        }
    }
    running.shutdown().await
}
