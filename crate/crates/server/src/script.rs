//! Scripted headless players that drive a full match through the wire
//! protocol, acting only on the projections the server sends them.

use std::io::Cursor;

use acg_core::catalog::{Catalog, MoveKind};
use acg_core::plan::PlanEntry;
use acg_core::{AssetRef, HandSelection, MatchResult, MediaType, Phase, Player, PlayerView, ResolutionLog, RoundOutcome, TurnPlan};

use crate::client::{Client, ClientError};
use crate::protocol::{ClientMsg, ErrorCode, ServerMsg, WireError};

#[derive(Debug, thiserror::Error)]
pub enum ScriptError {
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error("http: {0}")]
    Http(#[from] reqwest::Error),
    #[error("server refused: {0}")]
    Refused(WireError),
    #[error("{0}")]
    Unexpected(String),
}

/// Encodes a small PNG whose pixels depend on `tag`.
pub fn sample_png(tag: u32) -> Vec<u8> {
    let img = image::RgbaImage::from_fn(32, 32, |x, y| {
        let v = tag.wrapping_mul(2654435761) ^ (x * 31 + y * 7);
        image::Rgba([v as u8, (v >> 8) as u8, (v >> 16) as u8, 255])
    });
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, image::ImageFormat::Png).expect("png encodes");
    out.into_inner()
}

/// POSTs raw image bytes to `/upload`. The inner error is the server's refusal.
pub async fn upload(
    http_base: &str,
    token: &str,
    bytes: Vec<u8>,
    media_type: MediaType,
) -> Result<Result<AssetRef, WireError>, reqwest::Error> {
    let resp = reqwest::Client::new()
        .post(format!("{http_base}/upload?token={token}"))
        .header("content-type", media_type.mime())
        .body(bytes)
        .send()
        .await?;
    if resp.status().is_success() {
        return Ok(Ok(resp.json().await?));
    }
    let v: serde_json::Value = resp.json().await?;
    let code = serde_json::from_value(v["code"].clone()).unwrap_or(ErrorCode::Internal);
    Ok(Err(WireError::new(code, v["message"].as_str().unwrap_or_default())))
}

pub async fn fetch_catalog(http_base: &str) -> Result<Catalog, reqwest::Error> {
    reqwest::get(format!("{http_base}/catalog")).await?.json().await
}

#[derive(Debug, Clone)]
pub struct ScriptedPlayer {
    pub name: String,
    pub selection: HandSelection,
    /// Rounds in which this player offers a tie instead of planning.
    pub tie_rounds: Vec<u8>,
    /// Rounds in which this player never uploads, leaving expiry to the server.
    pub skip_upload_rounds: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct PlayerReport {
    pub you: Player,
    pub match_id: String,
    pub token: String,
    pub result: MatchResult,
    pub rounds: Vec<RoundOutcome>,
    /// Phases in the order this player saw them.
    pub phases: Vec<Phase>,
    pub logs: Vec<ResolutionLog>,
    pub uploads: Vec<AssetRef>,
    pub final_view: PlayerView,
    pub transcript: Vec<String>,
}

/// Highest-damage attack per card on the weakest legal target.
fn attack_plan(view: &PlayerView) -> TurnPlan {
    let mut plan = TurnPlan::pass();
    let Some(legal) = &view.legal else {
        return plan;
    };
    let hp_of = |slot: u8| view.opponent.hand.get(slot as usize).map_or(u32::MAX, |c| c.hp);
    let magnitude = |id: &str| {
        view.hand
            .iter()
            .flat_map(|c| &c.moves)
            .find(|m| m.move_id == id)
            .map_or(0, |m| m.magnitude)
    };
    for card in &legal.cards {
        let best = card
            .options
            .iter()
            .filter(|o| o.kind == MoveKind::Attack)
            .max_by_key(|o| (magnitude(&o.move_id), std::cmp::Reverse(o.target.map(hp_of))));
        if let Some(o) = best {
            plan.entries.push(PlanEntry {
                slot: card.slot,
                move_id: o.move_id.clone(),
                target: o.target,
            });
        }
    }
    plan
}

/// Joins the lobby and plays until the match ends.
pub async fn play(ws_url: &str, http_base: &str, me: ScriptedPlayer) -> Result<PlayerReport, ScriptError> {
    let mut client = Client::connect(ws_url).await?;
    join(&mut client, &me).await?;
    finish(client, http_base, me).await
}

async fn join(client: &mut Client, me: &ScriptedPlayer) -> Result<(), ScriptError> {
    client.request(ClientMsg::Hello).await?;
    client
        .send(ClientMsg::JoinLobby {
            name: me.name.clone(),
        })
        .await?;
    Ok(())
}

async fn finish(mut client: Client, http_base: &str, me: ScriptedPlayer) -> Result<PlayerReport, ScriptError> {
    let catalog = fetch_catalog(http_base).await?;
    let mut identity: Option<(Player, String, String)> = None;
    let mut phases: Vec<Phase> = Vec::new();
    let mut logs = Vec::new();
    let mut rounds = Vec::new();
    let mut uploads = Vec::new();
    let mut acted: Vec<Phase> = Vec::new();

    loop {
        let env = client.recv().await?;
        match &env.body {
            ServerMsg::Error { code, message } => {
                return Err(ScriptError::Refused(WireError::new(*code, message.clone())));
            }
            ServerMsg::MatchFound { match_id, token, you, .. } => {
                identity = Some((*you, match_id.clone(), token.clone()));
            }
            ServerMsg::Resolved { log, .. } => logs.push((**log).clone()),
            ServerMsg::RoundEnd { outcome, .. } => rounds.push(*outcome),
            ServerMsg::MatchEnd { result, view } => {
                let (you, match_id, token) =
                    identity.ok_or_else(|| ScriptError::Unexpected("match ended before it was found".into()))?;
                phases.push(view.phase);
                return Ok(PlayerReport {
                    you,
                    match_id,
                    token,
                    result: *result,
                    rounds,
                    phases,
                    logs,
                    uploads,
                    final_view: (**view).clone(),
                    transcript: std::mem::take(&mut client.transcript),
                });
            }
            _ => {}
        }
        let Some(view) = env.body.view().cloned() else {
            continue;
        };
        if phases.last() != Some(&view.phase) {
            phases.push(view.phase);
        }
        let Some((_, _, token)) = &identity else {
            continue;
        };

        // At most one action per phase value; AwaitPlans carries the turn.
        if acted.contains(&view.phase) {
            continue;
        }
        acted.push(view.phase);
        match view.phase {
            Phase::Setup if view.hand.is_empty() => {
                client.send(ClientMsg::SelectHand(me.selection.clone())).await?;
            }
            Phase::Customize { round } => {
                let custom = view.hand.iter().find(|c| c.custom);
                let owned: Vec<&str> = custom.map_or(Vec::new(), |c| c.moves.iter().map(|m| m.move_id.as_str()).collect());
                if owned.len() < round as usize {
                    let pool = &catalog
                        .archetype(&me.selection.archetype_id)
                        .ok_or_else(|| ScriptError::Unexpected("archetype missing from catalog".into()))?
                        .move_pool;
                    let pick = pool
                        .iter()
                        .find(|m| !owned.contains(&m.as_str()))
                        .ok_or_else(|| ScriptError::Unexpected("move pool exhausted".into()))?;
                    client
                        .send(ClientMsg::SelectRoundMove {
                            move_id: pick.clone(),
                        })
                        .await?;
                }
            }
            Phase::Illustrate { round } if !me.skip_upload_rounds.contains(&round) => {
                let tag = round as u32 * 10 + view.you.index() as u32;
                match upload(http_base, token, sample_png(tag), MediaType::Png).await? {
                    Ok(asset) => uploads.push(asset),
                    // The server may have expired the round while we were uploading.
                    Err(e) if e.code == ErrorCode::PhaseViolation => {}
                    Err(e) => return Err(ScriptError::Refused(e)),
                }
            }
            Phase::AwaitPlans { round, .. } if view.legal.is_some() => {
                if me.tie_rounds.contains(&round) {
                    client.send(ClientMsg::DeclareTie).await?;
                } else {
                    client.send(ClientMsg::SubmitPlan { plan: attack_plan(&view) }).await?;
                }
            }
            _ => {}
        }
    }
}

/// Runs two scripted players against one server. `first` is seated as A.
pub async fn scripted_match(
    ws_url: &str,
    http_base: &str,
    first: ScriptedPlayer,
    second: ScriptedPlayer,
) -> Result<[PlayerReport; 2], ScriptError> {
    let mut a = Client::connect(ws_url).await?;
    join(&mut a, &first).await?;
    a.recv_until(|e| matches!(e.body, ServerMsg::Queued { .. })).await?;
    let ra = finish(a, http_base, first);
    let rb = play(ws_url, http_base, second);
    let (ra, rb) = tokio::join!(ra, rb);
    Ok([ra?, rb?])
}
