//! Routes: `/ws` match stream, `/upload`, `/assets/{hash}`, `/catalog`, `/health`.

use std::collections::HashMap;
use std::sync::Arc;

use acg_core::MediaType;
use axum::body::{Body, Bytes};
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures_util::{SinkExt, StreamExt};
use tokio::sync::mpsc;

use crate::hub::{Hub, Outgoing};
use crate::protocol::{encode, Envelope, ErrorCode, WireError, PROTOCOL_VERSION};

pub fn router(hub: Arc<Hub>) -> Router {
    Router::new()
        .route("/ws", get(ws_upgrade))
        .route("/upload", post(upload))
        .route("/assets/{hash}", get(asset))
        .route("/catalog", get(catalog))
        .route("/health", get(|| async { "ok" }))
        .layer(DefaultBodyLimit::disable())
        .with_state(hub)
}

fn status_of(code: ErrorCode) -> StatusCode {
    match code {
        ErrorCode::TooLarge => StatusCode::PAYLOAD_TOO_LARGE,
        ErrorCode::BadMedia => StatusCode::UNSUPPORTED_MEDIA_TYPE,
        ErrorCode::SessionNotFound => StatusCode::NOT_FOUND,
        ErrorCode::PhaseViolation | ErrorCode::AlreadyAttached => StatusCode::CONFLICT,
        ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

impl IntoResponse for WireError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "code": self.code, "message": self.message });
        (status_of(self.code), Json(body)).into_response()
    }
}

async fn ws_upgrade(State(hub): State<Arc<Hub>>, ws: WebSocketUpgrade) -> Response {
    ws.on_upgrade(move |socket| connection(hub, socket))
}

async fn connection(hub: Arc<Hub>, socket: WebSocket) {
    let (mut sink, mut stream) = socket.split();
    let (tx, mut rx) = mpsc::unbounded_channel::<Outgoing>();
    let conn = hub.connect(tx);

    let writer = tokio::spawn(async move {
        let mut seq = 0u64;
        while let Some(out) = rx.recv().await {
            seq += 1;
            let text = encode(&Envelope {
                protocol_version: PROTOCOL_VERSION,
                seq,
                body: out.body,
                match_id: out.match_id,
                reply_to: out.reply_to,
            });
            if sink.send(Message::Text(text.into())).await.is_err() {
                break;
            }
        }
    });

    while let Some(Ok(msg)) = stream.next().await {
        match msg {
            Message::Text(t) => hub.handle_text(&conn, t.as_str()),
            Message::Binary(b) => match std::str::from_utf8(&b) {
                Ok(t) => hub.handle_text(&conn, t),
                Err(_) => hub.handle_text(&conn, ""),
            },
            Message::Close(_) => break,
            _ => {}
        }
    }
    hub.disconnect(&conn);
    drop(conn);
    writer.abort();
}

async fn upload(
    State(hub): State<Arc<Hub>>,
    Query(q): Query<HashMap<String, String>>,
    headers: HeaderMap,
    body: Body,
) -> Result<Json<acg_core::AssetRef>, WireError> {
    let cap = hub.config.upload_cap;
    let bytes = read_capped(body, cap).await?;
    let token = q
        .get("token")
        .cloned()
        .or_else(|| {
            headers
                .get(header::AUTHORIZATION)
                .and_then(|v| v.to_str().ok())
                .and_then(|v| v.strip_prefix("Bearer "))
                .map(str::to_string)
        })
        .ok_or_else(|| WireError::new(ErrorCode::SessionNotFound, "missing token"))?;
    let declared = q.get("media_type").map(String::as_str).or_else(|| {
        headers.get(header::CONTENT_TYPE).and_then(|v| v.to_str().ok())
    });
    let media_type = declared
        .and_then(MediaType::parse)
        .ok_or_else(|| WireError::new(ErrorCode::BadMedia, "media type must be image/png or image/jpeg"))?;
    let hub2 = hub.clone();
    tokio::task::spawn_blocking(move || hub2.upload(&token, &bytes, media_type))
        .await
        .map_err(|e| WireError::new(ErrorCode::Internal, e.to_string()))?
        .map(Json)
}

/// Bodies past this are cut off without draining.
const DRAIN_LIMIT: usize = 64 * 1024 * 1024;

/// Reads at most `cap` bytes. Oversized bodies are drained, up to a limit,
/// so the client receives the error rather than a reset connection.
async fn read_capped(body: Body, cap: usize) -> Result<Bytes, WireError> {
    let mut stream = body.into_data_stream();
    let mut buf = Vec::new();
    let mut total = 0usize;
    while let Some(chunk) = stream.next().await {
        let chunk = chunk.map_err(|e| WireError::protocol(format!("upload interrupted: {e}")))?;
        total += chunk.len();
        if total <= cap {
            buf.extend_from_slice(&chunk);
        } else if total > DRAIN_LIMIT {
            break;
        }
    }
    if total > cap {
        return Err(WireError::new(
            ErrorCode::TooLarge,
            format!("upload of {total} bytes exceeds the {cap} byte cap"),
        ));
    }
    Ok(Bytes::from(buf))
}

async fn asset(State(hub): State<Arc<Hub>>, Path(hash): Path<String>) -> Response {
    match hub.assets.get(&hash) {
        Ok(Some(bytes)) => {
            let mime = match image::guess_format(&bytes) {
                Ok(image::ImageFormat::Jpeg) => "image/jpeg",
                Ok(image::ImageFormat::Png) => "image/png",
                _ => "application/octet-stream",
            };
            (
                [
                    (header::CONTENT_TYPE, mime),
                    (header::CACHE_CONTROL, "public, max-age=31536000, immutable"),
                ],
                bytes,
            )
                .into_response()
        }
        Ok(None) => StatusCode::NOT_FOUND.into_response(),
        Err(_) => StatusCode::INTERNAL_SERVER_ERROR.into_response(),
    }
}

async fn catalog(State(hub): State<Arc<Hub>>) -> Response {
    (
        [(header::CONTENT_TYPE, "application/json")],
        hub.engine.catalog().to_json(),
    )
        .into_response()
}
