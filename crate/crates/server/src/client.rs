//! A headless client for scripted matches, tests and demos.

use std::time::Duration;

use futures_util::{SinkExt, StreamExt};
use tokio::net::TcpStream;
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{connect_async, MaybeTlsStream, WebSocketStream};

use crate::protocol::{encode, ClientMsg, Envelope, ServerMsg, PROTOCOL_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error(transparent)]
    Ws(#[from] tokio_tungstenite::tungstenite::Error),
    #[error("undecodable server frame: {0}")]
    Decode(#[from] serde_json::Error),
    #[error("connection closed")]
    Closed,
    #[error("no frame within {0:?}")]
    Timeout(Duration),
}

pub struct Client {
    ws: WebSocketStream<MaybeTlsStream<TcpStream>>,
    seq: u64,
    /// Every text frame received, verbatim and in order.
    pub transcript: Vec<String>,
    pub timeout: Duration,
}

impl Client {
    pub async fn connect(url: &str) -> Result<Self, ClientError> {
        let (ws, _) = connect_async(url).await?;
        Ok(Self {
            ws,
            seq: 0,
            transcript: Vec::new(),
            timeout: Duration::from_secs(10),
        })
    }

    /// Sends one message and returns its `seq`.
    pub async fn send(&mut self, body: ClientMsg) -> Result<u64, ClientError> {
        self.seq += 1;
        let text = encode(&Envelope {
            protocol_version: PROTOCOL_VERSION,
            seq: self.seq,
            body,
            match_id: None,
            reply_to: None,
        });
        self.send_raw(text).await?;
        Ok(self.seq)
    }

    /// Sends arbitrary text as one frame.
    pub async fn send_raw(&mut self, text: impl Into<String>) -> Result<(), ClientError> {
        self.ws.send(Message::Text(text.into().into())).await?;
        Ok(())
    }

    pub async fn recv(&mut self) -> Result<Envelope<ServerMsg>, ClientError> {
        let deadline = self.timeout;
        loop {
            let msg = tokio::time::timeout(deadline, self.ws.next())
                .await
                .map_err(|_| ClientError::Timeout(deadline))?
                .ok_or(ClientError::Closed)??;
            match msg {
                Message::Text(t) => {
                    let env = serde_json::from_str(t.as_str())?;
                    self.transcript.push(t.to_string());
                    return Ok(env);
                }
                Message::Close(_) => return Err(ClientError::Closed),
                _ => {}
            }
        }
    }

    /// Waits for a frame satisfying `pred`, returning it with everything skipped.
    pub async fn recv_until(
        &mut self,
        mut pred: impl FnMut(&Envelope<ServerMsg>) -> bool,
    ) -> Result<(Envelope<ServerMsg>, Vec<Envelope<ServerMsg>>), ClientError> {
        let mut skipped = Vec::new();
        loop {
            let env = self.recv().await?;
            if pred(&env) {
                return Ok((env, skipped));
            }
            skipped.push(env);
        }
    }

    /// Sends `body` and waits for the first frame answering it.
    pub async fn request(&mut self, body: ClientMsg) -> Result<Envelope<ServerMsg>, ClientError> {
        let seq = self.send(body).await?;
        Ok(self.recv_until(|e| e.reply_to == Some(seq)).await?.0)
    }

    /// Returns a frame if one arrives within `wait`.
    pub async fn try_recv(&mut self, wait: Duration) -> Result<Option<Envelope<ServerMsg>>, ClientError> {
        let saved = self.timeout;
        self.timeout = wait;
        let r = self.recv().await;
        self.timeout = saved;
        match r {
            Ok(e) => Ok(Some(e)),
            Err(ClientError::Timeout(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub async fn close(mut self) -> Result<(), ClientError> {
        self.ws.close(None).await?;
        Ok(())
    }
}
