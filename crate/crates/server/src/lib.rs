//! Authoritative match server: lobby, per-match sessions over WebSocket,
//! Illustrate deadlines, content-addressed uploads and append-only journals.
//!
//! ```no_run
//! # async fn demo() -> std::io::Result<()> {
//! use acg_server::{Server, ServerConfig};
//! let server = Server::new(acg_core::Engine::builtin(), ServerConfig::default())?;
//! let running = server.start().await?;
//! println!("listening on {}", running.ws_url());
//! running.wait().await
//! # }
//! ```

pub mod client;
pub mod clock;
pub mod config;
mod http;
pub mod hub;
pub mod protocol;
pub mod script;
pub mod storage;

use std::io;
use std::net::SocketAddr;
use std::ops::Deref;
use std::sync::Arc;

use tokio::net::TcpListener;
use tokio::sync::oneshot;
use tokio::task::JoinHandle;

pub use client::{Client, ClientError};
pub use clock::{Clock, MockClock, SystemClock};
pub use config::ServerConfig;
pub use hub::{AuditReport, GcReport, Hub, SessionInfo};
pub use protocol::{ClientMsg, Envelope, ErrorCode, ServerMsg, WireError, PROTOCOL_VERSION};

/// GC runs once per this many timer ticks.
const GC_EVERY_TICKS: u64 = 36_000;

#[derive(Clone)]
pub struct Server {
    hub: Arc<Hub>,
}

impl Deref for Server {
    type Target = Hub;

    fn deref(&self) -> &Hub {
        &self.hub
    }
}

impl Server {
    pub fn new(engine: acg_core::Engine, config: ServerConfig) -> io::Result<Self> {
        Self::with_clock(engine, config, Arc::new(SystemClock))
    }

    pub fn with_clock(engine: acg_core::Engine, config: ServerConfig, clock: Arc<dyn Clock>) -> io::Result<Self> {
        Ok(Self {
            hub: Arc::new(Hub::new(engine, config, clock)?),
        })
    }

    pub fn router(&self) -> axum::Router {
        http::router(self.hub.clone())
    }

    /// Binds the configured address and serves in the background.
    pub async fn start(&self) -> io::Result<RunningServer> {
        let listener = TcpListener::bind(self.hub.config.bind).await?;
        self.start_on(listener)
    }

    pub fn start_on(&self, listener: TcpListener) -> io::Result<RunningServer> {
        let addr = listener.local_addr()?;
        let (stop, stopped) = oneshot::channel::<()>();
        let app = self.router();
        let task = tokio::spawn(async move {
            axum::serve(listener, app)
                .with_graceful_shutdown(async {
                    let _ = stopped.await;
                })
                .await
        });
        let ticker = self.hub.config.tick_interval.map(|every| {
            let hub = self.hub.clone();
            tokio::spawn(async move {
                let mut interval = tokio::time::interval(every);
                interval.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
                let mut n = 0u64;
                loop {
                    interval.tick().await;
                    hub.tick();
                    n += 1;
                    if n % GC_EVERY_TICKS == 0 {
                        if let Err(e) = hub.gc() {
                            tracing::warn!("gc failed: {e}");
                        }
                    }
                }
            })
        });
        tracing::info!(%addr, "serving");
        Ok(RunningServer {
            addr,
            stop: Some(stop),
            task,
            ticker,
        })
    }
}

pub struct RunningServer {
    pub addr: SocketAddr,
    stop: Option<oneshot::Sender<()>>,
    task: JoinHandle<io::Result<()>>,
    ticker: Option<JoinHandle<()>>,
}

impl RunningServer {
    pub fn ws_url(&self) -> String {
        format!("ws://{}/ws", self.addr)
    }

    pub fn http_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub async fn shutdown(mut self) -> io::Result<()> {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        self.finish().await
    }

    /// Serves until the process receives Ctrl-C.
    pub async fn wait(mut self) -> io::Result<()> {
        let _ = tokio::signal::ctrl_c().await;
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        self.finish().await
    }

    async fn finish(self) -> io::Result<()> {
        if let Some(t) = &self.ticker {
            t.abort();
        }
        self.task.await.map_err(io::Error::other)?
    }
}
