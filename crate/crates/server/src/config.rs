use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

pub const DEFAULT_UPLOAD_CAP: usize = 8 * 1024 * 1024;
pub const DEFAULT_RETENTION: Duration = Duration::from_secs(30 * 24 * 3600);

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub bind: SocketAddr,
    pub data_dir: PathBuf,
    /// Multiplies the Illustrate schedule; 0.01 turns 18 minutes into 10.8 s.
    pub timer_scale: f64,
    pub upload_cap: usize,
    /// How long finished sessions, journals and assets are kept.
    pub retention: Duration,
    /// Period of the background timer task; `None` leaves ticking to the caller.
    pub tick_interval: Option<Duration>,
    /// Gap between `timer_sync` frames during Illustrate.
    pub sync_interval: Duration,
    /// Seeds match seeds, tokens and room codes. Unset means OS entropy.
    pub rng_seed: Option<u64>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            bind: SocketAddr::from(([127, 0, 0, 1], 8080)),
            data_dir: PathBuf::from("acg-data"),
            timer_scale: 1.0,
            upload_cap: DEFAULT_UPLOAD_CAP,
            retention: DEFAULT_RETENTION,
            tick_interval: Some(Duration::from_millis(100)),
            sync_interval: Duration::from_secs(5),
            rng_seed: None,
        }
    }
}

impl ServerConfig {
    pub fn journal_dir(&self) -> PathBuf {
        self.data_dir.join("journals")
    }

    pub fn asset_dir(&self) -> PathBuf {
        self.data_dir.join("assets")
    }
}
