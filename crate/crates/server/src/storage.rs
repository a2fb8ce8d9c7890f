//! Content-addressed assets and per-match journal files on local disk.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, SystemTime};

use acg_core::asset::{is_sha256_hex, sha256_hex};
use acg_core::{AssetRef, Journal, JournalEntry, MediaType};
use serde::{Deserialize, Serialize};

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Writes `bytes` to `path` through a temporary file and a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".tmp-{}-{}",
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let mut f = File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

#[derive(Debug, Clone)]
pub struct AssetStore {
    dir: PathBuf,
}

impl AssetStore {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_of(&self, content_hash: &str) -> Option<PathBuf> {
        is_sha256_hex(content_hash).then(|| self.dir.join(content_hash))
    }

    /// Stores `bytes` under their hash. Storing the same bytes again is a no-op.
    pub fn put(&self, bytes: &[u8], media_type: MediaType) -> io::Result<AssetRef> {
        let asset = AssetRef::for_bytes(bytes, media_type);
        let path = self.dir.join(&asset.content_hash);
        if !path.exists() {
            write_atomic(&path, bytes)?;
        }
        Ok(asset)
    }

    pub fn get(&self, content_hash: &str) -> io::Result<Option<Vec<u8>>> {
        let Some(path) = self.path_of(content_hash) else {
            return Ok(None);
        };
        match fs::read(path) {
            Ok(b) => Ok(Some(b)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn contains(&self, content_hash: &str) -> bool {
        self.path_of(content_hash).is_some_and(|p| p.exists())
    }

    pub fn count(&self) -> io::Result<usize> {
        Ok(fs::read_dir(&self.dir)?
            .filter_map(Result::ok)
            .filter(|e| is_sha256_hex(&e.file_name().to_string_lossy()))
            .count())
    }

    /// Removes assets last written before `cutoff`, except `keep`.
    pub fn prune(&self, cutoff: SystemTime, keep: &[&str]) -> io::Result<usize> {
        prune_dir(&self.dir, cutoff, |name| is_sha256_hex(name) && !keep.contains(&name))
    }
}

fn prune_dir(dir: &Path, cutoff: SystemTime, eligible: impl Fn(&str) -> bool) -> io::Result<usize> {
    let mut removed = 0;
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if !eligible(&name) {
            continue;
        }
        if entry.metadata()?.modified()? < cutoff {
            fs::remove_file(entry.path())?;
            removed += 1;
        }
    }
    Ok(removed)
}

/// First line of a journal file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalHeader {
    pub match_id: String,
    pub seed: u64,
    pub catalog_digest: String,
}

/// Append-only JSON-lines journal: a header, then one entry per accepted command.
#[derive(Debug)]
pub struct JournalFile {
    file: File,
    path: PathBuf,
}

impl JournalFile {
    pub fn create(dir: &Path, header: &JournalHeader) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.jsonl", header.match_id));
        let mut file = OpenOptions::new().create(true).truncate(true).write(true).open(&path)?;
        writeln!(file, "{}", serde_json::to_string(header).map_err(io::Error::other)?)?;
        Ok(Self { file, path })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, entry: &JournalEntry) -> io::Result<()> {
        let line = serde_json::to_string(entry).map_err(io::Error::other)?;
        writeln!(self.file, "{line}")?;
        self.file.flush()
    }
}

/// Reads a journal file written by [`JournalFile`].
pub fn read_journal(path: &Path) -> io::Result<(JournalHeader, Journal)> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let bad = |e: serde_json::Error| io::Error::new(io::ErrorKind::InvalidData, e);
    let header: JournalHeader = match lines.next() {
        Some(l) => serde_json::from_str(&l?).map_err(bad)?,
        None => return Err(io::Error::new(io::ErrorKind::InvalidData, "empty journal")),
    };
    let mut entries = Vec::new();
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            entries.push(serde_json::from_str(&line).map_err(bad)?);
        }
    }
    let journal = Journal {
        seed: header.seed,
        catalog_digest: header.catalog_digest.clone(),
        entries,
    };
    Ok((header, journal))
}

/// Removes journal files last written before `cutoff`.
pub fn prune_journals(dir: &Path, cutoff: SystemTime) -> io::Result<usize> {
    if !dir.exists() {
        return Ok(0);
    }
    prune_dir(dir, cutoff, |n| n.ends_with(".jsonl"))
}

pub fn system_time_from_ms(ms: u64) -> SystemTime {
    SystemTime::UNIX_EPOCH + Duration::from_millis(ms)
}

/// Hex digest helper re-exported for callers checking stored bytes.
pub fn content_hash(bytes: &[u8]) -> String {
    sha256_hex(bytes)
}
