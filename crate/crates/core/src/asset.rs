use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MediaType {
    Png,
    Jpeg,
}

impl MediaType {
    pub fn mime(self) -> &'static str {
        match self {
            MediaType::Png => "image/png",
            MediaType::Jpeg => "image/jpeg",
        }
    }

    /// Accepts a MIME type (`image/png`) or a bare name (`png`, `jpg`).
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
        match s.as_str() {
            "image/png" | "png" => Some(MediaType::Png),
            "image/jpeg" | "image/jpg" | "jpeg" | "jpg" => Some(MediaType::Jpeg),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            MediaType::Png => "png",
            MediaType::Jpeg => "jpg",
        }
    }
}

impl fmt::Display for MediaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Reference to an image stored by content hash. Never carries the bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AssetRef {
    /// Lowercase hex SHA-256 of the stored bytes.
    pub content_hash: String,
    pub media_type: MediaType,
    pub byte_size: u64,
}

impl AssetRef {
    pub fn for_bytes(bytes: &[u8], media_type: MediaType) -> Self {
        Self {
            content_hash: sha256_hex(bytes),
            media_type,
            byte_size: bytes.len() as u64,
        }
    }

    pub fn has_valid_hash(&self) -> bool {
        is_sha256_hex(&self.content_hash)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn is_sha256_hex(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}
