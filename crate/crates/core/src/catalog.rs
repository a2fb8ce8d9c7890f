//! Static game content: character prompts, archetypes, moves and the premade
//! deck, loaded from a single JSON document (see `docs/catalog-format.md`).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::asset::{self, AssetRef};
use crate::error::{CatalogError, Violation};
use crate::ROUNDS;

/// Schema version this build reads and writes.
pub const CATALOG_VERSION: u32 = 1;

/// Illustration time per round, in seconds.
pub const DEFAULT_TIMER_SCHEDULE: [u32; 3] = [1080, 600, 420];

/// Turns a battle round may last before it is forced to a draw.
pub const DEFAULT_MAX_TURNS: u32 = 30;

/// Bytes of the image attached when a player misses the illustration deadline.
pub const PLACEHOLDER_PNG: &[u8] = include_bytes!("../assets/placeholder.png");

const BUILTIN_JSON: &str = include_str!("../assets/builtin_catalog.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterPrompt {
    pub id: String,
    pub name: String,
    pub description: String,
    #[serde(default)]
    pub keywords: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Attack,
    Dodge,
    Reflect,
}

impl MoveKind {
    pub fn is_defense(self) -> bool {
        !matches!(self, MoveKind::Attack)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSpec {
    pub id: String,
    pub display_name: String,
    pub kind: MoveKind,
    /// Damage for attacks; zero for defensive moves.
    pub magnitude: u32,
    /// Defensive moves succeed when a d10 shows a face at or below this.
    /// Zero for attacks, which always land.
    pub dice_window: u8,
    pub activation_round: u8,
    pub effect_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Archetype {
    pub id: String,
    pub name: String,
    pub base_hp: u32,
    pub move_pool: Vec<String>,
}

/// A premade card's move together with the round it unlocks in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremadeMove {
    pub move_id: String,
    pub activation_round: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremadeCard {
    pub id: String,
    pub name: String,
    pub max_hp: u32,
    pub moves: Vec<PremadeMove>,
    /// Relative path or content hash of the card art.
    pub cover: String,
    pub illustrator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub prompts: Vec<CharacterPrompt>,
    pub archetypes: Vec<Archetype>,
    pub moves: Vec<MoveSpec>,
    pub premade_cards: Vec<PremadeCard>,
    pub placeholder_asset: AssetRef,
    #[serde(default = "default_timer_schedule")]
    pub timer_schedule: [u32; 3],
    #[serde(default = "default_max_turns")]
    pub max_turns_per_round: u32,
}

fn default_timer_schedule() -> [u32; 3] {
    DEFAULT_TIMER_SCHEDULE
}

fn default_max_turns() -> u32 {
    DEFAULT_MAX_TURNS
}

impl Catalog {
    pub fn prompt(&self, id: &str) -> Option<&CharacterPrompt> {
        self.prompts.iter().find(|p| p.id == id)
    }

    pub fn archetype(&self, id: &str) -> Option<&Archetype> {
        self.archetypes.iter().find(|a| a.id == id)
    }

    pub fn move_spec(&self, id: &str) -> Option<&MoveSpec> {
        self.moves.iter().find(|m| m.id == id)
    }

    pub fn premade(&self, id: &str) -> Option<&PremadeCard> {
        self.premade_cards.iter().find(|c| c.id == id)
    }

    /// Pretty-printed JSON in the catalog file format.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }

    /// SHA-256 over the compact canonical encoding.
    pub fn digest(&self) -> String {
        asset::sha256_hex(&serde_json::to_vec(self).expect("catalog serializes"))
    }
}

/// Parses, resolves and validates a catalog document.
pub fn load_catalog(bytes: &[u8]) -> Result<Catalog, CatalogError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
        CatalogError::Parse {
            line,
            message: format!("invalid UTF-8: {e}"),
        }
    })?;
    let catalog: Catalog = serde_json::from_str(text).map_err(|e| CatalogError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if let Some(id) = first_dangling_reference(&catalog) {
        return Err(CatalogError::UnknownContent(id));
    }
    let violations = validate_catalog(&catalog);
    if !violations.is_empty() {
        return Err(CatalogError::Validation(violations));
    }
    Ok(catalog)
}

/// The catalog embedded in the build.
pub fn builtin_catalog() -> Catalog {
    load_catalog(BUILTIN_JSON.as_bytes()).expect("built-in catalog is valid")
}

pub fn builtin_catalog_json() -> &'static str {
    BUILTIN_JSON
}

fn first_dangling_reference(catalog: &Catalog) -> Option<String> {
    let pool_refs = catalog.archetypes.iter().flat_map(|a| a.move_pool.iter());
    let premade_refs = catalog
        .premade_cards
        .iter()
        .flat_map(|c| c.moves.iter().map(|m| &m.move_id));
    pool_refs
        .chain(premade_refs)
        .find(|id| catalog.move_spec(id).is_none())
        .cloned()
}

/// Every broken constraint in `catalog`; empty when it is playable.
pub fn validate_catalog(catalog: &Catalog) -> Vec<Violation> {
    let mut out = Vec::new();

    if catalog.version != CATALOG_VERSION {
        out.push(Violation::new(
            "version",
            format!("unsupported version {} (expected {CATALOG_VERSION})", catalog.version),
        ));
    }

    check_unique(&mut out, "prompts", catalog.prompts.iter().map(|p| p.id.as_str()));
    check_unique(&mut out, "archetypes", catalog.archetypes.iter().map(|a| a.id.as_str()));
    check_unique(&mut out, "moves", catalog.moves.iter().map(|m| m.id.as_str()));
    check_unique(
        &mut out,
        "premade_cards",
        catalog.premade_cards.iter().map(|c| c.id.as_str()),
    );

    if catalog.prompts.is_empty() {
        out.push(Violation::new("prompts", "at least one prompt is required"));
    }
    for (i, p) in catalog.prompts.iter().enumerate() {
        if p.name.trim().is_empty() {
            out.push(Violation::new(format!("prompts[{i}].name"), "must not be empty"));
        }
        if p.description.trim().is_empty() {
            out.push(Violation::new(format!("prompts[{i}].description"), "must not be empty"));
        }
    }

    for (i, m) in catalog.moves.iter().enumerate() {
        let path = format!("moves[{i}] ({})", m.id);
        if !(1..=ROUNDS).contains(&m.activation_round) {
            out.push(Violation::new(&path, "activation_round must be 1, 2 or 3"));
        }
        match m.kind {
            MoveKind::Attack => {
                if m.dice_window != 0 {
                    out.push(Violation::new(&path, "attacks must have dice_window 0"));
                }
                if m.magnitude == 0 {
                    out.push(Violation::new(&path, "attacks must have magnitude >= 1"));
                }
            }
            MoveKind::Dodge | MoveKind::Reflect => {
                if m.magnitude != 0 {
                    out.push(Violation::new(&path, "defensive moves must have magnitude 0"));
                }
                if !(1..=10).contains(&m.dice_window) {
                    out.push(Violation::new(&path, "defensive dice_window must be in 1..=10"));
                }
            }
        }
    }

    if catalog.archetypes.is_empty() {
        out.push(Violation::new("archetypes", "at least one archetype is required"));
    }
    for (i, a) in catalog.archetypes.iter().enumerate() {
        let path = format!("archetypes[{i}] ({})", a.id);
        if a.base_hp == 0 {
            out.push(Violation::new(&path, "base_hp must be >= 1"));
        }
        if a.move_pool.len() < 4 {
            out.push(Violation::new(&path, "move_pool needs at least 4 moves"));
        }
        let distinct: BTreeSet<&str> = a.move_pool.iter().map(String::as_str).collect();
        if distinct.len() != a.move_pool.len() {
            out.push(Violation::new(&path, "move_pool contains duplicates"));
        }
        let mut earliest: Option<u8> = None;
        for id in &a.move_pool {
            match catalog.move_spec(id) {
                Some(m) => {
                    earliest = Some(earliest.map_or(m.activation_round, |r| r.min(m.activation_round)))
                }
                None => out.push(Violation::new(&path, format!("unknown move `{id}`"))),
            }
        }
        // A round-1-usable move covers every later round too.
        if earliest.map_or(true, |r| r > 1) {
            out.push(Violation::new(&path, "move_pool has no move usable in round 1"));
        }
    }

    if catalog.premade_cards.len() < 2 {
        out.push(Violation::new("premade_cards", "at least two premade cards are required"));
    }
    for (i, c) in catalog.premade_cards.iter().enumerate() {
        let path = format!("premade_cards[{i}] ({})", c.id);
        if c.max_hp == 0 {
            out.push(Violation::new(&path, "max_hp must be >= 1"));
        }
        if c.name.trim().is_empty() {
            out.push(Violation::new(&path, "name must not be empty"));
        }
        if c.moves.len() != ROUNDS as usize {
            out.push(Violation::new(&path, "premade cards need exactly 3 moves"));
        }
        let rounds: BTreeSet<u8> = c.moves.iter().map(|m| m.activation_round).collect();
        if c.moves.len() == ROUNDS as usize && rounds != BTreeSet::from([1, 2, 3]) {
            out.push(Violation::new(&path, "move activation rounds must be exactly {1, 2, 3}"));
        }
        for m in &c.moves {
            if catalog.move_spec(&m.move_id).is_none() {
                out.push(Violation::new(&path, format!("unknown move `{}`", m.move_id)));
            }
        }
    }

    if !catalog.placeholder_asset.has_valid_hash() {
        out.push(Violation::new(
            "placeholder_asset.content_hash",
            "must be 64 lowercase hex digits",
        ));
    }

    let [r1, r2, r3] = catalog.timer_schedule;
    if r1 == 0 || r2 == 0 || r3 == 0 {
        out.push(Violation::new("timer_schedule", "durations must be positive"));
    } else if !(r1 > r2 && r2 > r3) {
        out.push(Violation::new("timer_schedule", "durations must strictly decrease"));
    }
    if catalog.max_turns_per_round == 0 {
        out.push(Violation::new("max_turns_per_round", "must be >= 1"));
    }

    out
}

fn check_unique<'a>(out: &mut Vec<Violation>, section: &str, ids: impl Iterator<Item = &'a str>) {
    let mut seen = BTreeSet::new();
    for id in ids {
        if id.is_empty() {
            out.push(Violation::new(section, "empty id"));
        } else if !seen.insert(id) {
            out.push(Violation::new(section, format!("duplicate id `{id}`")));
        }
    }
}

/// Content-volume floor for the shipped catalog: 10 prompts, 5 archetypes,
/// 4 moves per archetype pool, 8 premade cards.
pub fn check_content_scale(catalog: &Catalog) -> Vec<Violation> {
    let mut out = Vec::new();
    if catalog.prompts.len() < 10 {
        out.push(Violation::new("prompts", format!("{} < 10", catalog.prompts.len())));
    }
    if catalog.archetypes.len() < 5 {
        out.push(Violation::new("archetypes", format!("{} < 5", catalog.archetypes.len())));
    }
    for a in &catalog.archetypes {
        if a.move_pool.len() < 4 {
            out.push(Violation::new(
                format!("archetypes ({}).move_pool", a.id),
                format!("{} < 4", a.move_pool.len()),
            ));
        }
    }
    if catalog.premade_cards.len() < 8 {
        out.push(Violation::new(
            "premade_cards",
            format!("{} < 8", catalog.premade_cards.len()),
        ));
    }
    out
}
