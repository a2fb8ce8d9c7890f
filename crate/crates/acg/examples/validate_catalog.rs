//! Loads a catalog file (or the built-in one) and lists every violation.
//!
//!     cargo run --example validate_catalog -- path/to/catalog.json

use acg::core::catalog::{builtin_catalog_json, check_content_scale, load_catalog, validate_catalog};

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).expect("readable catalog"),
        None => builtin_catalog_json().to_string(),
    };
    report("as given", &text);

    // The same document with a duplicated move id and a window out of range.
    let mut doc: serde_json::Value = serde_json::from_str(&text).expect("json");
    let moves = doc["moves"].as_array_mut().expect("moves list");
    let first = moves[0].clone();
    moves.push(first);
    if let Some(m) = moves.iter_mut().find(|m| m["dice_window"].as_u64().unwrap_or(0) > 0) {
        m["dice_window"] = 12.into();
    }
    report("broken copy", &doc.to_string());
}

fn report(label: &str, text: &str) {
    println!("== {label}");
    match load_catalog(text.as_bytes()) {
        Ok(c) => {
            println!("loads; digest {}", c.digest());
            let scale = check_content_scale(&c);
            println!("{} scale findings", scale.len());
        }
        Err(e) => {
            println!("rejected: {e}");
            if let Ok(c) = serde_json::from_str(text) {
                for v in validate_catalog(&c) {
                    println!("  {v}");
                }
            }
        }
    }
}
