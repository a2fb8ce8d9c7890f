//! Plays one bot game, writes its journal as JSON, reads it back and
//! replays it to the same state hash.

use acg::core::{Engine, Journal};
use acg::sim::{play_match, BotKind, BotStrategy, RunOptions};

fn main() {
    let engine = Engine::builtin();
    let a = BotStrategy::new(BotKind::GreedyDamage, 1);
    let b = BotStrategy::new(BotKind::DefenseBiased, 2);
    let opts = RunOptions {
        keep_journals: true,
        ..RunOptions::default()
    };
    let record = play_match(&engine, &a, &b, 0, 31337, opts).expect("bots play legally");
    let journal = record.journal.expect("kept");

    let path = std::env::temp_dir().join("acg-journal.json");
    std::fs::write(&path, serde_json::to_string_pretty(&journal).unwrap()).unwrap();
    println!("{} commands written to {}", journal.len(), path.display());

    let loaded: Journal = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let state = loaded.verify(&engine).expect("journal replays");
    println!("result      {:?}", state.result);
    println!("final hash  {}", state.state_hash());
    assert_eq!(state.state_hash(), record.final_hash);

    // Tampering with a recorded hash is caught.
    let mut forged = loaded;
    forged.entries[3].state_hash = "0".repeat(64);
    println!("forged entry: {}", forged.verify(&engine).unwrap_err());
}
