//! Throws random command sequences, legal and otherwise, at the engine.
//!
//!     cargo run --release --example fuzz_engine -- 20000 7

use acg::core::Engine;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let summary = acg::sim::fuzz(&Engine::builtin(), n, seed);
    print!("{}", summary.summary());
    for f in &summary.findings {
        println!("{}", serde_json::to_string(f).unwrap());
    }
    std::process::exit(if summary.is_clean() { 0 } else { 1 });
}
