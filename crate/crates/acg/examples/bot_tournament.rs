//! Round robin between the three bots, each pairing from both seats.
//!
//!     cargo run --release --example bot_tournament -- 400

use acg::core::Engine;
use acg::sim::{run_games, BotKind, BotStrategy, RunOptions};

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400);
    let engine = Engine::builtin();
    println!("{:<16} {:<16} {:>6} {:>6} {:>6}", "A", "B", "A won", "B won", "drawn");
    for a in BotKind::ALL {
        for b in BotKind::ALL {
            let out = run_games(
                &engine,
                &BotStrategy::new(a, 1),
                &BotStrategy::new(b, 2),
                n,
                99,
                RunOptions::default(),
            )
            .expect("engine accepts bot commands");
            let r = out.report;
            assert_eq!(r.illegal_states, 0);
            println!("{:<16} {:<16} {:>6} {:>6} {:>6}", a.name(), b.name(), r.wins_a, r.wins_b, r.draws);
        }
    }
}
