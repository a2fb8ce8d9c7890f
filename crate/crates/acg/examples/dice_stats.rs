//! Face histogram of the seeded d10 and the success rate of every window.
//!
//!     cargo run --example dice_stats -- 100000

use acg::core::rng::{window_succeeds, DiceStream};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let mut dice = DiceStream::new(2024, 0);
    let draws: Vec<u8> = (0..n).map(|_| dice.d10()).collect();

    println!("face  freq");
    for face in 1..=10u8 {
        let k = draws.iter().filter(|&&f| f == face).count();
        println!("{face:>4}  {:.4}", k as f64 / n as f64);
    }
    println!("\nwindow  success  expected");
    for w in 1..=10u8 {
        let k = draws.iter().filter(|&&f| window_succeeds(f, w)).count();
        println!("{w:>6}  {:.4}   {:.1}", k as f64 / n as f64, w as f64 / 10.0);
    }
}
