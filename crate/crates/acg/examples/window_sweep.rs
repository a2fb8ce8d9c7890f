//! How the defense-biased bot fares against greedy damage as every
//! dodge/reflect window is rewritten to w.
//!
//!     cargo run --release --example window_sweep -- 300

use acg::core::catalog::builtin_catalog;
use acg::sim::sweep::{is_non_decreasing, sweep_csv};
use acg::sim::window_sweep;

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let windows: Vec<u8> = (1..=10).collect();
    let rows = window_sweep(&builtin_catalog(), &windows, n, 11).expect("valid sweep");
    print!("{}", sweep_csv(&rows));
    for r in &rows {
        println!("w={:>2} {}", r.window, "#".repeat((r.win_rate * 50.0).round() as usize));
    }
    println!("monotone: {}", is_non_decreasing(&rows));
}
