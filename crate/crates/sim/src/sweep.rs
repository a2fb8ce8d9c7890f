//! Defensive dice-window sensitivity.

use std::fmt::Write as _;

use acg_core::{Catalog, Engine, Player};
use serde::{Deserialize, Serialize};

use crate::bot::{BotKind, BotStrategy};
use crate::runner::{run_games, RunOptions};
use crate::SimError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub window: u8,
    pub games: u64,
    /// Games won by the defense-biased bot.
    pub wins: u64,
    pub draws: u64,
    pub win_rate: f64,
}

/// A copy of `catalog` with every Dodge and Reflect window set to `window`.
pub fn with_defense_window(catalog: &Catalog, window: u8) -> Catalog {
    let mut c = catalog.clone();
    for m in c.moves.iter_mut().filter(|m| m.kind.is_defense()) {
        m.dice_window = window;
    }
    c
}

/// Defense-biased against greedy-damage at each window. Half the games seat
/// the defensive bot as A, half as B; every window reuses the same match
/// seeds so rows differ only by the window.
pub fn window_sweep(catalog: &Catalog, windows: &[u8], n_per_value: u64, seed: u64) -> Result<Vec<SweepRow>, SimError> {
    if let Some(w) = windows.iter().find(|w| !(1..=10).contains(*w)) {
        return Err(SimError::Usage(format!("window {w} outside 1..10")));
    }
    if n_per_value == 0 {
        return Err(SimError::Usage("--games-per must be at least 1".into()));
    }
    let defense = BotStrategy::new(BotKind::DefenseBiased, seed);
    let greedy = BotStrategy::new(BotKind::GreedyDamage, seed);
    let first = n_per_value.div_ceil(2);
    let second = n_per_value - first;

    let mut rows = Vec::with_capacity(windows.len());
    for &w in windows {
        let engine = Engine::new(with_defense_window(catalog, w))?;
        let mut wins = 0;
        let mut draws = 0;
        let seatings = [(Player::A, first, &defense, &greedy), (Player::B, second, &greedy, &defense)];
        for (seat, n, a, b) in seatings {
            if n == 0 {
                continue;
            }
            let out = run_games(&engine, a, b, n, seed, RunOptions::default())?;
            if out.report.illegal_states > 0 || out.report.replay_failures > 0 {
                return Err(SimError::Usage(format!("window {w}: invariant violations during sweep")));
            }
            for r in &out.records {
                match r.winner() {
                    Some(p) if p == seat => wins += 1,
                    None => draws += 1,
                    _ => {}
                }
            }
        }
        rows.push(SweepRow {
            window: w,
            games: n_per_value,
            wins,
            draws,
            win_rate: wins as f64 / n_per_value as f64,
        });
    }
    Ok(rows)
}

/// `true` when win rate never drops as the window grows.
pub fn is_non_decreasing(rows: &[SweepRow]) -> bool {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.window);
    sorted.windows(2).all(|p| p[1].win_rate >= p[0].win_rate)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("window,games,defense_wins,draws,defense_win_rate\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{:.4}", r.window, r.games, r.wins, r.draws, r.win_rate);
    }
    s
}
