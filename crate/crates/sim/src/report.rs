//! Aggregated balance statistics, rendered as CSV tables and a text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use acg_core::Player;
use serde::{Deserialize, Serialize};

use crate::runner::GameRecord;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub games: u64,
    pub wins: u64,
    pub draws: u64,
    pub losses: u64,
}

impl Tally {
    fn add(&mut self, outcome: Option<bool>) {
        self.games += 1;
        match outcome {
            Some(true) => self.wins += 1,
            Some(false) => self.losses += 1,
            None => self.draws += 1,
        }
    }

    fn rate(&self, n: u64) -> f64 {
        if self.games == 0 {
            0.0
        } else {
            n as f64 / self.games as f64
        }
    }

    pub fn win_rate(&self) -> f64 {
        self.rate(self.wins)
    }

    pub fn draw_rate(&self) -> f64 {
        self.rate(self.draws)
    }

    pub fn loss_rate(&self) -> f64 {
        self.rate(self.losses)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MoveStats {
    /// Plan entries naming this move.
    pub picks: u64,
    /// Seat-games in which the move was picked at least once.
    pub used: Tally,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub games: u64,
    pub wins_a: u64,
    pub wins_b: u64,
    pub draws: u64,
    /// Keyed by archetype id, counted once per seat that played it.
    pub archetypes: BTreeMap<String, Tally>,
    pub moves: BTreeMap<String, MoveStats>,
    /// Keyed by dice window, over seat-games that used a defensive move with it.
    pub windows: BTreeMap<u8, Tally>,
    pub rounds_played: u64,
    pub turns_played: u64,
    pub illegal_states: u64,
    pub replay_failures: u64,
}

fn seat_outcome(r: &GameRecord, seat: Player) -> Option<bool> {
    r.winner().map(|w| w == seat)
}

impl BalanceReport {
    pub fn from_records(records: &[GameRecord]) -> Self {
        let mut rep = BalanceReport::default();
        for r in records {
            rep.add(r);
        }
        rep
    }

    pub fn add(&mut self, r: &GameRecord) {
        self.games += 1;
        match r.winner() {
            Some(Player::A) => self.wins_a += 1,
            Some(Player::B) => self.wins_b += 1,
            None => self.draws += 1,
        }
        for seat in Player::BOTH {
            let i = seat.index();
            let outcome = seat_outcome(r, seat);
            self.archetypes.entry(r.archetypes[i].clone()).or_default().add(outcome);
            for (id, n) in &r.move_picks[i] {
                let m = self.moves.entry(id.clone()).or_default();
                m.picks += *n as u64;
                m.used.add(outcome);
            }
            for w in &r.windows_used[i] {
                self.windows.entry(*w).or_default().add(outcome);
            }
        }
        self.rounds_played += r.turns_per_round.len() as u64;
        self.turns_played += r.turns_per_round.iter().map(|&t| t as u64).sum::<u64>();
        self.illegal_states += r.violations.len() as u64;
        self.replay_failures += u64::from(!r.replay_ok);
    }

    /// Player A's share of decided games.
    pub fn decided_win_ratio_a(&self) -> f64 {
        let decided = self.wins_a + self.wins_b;
        if decided == 0 {
            0.5
        } else {
            self.wins_a as f64 / decided as f64
        }
    }

    pub fn avg_turns_per_round(&self) -> f64 {
        if self.rounds_played == 0 {
            0.0
        } else {
            self.turns_played as f64 / self.rounds_played as f64
        }
    }

    fn total_picks(&self) -> u64 {
        self.moves.values().map(|m| m.picks).sum()
    }

    /// Win rate over all seat-games, the baseline for move deltas.
    pub fn baseline_win_rate(&self) -> f64 {
        if self.games == 0 {
            0.0
        } else {
            (self.wins_a + self.wins_b) as f64 / (2 * self.games) as f64
        }
    }

    pub fn archetypes_csv(&self) -> String {
        let mut s = String::from("archetype,seat_games,win_rate,draw_rate,loss_rate\n");
        for (id, t) in &self.archetypes {
            let _ = writeln!(s, "{id},{},{:.4},{:.4},{:.4}", t.games, t.win_rate(), t.draw_rate(), t.loss_rate());
        }
        s
    }

    pub fn moves_csv(&self) -> String {
        let total = self.total_picks().max(1) as f64;
        let base = self.baseline_win_rate();
        let mut s = String::from("move,picks,pick_rate,seat_games_used,win_rate_when_used,win_rate_delta\n");
        for (id, m) in &self.moves {
            let _ = writeln!(
                s,
                "{id},{},{:.4},{},{:.4},{:+.4}",
                m.picks,
                m.picks as f64 / total,
                m.used.games,
                m.used.win_rate(),
                m.used.win_rate() - base
            );
        }
        s
    }

    pub fn windows_csv(&self) -> String {
        let mut s = String::from("window,seat_games,win_rate\n");
        for (w, t) in &self.windows {
            let _ = writeln!(s, "{w},{},{:.4}", t.games, t.win_rate());
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "games            {}", self.games);
        let _ = writeln!(s, "wins A / B      {} / {}", self.wins_a, self.wins_b);
        let _ = writeln!(s, "draws            {}", self.draws);
        let _ = writeln!(s, "A decided ratio  {:.4}", self.decided_win_ratio_a());
        let _ = writeln!(s, "turns per round  {:.2}", self.avg_turns_per_round());
        let _ = writeln!(s, "illegal states   {}", self.illegal_states);
        let _ = writeln!(s, "replay failures  {}", self.replay_failures);
        s
    }

    /// Writes `summary.txt`, `report.json` and the CSV tables into `dir`.
    pub fn write_dir(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.txt"), self.summary())?;
        std::fs::write(dir.join("archetypes.csv"), self.archetypes_csv())?;
        std::fs::write(dir.join("moves.csv"), self.moves_csv())?;
        std::fs::write(dir.join("windows.csv"), self.windows_csv())?;
        let json = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        std::fs::write(dir.join("report.json"), json)
    }
}

/// One line per game, for plotting outside the harness.
pub fn games_csv(records: &[GameRecord]) -> String {
    let mut s = String::from("index,seed,archetype_a,archetype_b,winner,rounds,turns,final_hash\n");
    for r in records {
        let winner = match r.winner() {
            Some(p) => p.to_string(),
            None => "draw".into(),
        };
        let turns: u32 = r.turns_per_round.iter().sum();
        let _ = writeln!(
            s,
            "{},{},{},{},{winner},{},{turns},{}",
            r.index,
            r.seed,
            r.archetypes[0],
            r.archetypes[1],
            r.rounds.len(),
            r.final_hash
        );
    }
    s
}
