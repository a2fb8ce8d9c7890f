//! Counter-based random stream.
//!
//! Draw `i` of a stream is a pure function of `(seed, i)`: the SplitMix64
//! finalizer applied to `seed + (i + 1) * φ`. A match only has to persist its
//! seed and a cursor to resume the stream exactly.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Draws at or above this value are rejected so `draw % 10` is unbiased.
/// `u64::MAX % 10 == 5`, so the accepted range holds `2^64 - 6` values, a
/// multiple of ten.
const D10_LIMIT: u64 = u64::MAX - (u64::MAX % 10);

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Raw 64-bit draw at position `cursor`.
#[inline]
pub fn draw_at(seed: u64, cursor: u64) -> u64 {
    mix(seed.wrapping_add(cursor.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// A cursor into the seeded stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiceStream {
    seed: u64,
    cursor: u64,
}

impl DiceStream {
    pub fn new(seed: u64, cursor: u64) -> Self {
        Self { seed, cursor }
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = draw_at(self.seed, self.cursor);
        self.cursor += 1;
        v
    }

    /// A fair ten-sided die, faces `1..=10`.
    pub fn d10(&mut self) -> u8 {
        loop {
            let v = self.next_u64();
            if v < D10_LIMIT {
                return 1 + (v % 10) as u8;
            }
        }
    }
}

/// A Dodge or Reflect succeeds when the face lands inside its window.
#[inline]
pub fn window_succeeds(face: u8, window: u8) -> bool {
    face <= window
}
