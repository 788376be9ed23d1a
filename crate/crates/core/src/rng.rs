//! Reproducible random streams.
//!
//! Every random quantity is drawn from a ChaCha8 stream identified by the
//! user seed plus a path of integers (domain tag, replicate index, site,
//! particle index, ...). ChaCha is counter based, so a stream's output does
//! not depend on which other streams were consumed or in what order, and
//! parallel execution reproduces sequential results bit for bit.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Domain tags keeping unrelated consumers on disjoint streams.
pub mod tag {
    pub const DISPLACEMENT: u64 = 1;
    pub const TAIL_MC: u64 = 2;
    pub const TAIL_RB: u64 = 3;
    pub const FROG_SITE: u64 = 4;
    pub const FROG_WALK: u64 = 5;
    pub const STABLE: u64 = 6;
    pub const SUPERADD: u64 = 7;
    pub const SYMMETRY: u64 = 8;
}

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a key path into a 64-bit ChaCha stream id.
pub fn stream_id(path: &[u64]) -> u64 {
    path.iter().fold(0x6A09_E667_F3BC_C909, |acc, &x| splitmix(acc ^ splitmix(x)))
}

/// The stream for `(seed, path)`.
pub fn stream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(path));
    rng
}

/// Uniform variate strictly inside (0, 1).
#[inline]
pub fn open01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Exponential(1) variate.
#[inline]
pub fn exp1<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    -open01(rng).ln()
}

/// Fair ±1 steps, 64 per underlying draw.
#[derive(Clone)]
pub struct Coin {
    rng: ChaCha8Rng,
    bits: u64,
    left: u32,
}

impl Coin {
    pub fn new(rng: ChaCha8Rng) -> Self {
        Self { rng, bits: 0, left: 0 }
    }

    #[inline]
    pub fn step(&mut self) -> i64 {
        if self.left == 0 {
            self.bits = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.bits & 1;
        self.bits >>= 1;
        self.left -= 1;
        (b as i64) * 2 - 1
    }

    /// Take up to `max_steps` steps at once from the buffered word.
    /// Returns `(steps, displacement)`; the caller must know that no level
    /// of interest lies within `max_steps` of the current position.
    #[inline]
    pub fn bulk(&mut self, max_steps: u32) -> (u32, i64) {
        if self.left == 0 {
            self.bits = self.rng.next_u64();
            self.left = 64;
        }
        let take = max_steps.min(self.left);
        let word = if take == 64 { self.bits } else { self.bits & ((1u64 << take) - 1) };
        self.bits = if take == 64 { 0 } else { self.bits >> take };
        self.left -= take;
        (take, 2 * word.count_ones() as i64 - take as i64)
    }
}
