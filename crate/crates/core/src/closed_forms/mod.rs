//! Closed-form evaluators: leader classification ranges, largest-leader
//! ladders, `Φ`/`Φ′`, the iterative interval partitions and ±1 sign
//! sequences with their left shifts.
//!
//! Every quotient is evaluated exactly; a nonzero remainder is an error,
//! never a truncation.

mod classify;
mod ladder;
pub(crate) mod partition;
mod phi;
mod sign;

use serde::{Deserialize, Serialize};

pub use classify::{classify_leader_even_m, classify_leader_odd_m, LeaderVerdict, Verdict};
pub use ladder::{
    delta_ladder, delta_ladder_even_m, delta_ladder_odd_m, even_m_shape, DeltaLadder, EvenShape,
    LadderCase, LadderEntry, Status,
};
pub use partition::{ia1_partition, ia1_span, ia2_partition, ia2_span};
pub use phi::{phi, phi_prime};
pub use sign::{seq_compare, shift_f, shift_h, sign_sequence, SignSequence, MAX_SIGN_RANK};

/// The closed integer interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub a: u128,
    pub b: u128,
}

impl Interval {
    pub fn new(a: u128, b: u128) -> crate::Result<Self> {
        if a > b {
            return Err(crate::error::domain(format!("interval [{a}, {b}] has a > b")));
        }
        Ok(Interval { a, b })
    }

    pub fn len(&self) -> u128 {
        self.b - self.a + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: u128) -> bool {
        self.a <= x && x <= self.b
    }

    /// `[a + c, b + c]`.
    pub fn shifted(&self, c: u128) -> Option<Self> {
        Some(Interval {
            a: self.a.checked_add(c)?,
            b: self.b.checked_add(c)?,
        })
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}
