use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{domain, Error, Result};

/// Largest rank materialized; `S^r` has `2^{r-1}` entries.
pub const MAX_SIGN_RANK: u32 = 26;

/// A ±1 sequence `(s_{L-1}, …, s_1, s_0)`, stored most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignSequence {
    pub r: u32,
    pub entries: Vec<i8>,
}

impl SignSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient `s_j` (index counted from the least significant end).
    pub fn coeff(&self, j: usize) -> i8 {
        self.entries[self.entries.len() - 1 - j]
    }

    pub fn negated(&self) -> SignSequence {
        SignSequence {
            r: self.r,
            entries: self.entries.iter().map(|&s| -s).collect(),
        }
    }
}

/// `S^1 = (1)`, `S^r = (S^{r-1}, -S^{r-1})`.
pub fn sign_sequence(r: u32) -> Result<SignSequence> {
    if r == 0 {
        return Err(domain("sign sequences start at r = 1"));
    }
    if r > MAX_SIGN_RANK {
        return Err(Error::Resource {
            what: format!("sign sequence of rank {r}"),
            bound: MAX_SIGN_RANK as u128,
        });
    }
    let mut entries = Vec::with_capacity(1 << (r - 1));
    entries.push(1i8);
    for _ in 1..r {
        let len = entries.len();
        for i in 0..len {
            entries.push(-entries[i]);
        }
    }
    Ok(SignSequence { r, entries })
}

fn shift_parts(r: u32, k: usize) -> Result<(SignSequence, bool)> {
    if r < 2 {
        return Err(domain(format!("left shifts need r >= 2 (got r = {r})")));
    }
    let s = sign_sequence(r)?;
    let len = s.len();
    if k == 0 || k >= len {
        return Err(domain(format!("shift k = {k} must lie in [1, {}]", len - 1)));
    }
    // s_{L-1-k} is entry k in most-significant-first storage.
    let positive = s.entries[k] == 1;
    Ok((s, positive))
}

/// `F^r_{(k)}`: rotate left by `k`, flipping the wrapped block when
/// `s_{L-1-k} = 1` and the kept block otherwise.
pub fn shift_f(r: u32, k: usize) -> Result<SignSequence> {
    let (s, positive) = shift_parts(r, k)?;
    let (head, tail) = s.entries.split_at(k);
    let entries = if positive {
        tail.iter().copied().chain(head.iter().map(|&v| -v)).collect()
    } else {
        tail.iter().map(|&v| -v).chain(head.iter().copied()).collect()
    };
    Ok(SignSequence { r, entries })
}

/// `H^r_{(k)}`: plain left rotation by `k`, negated as a whole when
/// `s_{L-1-k} = -1`.
pub fn shift_h(r: u32, k: usize) -> Result<SignSequence> {
    let (s, positive) = shift_parts(r, k)?;
    let sign = if positive { 1 } else { -1 };
    let (head, tail) = s.entries.split_at(k);
    let entries = tail.iter().chain(head).map(|&v| sign * v).collect();
    Ok(SignSequence { r, entries })
}

/// Lexicographic comparison from the most significant coordinate.
pub fn seq_compare(a: &SignSequence, b: &SignSequence) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(domain(format!(
            "cannot compare sequences of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .find(|(x, y)| x != y)
        .map_or(Ordering::Equal, |(x, y)| x.cmp(y)))
}
