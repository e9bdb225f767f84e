//! q-cyclotomic cosets modulo `n = q^m + 1`.
//!
//! Everything here is exact residue arithmetic and serves as the ground
//! truth the closed forms are checked against. Because `q^m ≡ -1 (mod n)`,
//! the orbit of `x` is `{ q^k x, n - q^k x : 0 <= k < m }`, and `x` leads its
//! coset iff `q^k x mod n >= x` and `n - (q^k x mod n) >= x` for every such
//! `k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::Modulus;
use crate::error::{domain, Error, Result};
use crate::params::CodeParams;

/// Default cap on the number of candidates `largest_leaders` may examine.
pub const DEFAULT_SCAN_BUDGET: u128 = 200_000_000;

/// Ranges wider than this never use the sieve (its bitmap is `hi` bytes).
const SIEVE_CEILING: u128 = 1 << 32;

const CHUNK: u128 = 1 << 14;

/// One q-cyclotomic coset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coset {
    pub leader: u128,
    pub size: u32,
    /// Sorted members, when materialized.
    pub elements: Option<Vec<u128>>,
}

/// The residues `q^k x mod n` for `0 <= k < m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YSequence {
    pub x: u128,
    pub values: Vec<u128>,
}

fn check_nonzero(n: u128, x: u128) -> Result<()> {
    if x == 0 || x >= n {
        return Err(domain(format!("x = {x} must lie in [1, {}]", n - 1)));
    }
    Ok(())
}

fn check_residue(n: u128, x: u128) -> Result<()> {
    if x >= n {
        return Err(domain(format!("x = {x} must lie in [0, {}]", n - 1)));
    }
    Ok(())
}

pub fn y_sequence(params: &CodeParams, x: u128) -> Result<YSequence> {
    let md = params.modulus()?;
    check_nonzero(md.value(), x)?;
    let q = params.q() as u128 % md.value();
    let mut values = Vec::with_capacity(params.m() as usize);
    let mut y = x;
    for _ in 0..params.m() {
        values.push(y);
        y = md.mul(y, q);
    }
    Ok(YSequence { x, values })
}

/// The full coset containing `x`, built from the y-sequence and its negatives.
pub fn orbit(params: &CodeParams, x: u128) -> Result<Coset> {
    let md = params.modulus()?;
    check_residue(md.value(), x)?;
    let q = params.q() as u128 % md.value();
    let mut elements = Vec::with_capacity(2 * params.m() as usize);
    let mut y = x;
    for _ in 0..params.m() {
        elements.push(y);
        elements.push(md.neg(y));
        y = md.mul(y, q);
    }
    elements.sort_unstable();
    elements.dedup();
    Ok(Coset {
        leader: elements[0],
        size: elements.len() as u32,
        elements: Some(elements),
    })
}

#[inline]
fn leads(md: &Modulus, q: u128, m: u32, x: u128) -> bool {
    let n = md.value();
    if x.is_multiple_of(q) {
        return false;
    }
    let mut y = x;
    for _ in 0..m {
        if y < x || n - y < x {
            return false;
        }
        y = md.mul(y, q);
    }
    true
}

#[inline]
fn leader_of(md: &Modulus, q: u128, m: u32, x: u128) -> u128 {
    let mut best = x.min(md.neg(x));
    let mut y = x;
    for _ in 1..m {
        y = md.mul(y, q);
        best = best.min(y).min(md.neg(y));
    }
    best
}

#[inline]
fn size_of(md: &Modulus, q: u128, m: u32, x: u128) -> u32 {
    let mut y = md.mul(x, q);
    let mut l = 1;
    while y != x {
        y = md.mul(y, q);
        l += 1;
        debug_assert!(l <= 2 * m);
    }
    l
}

/// Leader test by the y-sequence inequalities, with early exit.
///
/// Multiples of `q` are rejected immediately since `x / q` shares the coset.
pub fn is_coset_leader(params: &CodeParams, x: u128) -> Result<bool> {
    let md = params.modulus()?;
    check_nonzero(md.value(), x)?;
    Ok(leads(md, params.q() as u128, params.m(), x))
}

/// Smallest member of the coset of `x`, without materializing it.
pub fn coset_leader_of(params: &CodeParams, x: u128) -> Result<u128> {
    let md = params.modulus()?;
    check_residue(md.value(), x)?;
    Ok(leader_of(md, params.q() as u128 % md.value(), params.m(), x))
}

/// Smallest `l >= 1` with `q^l x ≡ x (mod n)`.
pub fn coset_size(params: &CodeParams, x: u128) -> Result<u32> {
    let md = params.modulus()?;
    check_residue(md.value(), x)?;
    Ok(size_of(md, params.q() as u128 % md.value(), params.m(), x))
}

fn check_range(n: u128, lo: u128, hi: u128) -> Result<()> {
    if lo == 0 || lo > hi || hi >= n {
        return Err(domain(format!(
            "range [{lo}, {hi}] must satisfy 1 <= lo <= hi <= {}",
            n - 1
        )));
    }
    Ok(())
}

/// All coset leaders in `[lo, hi]`, ascending.
pub fn leaders_in_range(params: &CodeParams, lo: u128, hi: u128) -> Result<Vec<u128>> {
    let md = params.modulus()?;
    check_range(md.value(), lo, hi)?;
    if hi - lo > md.value() / 4 && hi < SIEVE_CEILING {
        Ok(sieve_leaders(params, md, hi)
            .into_iter()
            .filter(|&(l, _)| l >= lo)
            .map(|(l, _)| l)
            .collect())
    } else {
        Ok(scan_leaders(md, params.q() as u128, params.m(), lo, hi))
    }
}

/// All coset leaders in `[1, hi]` together with their coset sizes.
pub fn leaders_with_sizes(params: &CodeParams, hi: u128) -> Result<Vec<(u128, u32)>> {
    let md = params.modulus()?;
    check_range(md.value(), 1, hi)?;
    if hi < SIEVE_CEILING {
        Ok(sieve_leaders(params, md, hi))
    } else {
        let q = params.q() as u128;
        Ok(scan_leaders(md, q, params.m(), 1, hi)
            .into_iter()
            .map(|l| (l, size_of(md, q, params.m(), l)))
            .collect())
    }
}

// Ascending sweep: the first unmarked residue of each coset is its leader.
fn sieve_leaders(params: &CodeParams, md: &Modulus, hi: u128) -> Vec<(u128, u32)> {
    let q = params.q() as u128;
    let len = hi as usize + 1;
    let mut seen = vec![false; len];
    let mut out = Vec::new();
    for x in 1..len {
        if seen[x] {
            continue;
        }
        let x = x as u128;
        let mut y = x;
        let mut size = 0u32;
        loop {
            if y <= hi {
                seen[y as usize] = true;
            }
            size += 1;
            y = md.mul(y, q);
            if y == x {
                break;
            }
        }
        out.push((x, size));
    }
    out
}

fn scan_leaders(md: &Modulus, q: u128, m: u32, lo: u128, hi: u128) -> Vec<u128> {
    let chunks = (hi - lo) / CHUNK + 1;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + CHUNK - 1).min(hi);
            (a..=b).filter(|&x| leads(md, q, m, x)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Smallest coset leader `>= from`, or `None` when every residue in
/// `[from, n-1]` lies in a coset with a smaller leader.
pub fn next_leader_from(params: &CodeParams, from: u128) -> Result<Option<u128>> {
    let md = params.modulus()?;
    check_residue(md.value(), from)?;
    let q = params.q() as u128;
    let m = params.m();
    let top = md.value() / 2;
    let batch = CHUNK * rayon::current_num_threads().max(1) as u128;
    let mut lo = from.max(1);
    while lo <= top {
        let hi = (lo + batch - 1).min(top);
        if let Some(&l) = scan_leaders(md, q, m, lo, hi).first() {
            return Ok(Some(l));
        }
        lo = hi + 1;
    }
    Ok(None)
}

/// The `count` largest leaders of nonzero cosets, descending.
///
/// Fewer are returned only when `Z_n` has fewer nonzero cosets.
pub fn largest_leaders(params: &CodeParams, count: usize) -> Result<Vec<u128>> {
    largest_leaders_within(params, count, DEFAULT_SCAN_BUDGET)
}

/// As [`largest_leaders`], examining at most `budget` candidates.
pub fn largest_leaders_within(params: &CodeParams, count: usize, budget: u128) -> Result<Vec<u128>> {
    if count == 0 {
        return Err(domain("count must be at least 1"));
    }
    let md = params.modulus()?;
    let q = params.q() as u128;
    let m = params.m();
    // Every x > n/2 has n - x < x.
    let top = md.value() / 2;
    let mut found = Vec::with_capacity(count);
    let mut examined: u128 = 0;
    let batch = CHUNK * rayon::current_num_threads().max(1) as u128;
    let mut hi = top;
    while hi >= 1 && found.len() < count {
        let lo = hi.saturating_sub(batch - 1).max(1);
        examined += hi - lo + 1;
        if examined > budget {
            return Err(Error::Resource {
                what: format!("downward leader scan for {params}"),
                bound: budget,
            });
        }
        let mut block = scan_leaders(md, q, m, lo, hi);
        block.reverse();
        found.extend(block.into_iter().take(count - found.len()));
        hi = lo - 1;
    }
    Ok(found)
}
