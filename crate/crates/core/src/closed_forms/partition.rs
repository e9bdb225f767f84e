use super::Interval;
use crate::error::{domain, Error, Result};

/// Recursion depth beyond which `2^{t-2}` intervals are not materialized.
const MAX_T: u32 = 24;

fn overflow(what: &str) -> Error {
    Error::Overflow(what.into())
}

fn checked_pow(q: u128, e: u32) -> Result<u128> {
    q.checked_pow(e).ok_or_else(|| overflow("q power"))
}

/// Doubling step shared by both algorithms: intervals `j < len` are copied
/// shifted by the last right endpoint, then a final interval runs from
/// `a_last + b_last` to `top`.
fn grow(parts: &mut Vec<Interval>, top: u128) -> Result<()> {
    let last = *parts.last().expect("nonempty partition");
    let shift = last.b;
    let len = parts.len();
    for j in 0..len - 1 {
        let moved = parts[j].shifted(shift).ok_or_else(|| overflow("interval shift"))?;
        parts.push(moved);
    }
    let start = last.a.checked_add(last.b).ok_or_else(|| overflow("interval start"))?;
    parts.push(Interval::new(start, top)?);
    Ok(())
}

fn check_t(t: u32) -> Result<()> {
    if t < 2 {
        return Err(domain(format!("t must be at least 2 (got t = {t})")));
    }
    if t > MAX_T {
        return Err(Error::Resource {
            what: format!("2^{} intervals", t - 2),
            bound: 1 << (MAX_T - 2),
        });
    }
    Ok(())
}

/// `I^{(t)}`: `[1, q-2]` for `t = 2`, else `[1, (q-1)² q^{2t-5}]`.
pub fn ia1_span(t: u32, q: u64) -> Result<Interval> {
    check_t(t)?;
    let q = q as u128;
    if t == 2 {
        return Interval::new(1, q - 2);
    }
    let top = (q - 1)
        .pow(2)
        .checked_mul(checked_pow(q, 2 * t - 5)?)
        .ok_or_else(|| overflow("I^(t) endpoint"))?;
    Interval::new(1, top)
}

/// `J^{(t)} = [1, (q-1) q^{2(t-2)}]`.
pub fn ia2_span(t: u32, q: u64) -> Result<Interval> {
    check_t(t)?;
    let q = q as u128;
    let top = (q - 1)
        .checked_mul(checked_pow(q, 2 * (t - 2))?)
        .ok_or_else(|| overflow("J^(t) endpoint"))?;
    Interval::new(1, top)
}

/// Iterative partition of `I^{(t)}` into `2^{t-2}` intervals, odd `q`.
pub fn ia1_partition(t: u32, q: u64) -> Result<Vec<Interval>> {
    check_t(t)?;
    if q < 3 || q.is_multiple_of(2) {
        return Err(domain(format!("IA-1 needs odd q >= 3 (got q = {q})")));
    }
    let mut parts = vec![Interval::new(1, q as u128 - 2)?];
    for level in 3..=t {
        grow(&mut parts, ia1_span(level, q)?.b)?;
    }
    Ok(parts)
}

/// Iterative partition of `J^{(t)}` into `2^{t-2}` intervals, even `q`.
pub fn ia2_partition(t: u32, q: u64) -> Result<Vec<Interval>> {
    check_t(t)?;
    if q < 4 || q % 2 == 1 {
        return Err(domain(format!("IA-2 needs even q >= 4 (got q = {q})")));
    }
    let mut parts = vec![Interval::new(1, q as u128 - 1)?];
    for level in 3..=t {
        grow(&mut parts, ia2_span(level, q)?.b)?;
    }
    Ok(parts)
}

/// True when `parts` is contiguous from `span.a` to `span.b`.
pub(crate) fn tiles(parts: &[Interval], span: Interval) -> bool {
    let Some(first) = parts.first() else {
        return false;
    };
    first.a == span.a
        && parts.last().map(|p| p.b) == Some(span.b)
        && parts.windows(2).all(|w| w[1].a == w[0].b + 1)
}
