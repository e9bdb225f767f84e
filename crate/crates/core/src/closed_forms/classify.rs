// Bounds are written as the inclusive ranges they classify.
#![allow(clippy::int_plus_one)]

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::params::CodeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Leader,
    NonLeader,
    /// Not covered by any classification case.
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderVerdict {
    pub value: Verdict,
    /// Case label such as `T1.3 α=2`, or `unclassified`.
    pub source: String,
}

impl LeaderVerdict {
    fn leader(source: impl Into<String>) -> Self {
        LeaderVerdict {
            value: Verdict::Leader,
            source: source.into(),
        }
    }

    fn non_leader(source: impl Into<String>) -> Self {
        LeaderVerdict {
            value: Verdict::NonLeader,
            source: source.into(),
        }
    }

    fn unclassified() -> Self {
        LeaderVerdict {
            value: Verdict::Unclassified,
            source: "unclassified".into(),
        }
    }
}

fn require_classifiable(params: &CodeParams, x: u128, upper: u128) -> Result<()> {
    let q = params.q() as u128;
    if q < 3 {
        return Err(domain("leader classification needs q >= 3"));
    }
    if x == 0 || x > upper {
        return Err(domain(format!("x = {x} must lie in [1, {upper}]")));
    }
    if x.is_multiple_of(q) {
        return Err(domain(format!("x = {x} is a multiple of q = {q}")));
    }
    Ok(())
}

/// Classifies `x` for odd `m = 2t + 1 >= 5`, `1 <= x <= 2q^{t+1} + 2q - 1`,
/// `q ∤ x`.
///
/// With `Q = q^{t+1}` and `P = q^t`: leaders on `[1, Q-q-1]`, `[Q+q+1, Q+P-2]`,
/// `[Q+αP+2, Q+(α+1)P-2]` for `α ∈ [1, q-2]` and `[Q+(q-1)P+2, 2Q-2q-1]`;
/// non-leaders at `Q+αP±1` for `α ∈ [1, q-1]` and at `βQ±γ` for `β ∈ {1, 2}`,
/// `1 <= γ <= βq-1`.
pub fn classify_leader_odd_m(params: &CodeParams, x: u128) -> Result<LeaderVerdict> {
    let m = params.m();
    if m.is_multiple_of(2) || m < 5 {
        return Err(domain(format!("odd-m classification needs odd m >= 5 (got m = {m})")));
    }
    let t = (m - 1) / 2;
    let q = params.q() as u128;
    let big = params.q_pow(t + 1)?;
    let small = params.q_pow(t)?;
    require_classifiable(params, x, 2 * big + 2 * q - 1)?;

    for beta in 1..=2u128 {
        let centre = beta * big;
        let gamma = x.abs_diff(centre);
        if gamma >= 1 && gamma < beta * q {
            return Ok(LeaderVerdict::non_leader(format!("T1.5 β={beta} γ={gamma}")));
        }
    }
    if x > big {
        let offset = x - big;
        let alpha = (offset + 1) / small;
        if (1..q).contains(&alpha) && offset.abs_diff(alpha * small) == 1 {
            return Ok(LeaderVerdict::non_leader(format!("T1.5 α={alpha}")));
        }
    }

    if x <= big - q - 1 {
        return Ok(LeaderVerdict::leader("T1.1"));
    }
    if big + q + 1 <= x && x <= big + small - 2 {
        return Ok(LeaderVerdict::leader("T1.2"));
    }
    for alpha in 1..=q.saturating_sub(2) {
        if big + alpha * small + 2 <= x && x <= big + (alpha + 1) * small - 2 {
            return Ok(LeaderVerdict::leader(format!("T1.3 α={alpha}")));
        }
    }
    if big + (q - 1) * small + 2 <= x && x <= 2 * big - 2 * q - 1 {
        return Ok(LeaderVerdict::leader("T1.4"));
    }
    Ok(LeaderVerdict::unclassified())
}

/// Classifies `x` for even `m = 2t >= 4`, `1 <= x <= 2q^t + 2`, `q ∤ x`.
///
/// Leaders on `[1, q^t - 1]` and `[q^t + 2, 2q^t - 2]`; non-leaders at
/// `q^t + 1`, `2q^t - 1`, `2q^t + 1` and `2q^t + 2`.
pub fn classify_leader_even_m(params: &CodeParams, x: u128) -> Result<LeaderVerdict> {
    let m = params.m();
    if m % 2 == 1 || m < 4 {
        return Err(domain(format!("even-m classification needs even m >= 4 (got m = {m})")));
    }
    let half = params.q_pow(m / 2)?;
    require_classifiable(params, x, 2 * half + 2)?;

    if x == half + 1 || x == 2 * half - 1 || x == 2 * half + 1 || x == 2 * half + 2 {
        return Ok(LeaderVerdict::non_leader("T4.3"));
    }
    if x < half {
        return Ok(LeaderVerdict::leader("T4.1"));
    }
    if half + 2 <= x && x <= 2 * half - 2 {
        return Ok(LeaderVerdict::leader("T4.2"));
    }
    Ok(LeaderVerdict::unclassified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::is_coset_leader;

    fn p(q: u64, m: u32) -> CodeParams {
        CodeParams::new(q, m).unwrap()
    }

    #[test]
    fn odd_m_examples() {
        // m = 7: t = 3, q^{t+1} = 81.
        let a = p(3, 7);
        let v = classify_leader_odd_m(&a, 85).unwrap();
        assert_eq!((v.value, v.source.as_str()), (Verdict::Leader, "T1.2"));
        let v = classify_leader_odd_m(&a, 82).unwrap();
        assert_eq!(v.value, Verdict::NonLeader);
        assert!(v.source.starts_with("T1.5"));
        let v = classify_leader_odd_m(&a, 40).unwrap();
        assert_eq!((v.value, v.source.as_str()), (Verdict::Leader, "T1.1"));

        // m = 5: t = 2, q^{t+1} = 27.
        let b = p(3, 5);
        let v = classify_leader_odd_m(&b, 31).unwrap();
        assert_eq!((v.value, v.source.as_str()), (Verdict::Leader, "T1.2"));
        let v = classify_leader_odd_m(&b, 28).unwrap();
        assert_eq!(v.value, Verdict::NonLeader);
        let v = classify_leader_odd_m(&b, 40).unwrap();
        assert_eq!((v.value, v.source.as_str()), (Verdict::Leader, "T1.3 α=1"));
        let v = classify_leader_odd_m(&b, 20).unwrap();
        assert_eq!((v.value, v.source.as_str()), (Verdict::Leader, "T1.1"));
    }

    #[test]
    fn odd_m_preconditions() {
        let a = p(3, 5);
        assert!(classify_leader_odd_m(&a, 0).is_err());
        assert!(classify_leader_odd_m(&a, 27).is_err());
        // 2·27 + 6 - 1 = 59 is the last admissible x.
        assert!(classify_leader_odd_m(&a, 59).is_ok());
        assert!(classify_leader_odd_m(&a, 61).is_err());
        assert!(classify_leader_odd_m(&p(3, 4), 5).is_err());
        assert!(classify_leader_odd_m(&p(3, 3), 5).is_err());
        assert!(classify_leader_odd_m(&p(2, 5), 5).is_err());
    }

    #[test]
    fn even_m_examples() {
        let a = p(3, 4);
        let v = classify_leader_even_m(&a, 11).unwrap();
        assert_eq!((v.value, v.source.as_str()), (Verdict::Leader, "T4.2"));
        let v = classify_leader_even_m(&a, 10).unwrap();
        assert_eq!(v.value, Verdict::NonLeader);
        let v = classify_leader_even_m(&a, 8).unwrap();
        assert_eq!((v.value, v.source.as_str()), (Verdict::Leader, "T4.1"));
        assert!(classify_leader_even_m(&a, 21).is_err());
        assert!(classify_leader_even_m(&p(3, 5), 4).is_err());
    }

    #[test]
    fn verdicts_match_oracle_small() {
        for (q, m) in [(3u64, 5u32), (4, 5), (5, 5), (3, 7)] {
            let a = p(q, m);
            let t = (m - 1) / 2;
            let upper = 2 * (q as u128).pow(t + 1) + 2 * q as u128 - 1;
            for x in (1..=upper).filter(|x| x % q as u128 != 0) {
                let v = classify_leader_odd_m(&a, x).unwrap();
                let truth = is_coset_leader(&a, x).unwrap();
                match v.value {
                    Verdict::Leader => assert!(truth, "{a} x={x} {}", v.source),
                    Verdict::NonLeader => assert!(!truth, "{a} x={x} {}", v.source),
                    Verdict::Unclassified => {}
                }
            }
        }
        for (q, m) in [(3u64, 4u32), (4, 4), (5, 4), (3, 6)] {
            let a = p(q, m);
            let upper = 2 * (q as u128).pow(m / 2) + 2;
            for x in (1..=upper).filter(|x| x % q as u128 != 0) {
                let v = classify_leader_even_m(&a, x).unwrap();
                let truth = is_coset_leader(&a, x).unwrap();
                match v.value {
                    Verdict::Leader => assert!(truth, "{a} x={x}"),
                    Verdict::NonLeader => assert!(!truth, "{a} x={x}"),
                    Verdict::Unclassified => {}
                }
            }
        }
    }
}
