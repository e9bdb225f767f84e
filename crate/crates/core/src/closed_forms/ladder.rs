use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::phi::{phi, phi_prime};
use crate::error::{domain, Error, Result};
use crate::params::CodeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LadderCase {
    OddMOddQ,
    OddMEvenQ,
    EvenMOddQ,
    EvenMEvenQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Conjectured,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderEntry {
    /// 1-based rank among the largest coset leaders.
    pub rank: usize,
    #[serde(with = "decimal")]
    pub value: BigUint,
    pub status: Status,
    /// Claimed `|C_δ|`, when one is established.
    pub size_claim: Option<u32>,
    /// Claim id the entry is checked under.
    pub claim: String,
}

// Ladder values can exceed every native width; they travel as decimal strings.
mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// The first several largest coset leaders predicted in closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaLadder {
    pub case: LadderCase,
    /// Formula branch, e.g. `m=5`, `m>=7`, `m=3`, `m=2^r r=3`, `r=2 t=1`.
    pub variant: String,
    pub entries: Vec<LadderEntry>,
}

impl DeltaLadder {
    /// Ladder values in rank order, if they all fit in u128.
    pub fn values(&self) -> Option<Vec<u128>> {
        self.entries.iter().map(|e| e.value.to_u128()).collect()
    }

    pub fn value(&self, rank: usize) -> Option<&BigUint> {
        self.entries.get(rank.checked_sub(1)?).map(|e| &e.value)
    }

    /// Number of leading entries with `status = proved`.
    pub fn proved_prefix(&self) -> usize {
        self.entries
            .iter()
            .take_while(|e| e.status == Status::Proved)
            .count()
    }
}

/// How an even `m` decomposes for the even-m ladders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvenShape {
    /// `m = 2`, handled with `r = 1`.
    Two,
    /// `m = 2^r >= 4`.
    PowerOfTwo { r: u32 },
    /// `m = 2^r t + 2^{r-1}` with `r >= 2`, `t >= 1`.
    Mixed { r: u32, t: u32 },
}

impl EvenShape {
    pub fn r(&self) -> u32 {
        match *self {
            EvenShape::Two => 1,
            EvenShape::PowerOfTwo { r } | EvenShape::Mixed { r, .. } => r,
        }
    }
}

pub fn even_m_shape(m: u32) -> Result<EvenShape> {
    if m < 2 || m % 2 == 1 {
        return Err(domain(format!("m = {m} is not an even integer >= 2")));
    }
    let v = m.trailing_zeros();
    let odd = m >> v;
    Ok(match (m, odd) {
        (2, _) => EvenShape::Two,
        (_, 1) => EvenShape::PowerOfTwo { r: v },
        _ => EvenShape::Mixed {
            r: v + 1,
            t: (odd - 1) / 2,
        },
    })
}

fn big(v: u128) -> BigUint {
    BigUint::from(v)
}

fn div_exact(num: &BigUint, den: &BigUint, formula: &str) -> Result<BigUint> {
    let (quot, rem) = num.div_rem(den);
    if !rem.is_zero() {
        return Err(Error::Divisibility {
            formula: formula.into(),
            numerator: num.to_string(),
            denominator: den.to_string(),
        });
    }
    Ok(quot)
}

fn minus(a: &BigUint, b: &BigUint, formula: &str) -> Result<BigUint> {
    if b > a {
        return Err(Error::Underflow(formula.into()));
    }
    Ok(a - b)
}

fn pow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

struct Builder {
    entries: Vec<LadderEntry>,
}

impl Builder {
    fn new() -> Self {
        Builder { entries: Vec::new() }
    }

    fn push(&mut self, value: BigUint, status: Status, size_claim: Option<u32>, claim: &str) {
        self.entries.push(LadderEntry {
            rank: self.entries.len() + 1,
            value,
            status,
            size_claim,
            claim: claim.into(),
        });
    }

    fn finish(self, case: LadderCase, variant: impl Into<String>) -> Result<DeltaLadder> {
        for w in self.entries.windows(2) {
            if w[1].value >= w[0].value {
                return Err(Error::Domain(format!(
                    "ladder not strictly decreasing at rank {}: {} then {}",
                    w[0].rank, w[0].value, w[1].value
                )));
            }
        }
        Ok(DeltaLadder {
            case,
            variant: variant.into(),
            entries: self.entries,
        })
    }
}

/// Largest-leader ladder for either parity of `m`.
pub fn delta_ladder(params: &CodeParams) -> Result<DeltaLadder> {
    if params.m_is_odd() {
        delta_ladder_odd_m(params)
    } else {
        delta_ladder_even_m(params)
    }
}

/// The six (odd `q`) or five (even `q`) largest leaders for odd `m >= 3`.
pub fn delta_ladder_odd_m(params: &CodeParams) -> Result<DeltaLadder> {
    let m = params.m();
    if m.is_multiple_of(2) {
        return Err(domain(format!(
            "m = {m} is even; use delta_ladder_even_m for even m"
        )));
    }
    let q = params.q();
    if q < 3 {
        return Err(domain("ladders need q >= 3"));
    }
    let n = params.n_big();
    let qb = big(q as u128);
    let q1 = big(q as u128 - 1);
    let q2 = &qb * &qb;
    let two_m = 2 * m;
    let variant = match m {
        3 => "m=3",
        5 => "m=5",
        _ => "m>=7",
    };
    let mut b = Builder::new();
    let n_over = div_exact(n, &(&qb + 1u32), "n/(q+1)")?;

    if params.q_is_odd() {
        let d1 = div_exact(n, &big(2), "δ1 = n/2")?;
        let d2 = div_exact(&(&n_over * &q1), &big(2), "δ2 = n/(q+1)·(q-1)/2")?;
        let d3 = minus(
            &d2,
            &div_exact(&(&d2 * 2u32 + &q1 * &q1), &q2, "(2δ2+(q-1)²)/q²")?,
            "δ3",
        )?;
        let sq = &q1 * &q1;
        let (d4, d5, d6) = match m {
            3 => {
                let d4 = minus(&d3, &big(1), "δ4 = δ3-1")?;
                let d5 = minus(&d4, &q1, "δ5 = δ4-(q-1)")?;
                let d6 = minus(&d5, &big(1), "δ6 = δ5-1")?;
                (d4, d5, d6)
            }
            5 => {
                let d4 = minus(&d3, &sq, "δ4 = δ3-(q-1)²")?;
                let d5 = minus(&d4, &q1, "δ5 = δ4-(q-1)")?;
                let d6 = minus(&d5, &big(1), "δ6 = δ5-1")?;
                (d4, d5, d6)
            }
            _ => {
                let d4 = minus(&d3, &sq, "δ4 = δ3-(q-1)²")?;
                let d5 = minus(&d4, &((&q2 - 1u32) * &sq), "δ5 = δ4-(q²-1)(q-1)²")?;
                let d6 = minus(&d5, &sq, "δ6 = δ5-(q-1)²")?;
                (d4, d5, d6)
            }
        };
        b.push(d1, Status::Proved, Some(1), "T10");
        b.push(d2, Status::Proved, Some(2), "T10");
        for d in [d3, d4, d5, d6] {
            b.push(d, Status::Proved, Some(two_m), "T10");
        }
        b.finish(LadderCase::OddMOddQ, variant)
    } else {
        let d1 = div_exact(&(&n_over * &qb), &big(2), "δ1 = n/(q+1)·q/2")?;
        let d2 = minus(
            &d1,
            &div_exact(&(&d1 * 2u32 + &q1 * &qb), &q2, "(2δ1+(q-1)q)/q²")?,
            "δ2",
        )?;
        let sizes: [u32; 5];
        let (d3, d4, d5) = match m {
            3 => {
                let d3 = minus(&d2, &(&q1 * &q1), "δ3 = δ2-(q-1)²")?;
                let d4 = minus(&d3, &big(q as u128 - 2), "δ4 = δ3-(q-2)")?;
                let d5 = minus(&d4, &big(1), "δ5 = δ4-1")?;
                sizes = [2, two_m, 2, two_m, two_m];
                (d3, d4, d5)
            }
            5 => {
                let d3 = minus(&d2, &(&qb * &q1), "δ3 = δ2-q(q-1)")?;
                let d4 = minus(&d3, &qb, "δ4 = δ3-q")?;
                let d5 = minus(&d1, &n_over, "δ5 = δ1-n/(q+1)")?;
                sizes = [2, two_m, two_m, two_m, 2];
                (d3, d4, d5)
            }
            _ => {
                let d3 = minus(&d2, &(&qb * &q1), "δ3 = δ2-q(q-1)")?;
                let d4 = minus(&d3, &(&qb * (&q2 - 1u32) * &q1), "δ4 = δ3-q(q²-1)(q-1)")?;
                let d5 = minus(&d4, &(&qb * &q1), "δ5 = δ4-q(q-1)")?;
                sizes = [2, two_m, two_m, two_m, two_m];
                (d3, d4, d5)
            }
        };
        for (d, s) in [d1, d2, d3, d4, d5].into_iter().zip(sizes) {
            b.push(d, Status::Proved, Some(s), "T16");
        }
        b.finish(LadderCase::OddMEvenQ, variant)
    }
}

/// The largest leaders for even `m >= 2`: four entries for odd `q` (two
/// proved), three for even `q` (one proved).
pub fn delta_ladder_even_m(params: &CodeParams) -> Result<DeltaLadder> {
    let m = params.m();
    if m % 2 == 1 {
        return Err(domain(format!(
            "m = {m} is odd; use delta_ladder_odd_m for odd m"
        )));
    }
    let q = params.q();
    if q < 3 {
        return Err(domain("ladders need q >= 3"));
    }
    let shape = even_m_shape(m)?;
    let n = params.n_big();
    let qb = big(q as u128);
    let q1 = big(q as u128 - 1);
    let mut b = Builder::new();

    if params.q_is_odd() {
        let f = |x: i32| phi(x, q);
        let d1 = div_exact(n, &big(2), "δ1 = n/2")?;
        let (d2, d3, d4, variant, size2) = match shape {
            EvenShape::Two => {
                let d2 = f(0)?;
                let d3 = minus(&d2, &big(1), "δ3 = δ2-1")?;
                let d4 = minus(&d2, &q1, "δ4 = δ2-(q-1)")?;
                (d2, d3, d4, "m=2".to_string(), 2 * m)
            }
            EvenShape::PowerOfTwo { r } => {
                let r = r as i32;
                let d2 = f(r - 1)?;
                let d3 = minus(&d2, &(f(r - 3)? * 2u32), "δ3 = δ2-2Φ(r-3)")?;
                let d4 = if m == 4 {
                    minus(&d3, &big(1), "δ4 = δ3-1")?
                } else {
                    let scale = pow(q, 1u64 << (r - 2));
                    minus(&d2, &(scale * f(r - 4)? * 2u32), "δ4 = δ2-2q^{2^{r-2}}Φ(r-4)")?
                };
                (d2, d3, d4, format!("m=2^r r={r}"), 2 * m)
            }
            EvenShape::Mixed { r, t } => {
                let ri = r as i32;
                let half = pow(q, 1u64 << (r - 1));
                let full = pow(q, 1u64 << r);
                let d2 = div_exact(n, &(&half + 1u32), "n/(q^{2^{r-1}}+1)")? * f(ri - 2)?;
                let step = div_exact(&(&d2 + f(ri - 1)?), &full, "(δ2+Φ(r-1))/q^{2^r}")?;
                let d3 = minus(&d2, &(step * 2u32), "δ3")?;
                let d4 = if t == 1 {
                    minus(&d3, &(&qb * &q1 * &q1), "δ4 = δ3-q(q-1)²")?
                } else {
                    minus(&d3, &(f(ri - 1)? * 2u32), "δ4 = δ3-2Φ(r-1)")?
                };
                (d2, d3, d4, format!("r={r} t={t}"), 1u32 << r)
            }
        };
        b.push(d1, Status::Proved, Some(1), "T19");
        b.push(d2, Status::Proved, Some(size2), "T19");
        b.push(d3, Status::Conjectured, None, "C20");
        b.push(d4, Status::Conjectured, None, "C20");
        b.finish(LadderCase::EvenMOddQ, variant)
    } else {
        let f = |x: i32| phi_prime(x, q);
        let (d1, d2, d3, variant) = match shape {
            EvenShape::Two => {
                let d1 = div_exact(&(&qb * &q1), &big(2), "δ1 = q(q-1)/2")?;
                let d2 = minus(&d1, &q1, "δ2 = δ1-(q-1)")?;
                let d3 = minus(&d2, &big(1), "δ3 = δ2-1")?;
                (d1, d2, d3, "m=2".to_string())
            }
            EvenShape::PowerOfTwo { r } => {
                let r = r as i32;
                let d1 = f(r - 1)?;
                let d2 = minus(&d1, &(f(r - 3)? * 2u32), "δ2 = δ1-2Φ′(r-3)")?;
                let d3 = if m == 4 {
                    minus(&d1, &(&q1 * (&qb * &qb - 1u32)), "δ3 = δ1-(q-1)(q²-1)")?
                } else {
                    let scale = pow(q, 1u64 << (r - 2));
                    minus(&d1, &(scale * f(r - 4)? * 2u32), "δ3 = δ1-2q^{2^{r-2}}Φ′(r-4)")?
                };
                (d1, d2, d3, format!("m=2^r r={r}"))
            }
            EvenShape::Mixed { r, t } => {
                let ri = r as i32;
                let half = pow(q, 1u64 << (r - 1));
                let full = pow(q, 1u64 << r);
                let d1 = div_exact(n, &(&half + 1u32), "n/(q^{2^{r-1}}+1)")? * f(ri - 2)?;
                let step = div_exact(&(&d1 + f(ri - 1)?), &full, "(δ1+Φ′(r-1))/q^{2^r}")?;
                let d2 = minus(&d1, &(step * 2u32), "δ2")?;
                let d3 = if t == 1 {
                    minus(&d2, &(&q1 * &qb * &qb), "δ3 = δ2-(q-1)q²")?
                } else {
                    minus(&d2, &(f(ri - 1)? * 2u32), "δ3 = δ2-2Φ′(r-1)")?
                };
                (d1, d2, d3, format!("r={r} t={t}"))
            }
        };
        b.push(d1, Status::Proved, None, "T24");
        b.push(d2, Status::Conjectured, None, "C25");
        b.push(d3, Status::Conjectured, None, "C25");
        b.finish(LadderCase::EvenMEvenQ, variant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(q: u64, m: u32) -> DeltaLadder {
        delta_ladder(&CodeParams::new(q, m).unwrap()).unwrap()
    }

    #[test]
    fn shapes() {
        assert_eq!(even_m_shape(2).unwrap(), EvenShape::Two);
        assert_eq!(even_m_shape(4).unwrap(), EvenShape::PowerOfTwo { r: 2 });
        assert_eq!(even_m_shape(8).unwrap(), EvenShape::PowerOfTwo { r: 3 });
        assert_eq!(even_m_shape(6).unwrap(), EvenShape::Mixed { r: 2, t: 1 });
        assert_eq!(even_m_shape(10).unwrap(), EvenShape::Mixed { r: 2, t: 2 });
        assert_eq!(even_m_shape(12).unwrap(), EvenShape::Mixed { r: 3, t: 1 });
        assert!(even_m_shape(7).is_err());
    }

    // Expected values below come from a downward brute-force leader scan.
    #[test]
    fn odd_m_values() {
        assert_eq!(ladder(3, 5).values().unwrap(), vec![122, 61, 47, 43, 41, 40]);
        assert_eq!(ladder(4, 5).values().unwrap(), vec![410, 358, 346, 342, 205]);
        assert_eq!(ladder(3, 3).values().unwrap(), vec![14, 7, 5, 4, 2, 1]);
        assert_eq!(ladder(4, 3).values().unwrap(), vec![26, 22, 13, 11, 10]);
        assert_eq!(ladder(3, 7).values().unwrap(), vec![1094, 547, 425, 421, 389, 385]);
        assert_eq!(ladder(4, 7).values().unwrap(), vec![6554, 5734, 5722, 5542, 5530]);
        let l = ladder(3, 5);
        assert_eq!(l.value(1), Some(&BigUint::from(122u32)));
        assert_eq!(l.proved_prefix(), 6);
        assert_eq!(l.case, LadderCase::OddMOddQ);
    }

    #[test]
    fn odd_m_size_claims() {
        let sizes: Vec<_> = ladder(3, 5).entries.iter().map(|e| e.size_claim).collect();
        assert_eq!(sizes, vec![Some(1), Some(2), Some(10), Some(10), Some(10), Some(10)]);
        let sizes: Vec<_> = ladder(4, 5).entries.iter().map(|e| e.size_claim).collect();
        assert_eq!(sizes, vec![Some(2), Some(10), Some(10), Some(10), Some(2)]);
        let sizes: Vec<_> = ladder(4, 3).entries.iter().map(|e| e.size_claim).collect();
        assert_eq!(sizes, vec![Some(2), Some(6), Some(2), Some(6), Some(6)]);
    }

    #[test]
    fn even_m_values() {
        assert_eq!(ladder(3, 2).values().unwrap(), vec![5, 2, 1, 0]);
        assert_eq!(ladder(5, 2).values().unwrap(), vec![13, 8, 7, 4]);
        assert_eq!(ladder(4, 2).values().unwrap(), vec![6, 3, 2]);
        assert_eq!(ladder(3, 4).values().unwrap(), vec![41, 16, 14, 13]);
        assert_eq!(ladder(3, 6).values().unwrap(), vec![365, 146, 142, 130]);
        assert_eq!(ladder(3, 8).values().unwrap(), vec![3281, 1280, 1276, 1262]);
        assert_eq!(ladder(3, 10).values().unwrap(), vec![29525, 11810, 11518, 11486]);
        assert_eq!(ladder(4, 4).values().unwrap(), vec![90, 86, 45]);
        assert_eq!(ladder(4, 6).values().unwrap(), vec![1446, 1434, 1386]);
        assert_eq!(ladder(4, 8).values().unwrap(), vec![22950, 22938, 22886]);
        let l = ladder(3, 6);
        assert_eq!(l.proved_prefix(), 2);
        assert_eq!(l.entries[2].status, Status::Conjectured);
        assert_eq!(l.entries[1].size_claim, Some(4));
        assert_eq!(ladder(3, 8).entries[1].size_claim, Some(16));
        assert_eq!(ladder(4, 6).proved_prefix(), 1);
    }

    #[test]
    fn parity_errors() {
        let odd = CodeParams::new(3, 5).unwrap();
        assert!(delta_ladder_even_m(&odd).unwrap_err().to_string().contains("delta_ladder_odd_m"));
        let even = CodeParams::new(3, 4).unwrap();
        assert!(delta_ladder_odd_m(&even).unwrap_err().to_string().contains("delta_ladder_even_m"));
        assert!(delta_ladder(&CodeParams::new(2, 5).unwrap()).is_err());
    }

    #[test]
    fn huge_m_is_exact() {
        // n has ~477 bits; only the closed form can reach it.
        let l = ladder(3, 301);
        let n = CodeParams::new(3, 301).unwrap().n_big().clone();
        assert_eq!(l.entries[0].value.clone() * 2u32, n);
        assert_eq!(l.entries.len(), 6);
        let even = ladder(5, 96);
        assert_eq!(even.variant, "r=6 t=1");
    }
}
