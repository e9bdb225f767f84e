use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::Modulus;
use crate::error::{domain, Error, Result};

/// The code length data `(q, m, n = q^m + 1)`.
///
/// `q` is validated as a prime power `p^e` and `m >= 2`. The length `n` is
/// kept exactly; when it fits in 128 bits a residue oracle is attached.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeParams {
    q: u64,
    m: u32,
    n: BigUint,
    characteristic: u64,
    exponent: u32,
    modulus: Option<Modulus>,
}

impl fmt::Debug for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodeParams(q={}, m={}, n={})", self.q, self.m, self.n)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, m={}, n={})", self.q, self.m, self.n)
    }
}

/// Splits `q` as `p^e` by trial division, or returns `None` when `q` is not a
/// prime power.
pub fn prime_power_decomposition(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    let mut found = q;
    while p.saturating_mul(p) <= q {
        if q.is_multiple_of(p) {
            found = p;
            break;
        }
        p += 1;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(found) {
        rest /= found;
        e += 1;
    }
    (rest == 1).then_some((found, e))
}

impl CodeParams {
    pub fn new(q: u64, m: u32) -> Result<Self> {
        let (characteristic, exponent) =
            prime_power_decomposition(q).ok_or_else(|| domain(format!("q must be a prime power (got q = {q})")))?;
        if m < 2 {
            return Err(domain(format!("m must be at least 2 (got m = {m})")));
        }
        let n = BigUint::from(q).pow(m) + BigUint::one();
        let modulus = n.to_u128().map(Modulus::new);
        let params = CodeParams {
            q,
            m,
            n,
            characteristic,
            exponent,
            modulus,
        };
        debug_assert!(num_integer::Integer::gcd(&params.n, &BigUint::from(q)).is_one());
        Ok(params)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Exact code length `q^m + 1`.
    pub fn n_big(&self) -> &BigUint {
        &self.n
    }

    /// Code length as a native integer, when it fits.
    pub fn n(&self) -> Option<u128> {
        self.modulus.as_ref().map(Modulus::value)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn q_is_odd(&self) -> bool {
        self.q % 2 == 1
    }

    pub fn m_is_odd(&self) -> bool {
        self.m % 2 == 1
    }

    pub(crate) fn modulus(&self) -> Result<&Modulus> {
        self.modulus
            .as_ref()
            .ok_or_else(|| Error::ModulusTooWide(self.n.to_string()))
    }

    /// Returns `n` or a typed error when `n` is wider than 128 bits.
    pub fn n_native(&self) -> Result<u128> {
        self.modulus().map(Modulus::value)
    }

    /// `q^e` as u128, with overflow reported.
    pub(crate) fn q_pow(&self, e: u32) -> Result<u128> {
        (self.q as u128)
            .checked_pow(e)
            .ok_or_else(|| Error::Overflow(format!("{}^{}", self.q, e)))
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }
}

/// Serializable view of a parameter triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsView {
    pub q: u64,
    pub m: u32,
    pub n: String,
}

impl From<&CodeParams> for ParamsView {
    fn from(p: &CodeParams) -> Self {
        ParamsView {
            q: p.q,
            m: p.m,
            n: p.n.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_decomposition(2), Some((2, 1)));
        assert_eq!(prime_power_decomposition(8), Some((2, 3)));
        assert_eq!(prime_power_decomposition(9), Some((3, 2)));
        assert_eq!(prime_power_decomposition(49), Some((7, 2)));
        assert_eq!(prime_power_decomposition(6), None);
        assert_eq!(prime_power_decomposition(12), None);
        assert_eq!(prime_power_decomposition(1), None);
        assert_eq!(prime_power_decomposition(0), None);
    }

    #[test]
    fn length_is_exact() {
        let p = CodeParams::new(3, 2).unwrap();
        assert_eq!(p.n(), Some(10));
        let p = CodeParams::new(4, 5).unwrap();
        assert_eq!(p.n(), Some(1025));
        let wide = CodeParams::new(3, 200).unwrap();
        assert_eq!(wide.n(), None);
        assert_eq!(wide.n_big(), &(BigUint::from(3u32).pow(200) + 1u32));
        assert!(matches!(wide.n_native(), Err(Error::ModulusTooWide(_))));
    }

    #[test]
    fn rejects_invalid() {
        let err = CodeParams::new(6, 2).unwrap_err();
        assert!(err.to_string().contains("q must be a prime power"));
        assert!(CodeParams::new(3, 1).is_err());
        assert!(CodeParams::new(1, 3).is_err());
    }
}
