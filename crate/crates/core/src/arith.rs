use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Residue arithmetic modulo `n`.
///
/// Products of two residues stay in u128 whenever `n < 2^64`; wider moduli
/// go through `BigUint` for the product only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Modulus {
    n: u128,
    native: bool,
}

impl Modulus {
    pub(crate) fn new(n: u128) -> Self {
        Modulus {
            n,
            native: n <= u64::MAX as u128,
        }
    }

    #[inline]
    pub(crate) fn value(&self) -> u128 {
        self.n
    }

    /// `a * b mod n` for `a, b < n`.
    #[inline]
    pub(crate) fn mul(&self, a: u128, b: u128) -> u128 {
        if self.native {
            (a * b) % self.n
        } else {
            let prod = BigUint::from(a) * BigUint::from(b) % BigUint::from(self.n);
            prod.to_u128().expect("residue below a 128-bit modulus")
        }
    }

    /// `n - x mod n`.
    #[inline]
    pub(crate) fn neg(&self, x: u128) -> u128 {
        if x == 0 {
            0
        } else {
            self.n - x
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn native_and_wide_agree() {
        // 3^41 + 1 > 2^64 forces the wide path.
        let n_wide = 3u128.pow(41) + 1;
        let wide = Modulus::new(n_wide);
        assert!(!wide.native);
        let a = n_wide - 7;
        let b = n_wide - 11;
        let expect = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(n_wide);
        assert_eq!(BigUint::from(wide.mul(a, b)), expect);

        let small = Modulus::new(1025);
        assert!(small.native);
        assert_eq!(small.mul(1024, 1024), 1);
        assert_eq!(small.neg(0), 0);
        assert_eq!(small.neg(1), 1024);
    }
}
