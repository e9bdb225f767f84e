use num_bigint::BigUint;
use num_traits::One;

use crate::error::{domain, Result};

// scale * Π_{j=0..=x} (q^{2^j} - 1), or scale alone for x < 0.
fn telescoping(x: i32, q: u64, scale: u64) -> BigUint {
    let mut acc = BigUint::from(scale);
    if x < 0 {
        return acc;
    }
    let mut power = BigUint::from(q);
    for _ in 0..=x {
        acc *= &power - BigUint::one();
        power = &power * &power;
    }
    acc
}

/// `Φ(x, q) = (q-1)/2 · Π_{j=0..=x} (q^{2^j} - 1)`, and `(q-1)/2` for `x < 0`.
pub fn phi(x: i32, q: u64) -> Result<BigUint> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(domain(format!("Φ is defined for odd q (got q = {q}); use phi_prime")));
    }
    Ok(telescoping(x, q, (q - 1) / 2))
}

/// `Φ′(x, q) = q/2 · Π_{j=0..=x} (q^{2^j} - 1)`, and `q/2` for `x < 0`.
pub fn phi_prime(x: i32, q: u64) -> Result<BigUint> {
    if q < 2 || q % 2 == 1 {
        return Err(domain(format!("Φ′ is defined for even q (got q = {q}); use phi")));
    }
    Ok(telescoping(x, q, q / 2))
}
