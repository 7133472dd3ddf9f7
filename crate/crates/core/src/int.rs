//! Small helpers for arbitrary-precision integers.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

/// Natural logarithm of `|x|`, accurate to well below 1e-12 relative error.
///
/// Large values are split as `m * 2^k` with a 64-bit mantissa `m`.
/// Returns `-inf` for zero.
pub fn ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 64 {
        return mag.to_u64().map(|v| (v as f64).ln()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (mag >> shift).to_u64().expect("64-bit mantissa");
    (top as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

/// `log_+ x = max(ln x, 0)`, with `log_+ 0 = 0`.
pub fn log_plus(x: &BigInt) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        ln_abs(x).max(0.0)
    }
}

/// Floor division (rounds toward negative infinity).
pub fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

pub fn is_unit(x: &BigInt) -> bool {
    x.magnitude().bits() == 1 && x.sign() != Sign::NoSign
}

pub fn abs(x: &BigInt) -> BigInt {
    x.abs()
}

pub fn parse_decimal(s: &str) -> Option<BigInt> {
    s.trim().parse::<BigInt>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn log_of_small_and_huge_values() {
        assert_eq!(log_plus(&BigInt::zero()), 0.0);
        assert_eq!(log_plus(&BigInt::one()), 0.0);
        assert!((ln_abs(&BigInt::from(7)) - 7f64.ln()).abs() < 1e-15);
        let big = BigInt::from(3).pow(200);
        let expect = 200.0 * 3f64.ln();
        assert!(((ln_abs(&big) - expect) / expect).abs() < 1e-12);
        assert!((ln_abs(&-big.clone()) - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn units() {
        assert!(is_unit(&BigInt::from(1)));
        assert!(is_unit(&BigInt::from(-1)));
        assert!(!is_unit(&BigInt::from(2)));
        assert!(!is_unit(&BigInt::zero()));
    }
}
