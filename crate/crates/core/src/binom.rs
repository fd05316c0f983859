//! Big-integer binomial coefficients with the zero-outside-range convention.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serializer;

/// Serde helpers: big integers travel as decimal strings so every report
/// number is lossless.
pub fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn serialize_bigint_opt<S: Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_some(&b.to_string()),
        None => s.serialize_none(),
    }
}

pub fn serialize_bigint_arr3<S: Serializer>(
    v: &[BigInt; 3],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for b in v {
        seq.serialize_element(&b.to_string())?;
    }
    seq.end()
}

/// `binomial(a, b)` with `binomial(a, b) = 0` whenever `b < 0` or `b > a`.
///
/// The out-of-range convention matters: several codimension formulas are fed
/// arguments like `M - rho(k) + 2` that sit at the bottom of their range.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(2, 2), BigInt::from(1));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(1, 2), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(-3, 0), BigInt::zero());
        assert_eq!(binomial(7, -1), BigInt::zero());
    }

    #[test]
    fn pascal_identity() {
        for a in 0..40i64 {
            for b in 0..=a {
                assert_eq!(
                    binomial(a + 1, b + 1),
                    binomial(a, b) + binomial(a, b + 1),
                    "pascal failed at ({a},{b})"
                );
            }
        }
    }
}
