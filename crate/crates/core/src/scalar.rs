//! The coefficient domain: arbitrary-precision rationals and prime fields.
//!
//! Every polynomial, matrix and witness in this crate is built over
//! [`ExactScalar`]. There is no floating point anywhere: the conditions being
//! certified are algebraic equalities and inequalities of integers and ranks,
//! and several of them are tight enough that rounding would flip verdicts.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// The field a scalar lives in. `Prime(p)` requires `p` prime (checked).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    /// Constructs a prime-field descriptor, verifying primality.
    pub fn prime(p: u64) -> crate::Result<FieldKind> {
        if is_prime_u64(p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(crate::Error::Input(format!("{p} is not prime")))
        }
    }

    pub fn zero(&self) -> ExactScalar {
        match self {
            FieldKind::Rational => ExactScalar::Rat(BigRational::zero()),
            FieldKind::Prime(p) => ExactScalar::Mod { value: 0, p: *p },
        }
    }

    pub fn one(&self) -> ExactScalar {
        match self {
            FieldKind::Rational => ExactScalar::Rat(BigRational::one()),
            FieldKind::Prime(p) => ExactScalar::Mod { value: 1 % *p, p: *p },
        }
    }

    pub fn from_i64(&self, v: i64) -> ExactScalar {
        match self {
            FieldKind::Rational => ExactScalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Prime(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                ExactScalar::Mod { value: r, p: *p }
            }
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "QQ"),
            FieldKind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// An exact scalar: a reduced rational or a prime-field residue.
///
/// Mixing scalars from different fields in one arithmetic expression is a
/// bug in the caller and panics loudly; it is never resolved silently.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExactScalar {
    Rat(BigRational),
    Mod { value: u64, p: u64 },
}

impl ExactScalar {
    pub fn field(&self) -> FieldKind {
        match self {
            ExactScalar::Rat(_) => FieldKind::Rational,
            ExactScalar::Mod { p, .. } => FieldKind::Prime(*p),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar::Rat(r)
    }

    pub fn from_int(v: i64) -> Self {
        FieldKind::Rational.from_i64(v)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rat(r) => r.is_zero(),
            ExactScalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ExactScalar::Rat(r) => r.is_one(),
            ExactScalar::Mod { value, p } => *value == 1 % *p,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<ExactScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            ExactScalar::Rat(r) => ExactScalar::Rat(r.recip()),
            ExactScalar::Mod { value, p } => ExactScalar::Mod {
                value: inv_mod(*value, *p),
                p: *p,
            },
        })
    }

    pub fn pow(&self, mut e: u64) -> ExactScalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The underlying rational, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Reduces a rational scalar modulo `p`. Fails when `p` divides the
    /// denominator; prime-field scalars must already live in `GF(p)`.
    pub fn reduce_mod(&self, p: u64) -> crate::Result<ExactScalar> {
        match self {
            ExactScalar::Mod { value: _, p: q } => {
                if *q == p {
                    Ok(self.clone())
                } else {
                    Err(crate::Error::Input(format!(
                        "cannot move a GF({q}) value into GF({p})"
                    )))
                }
            }
            ExactScalar::Rat(r) => {
                let pb = BigInt::from(p);
                let num = r.numer().mod_floor_big(&pb);
                let den = r.denom().mod_floor_big(&pb);
                if den == 0 {
                    return Err(crate::Error::BadPrimeForInput { p });
                }
                Ok(ExactScalar::Mod {
                    value: mul_mod(num, inv_mod(den, p), p),
                    p,
                })
            }
        }
    }

    /// Exact-string form: `num` or `num/den` for rationals, the residue for
    /// prime-field values. Lossless by construction.
    pub fn to_exact_string(&self) -> String {
        match self {
            ExactScalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            ExactScalar::Mod { value, .. } => value.to_string(),
        }
    }

    /// Parses `num` or `num/den` into a rational scalar.
    pub fn parse_rational(s: &str) -> crate::Result<ExactScalar> {
        let s = s.trim();
        let r = match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s)
                    .map_err(|_| crate::Error::Input(format!("bad coefficient {s:?}")))?;
                BigRational::from_integer(n)
            }
            Some((n, d)) => {
                let n = BigInt::from_str(n)
                    .map_err(|_| crate::Error::Input(format!("bad numerator {n:?}")))?;
                let d = BigInt::from_str(d)
                    .map_err(|_| crate::Error::Input(format!("bad denominator {d:?}")))?;
                if d.is_zero() {
                    return Err(crate::Error::Input("zero denominator".into()));
                }
                BigRational::new(n, d)
            }
        };
        Ok(ExactScalar::Rat(r))
    }

    fn expect_same(&self, other: &ExactScalar, op: &str) {
        if self.field() != other.field() {
            panic!(
                "field mismatch in {op}: {} vs {}",
                self.field(),
                other.field()
            );
        }
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, p: &BigInt) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, p: &BigInt) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(p);
        let (_, digits) = m.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => unreachable!("residue below a u64 prime"),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

macro_rules! impl_binop {
    ($trait:ident, $m:ident, |$a:ident, $b:ident| $rat:expr, |$x:ident, $y:ident, $p:ident| $modp:expr) => {
        impl<'a, 'b> $trait<&'b ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'b ExactScalar) -> ExactScalar {
                self.expect_same(rhs, stringify!($m));
                match (self, rhs) {
                    (ExactScalar::Rat($a), ExactScalar::Rat($b)) => ExactScalar::Rat($rat),
                    (
                        ExactScalar::Mod { value: $x, p: $p },
                        ExactScalar::Mod { value: $y, .. },
                    ) => ExactScalar::Mod {
                        value: $modp,
                        p: *$p,
                    },
                    _ => unreachable!(),
                }
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| a + b, |x, y, p| add_mod(*x, *y, *p));
impl_binop!(Sub, sub, |a, b| a - b, |x, y, p| sub_mod(*x, *y, *p));
impl_binop!(Mul, mul, |a, b| a * b, |x, y, p| mul_mod(*x, *y, *p));

impl<'b> Div<&'b ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &'b ExactScalar) -> ExactScalar {
        let inv = rhs.inverse().expect("division by zero");
        self * &inv
    }
}

impl Div<ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        &self / &rhs
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match self {
            ExactScalar::Rat(r) => ExactScalar::Rat(-r),
            ExactScalar::Mod { value, p } => ExactScalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod a prime, via Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Converts a big rational to an `ExactScalar` wrapper of a `BigUint` count.
pub fn biguint_to_scalar(n: &BigUint) -> ExactScalar {
    ExactScalar::Rat(BigRational::from_integer(BigInt::from(n.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_basics() {
        let a = ExactScalar::parse_rational("3/6").unwrap();
        assert_eq!(a.to_exact_string(), "1/2");
        let b = ExactScalar::parse_rational("-2").unwrap();
        assert_eq!((&a + &b).to_exact_string(), "-3/2");
        assert_eq!((&a * &b).to_exact_string(), "-1");
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn prime_field_basics() {
        let f = FieldKind::prime(32003).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a.to_exact_string(), "32002");
        let inv = f.from_i64(7).inverse().unwrap();
        assert!((&inv * &f.from_i64(7)).is_one());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(101));
        assert!(is_prime_u64(32003));
        assert!(is_prime_u64(65537));
        assert!(!is_prime_u64(32001));
        assert!(!is_prime_u64(1));
        assert!(FieldKind::prime(32004).is_err());
    }

    #[test]
    fn reduction_to_prime_field() {
        let half = ExactScalar::parse_rational("1/2").unwrap();
        let r = half.reduce_mod(101).unwrap();
        // 2 * 51 = 102 = 1 mod 101
        assert_eq!(r.to_exact_string(), "51");
        let bad = ExactScalar::parse_rational("1/101").unwrap();
        assert!(bad.reduce_mod(101).is_err());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let a = ExactScalar::from_int(1);
        let b = FieldKind::prime(101).unwrap().from_i64(1);
        let _ = &a + &b;
    }
}
