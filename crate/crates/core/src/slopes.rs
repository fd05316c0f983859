//! Hypertangent slope sequences and the truncated-product inequalities.
//!
//! Each defining polynomial of degree `d_i` contributes, for every level
//! `j` in `[2, d_i - 1]`, one divisor of slope `(j+1)/j`. The full product
//! of slopes telescopes to `(prod d_i) / 2^k`; the certification questions
//! are about the product of the last few slopes, which is maximal on
//! equal-or-almost-equal degree tuples.

use crate::constants::{almost_equal_degrees, thresholds, DegreeTuple};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

/// One slope entry: level `j`, the index of the polynomial it comes from,
/// and the value `(j+1)/j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeEntry {
    pub level: usize,
    pub source: usize,
    pub slope: BigRational,
}

/// The ordered slope sequence of a degree tuple, grouped by non-decreasing
/// level, with the multiplicities `w_plus[j] = #{i : j <= d_i - 1}`.
#[derive(Clone, Debug)]
pub struct SlopeSequence {
    pub degrees: DegreeTuple,
    pub entries: Vec<SlopeEntry>,
}

impl SlopeSequence {
    pub fn new(degrees: DegreeTuple) -> SlopeSequence {
        let mut entries = Vec::new();
        let dmax = degrees.max_degree();
        for j in 2..dmax {
            for (i, &d) in degrees.degrees().iter().enumerate() {
                if j < d {
                    entries.push(SlopeEntry {
                        level: j,
                        source: i,
                        slope: BigRational::new(
                            BigInt::from(j as u64 + 1),
                            BigInt::from(j as u64),
                        ),
                    });
                }
            }
        }
        SlopeSequence { degrees, entries }
    }

    /// `w^+_j`: how many polynomials still contribute a slope at level `j`.
    pub fn w_plus(&self, j: usize) -> usize {
        self.degrees
            .degrees()
            .iter()
            .filter(|&&d| j <= d.saturating_sub(1))
            .count()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Product of all slopes; telescopes to `(prod d_i) / 2^k`.
    pub fn full_product(&self) -> BigRational {
        self.entries
            .iter()
            .fold(BigRational::one(), |acc, e| acc * &e.slope)
    }

    /// Product of the last `m` slopes (the highest levels); `m = 0` gives 1.
    pub fn tail_product(&self, m: usize) -> crate::Result<BigRational> {
        if m > self.entries.len() {
            return Err(crate::Error::TailTooLong {
                m,
                len: self.entries.len(),
            });
        }
        Ok(self.entries[self.entries.len() - m..]
            .iter()
            .fold(BigRational::one(), |acc, e| acc * &e.slope))
    }
}

/// The slope of the divisor skipped in the non-singular descent; the bound
/// it leaves on the right hand side is `2 / (3/2) = 4/3`.
pub fn nonsingular_skipped_slope() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(2))
}

/// Left-hand side of the non-singular tail inequality.
pub fn nonsingular_tail_lhs() -> BigRational {
    BigRational::new(BigInt::from(4), BigInt::from(3))
}

/// The slope skipped in the multi-quadratic descent; the bound it leaves is
/// `(3/2) / (4/3) = 9/8`.
pub fn multiquadratic_skipped_slope() -> BigRational {
    BigRational::new(BigInt::from(4), BigInt::from(3))
}

/// Left-hand side of the multi-quadratic tail inequality.
pub fn multiquadratic_tail_lhs() -> BigRational {
    BigRational::new(BigInt::from(9), BigInt::from(8))
}

/// Outcome of a tail-product check, with the exact witness.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeVerdict {
    /// Which inequality was evaluated.
    pub inequality: String,
    pub k: usize,
    pub m_ambient: usize,
    pub degrees: Vec<usize>,
    pub tail_length: usize,
    /// Exact tail product (the right hand side), as a string fraction.
    pub tail: String,
    /// Exact bound it is compared against.
    pub lhs: String,
    pub pass: bool,
}

fn verdict(k: usize, m: usize, seq: &SlopeSequence, tail_len: usize, lhs: BigRational) -> crate::Result<SlopeVerdict> {
    let tail = seq.tail_product(tail_len)?;
    Ok(SlopeVerdict {
        inequality: format!("{lhs} >= tail({tail_len})"),
        k,
        m_ambient: m,
        degrees: seq.degrees.degrees().to_vec(),
        tail_length: tail_len,
        tail: tail.to_string(),
        lhs: lhs.to_string(),
        pass: tail <= lhs,
    })
}

/// Certifies `4/3 >=` (product of the last `m_* = k + eps(k) + 3` slopes)
/// on the almost-equal tuple for `(k, M)`. By the worst-case reduction this
/// covers every admissible degree tuple at that `(k, M)`.
pub fn check_nonsingular_tail(k: usize, m: usize) -> crate::Result<SlopeVerdict> {
    let t = thresholds(k);
    let seq = SlopeSequence::new(almost_equal_degrees(m, k)?);
    verdict(k, m, &seq, t.m_star, nonsingular_tail_lhs())
}

/// Certifies `9/8 >=` (product of the last `m^*(l)` slopes) on the
/// almost-equal tuple; `m^*(l) = 0` passes vacuously with product 1.
pub fn check_multiquadratic_tail(k: usize, m: usize, l: usize) -> crate::Result<SlopeVerdict> {
    let t = thresholds(k);
    if l < 2 || l > k {
        return Err(crate::Error::LevelOutOfRange { l_x: l, k });
    }
    let seq = SlopeSequence::new(almost_equal_degrees(m, k)?);
    verdict(k, m, &seq, t.m_star_upper(l), multiquadratic_tail_lhs())
}

/// Enumerates every admissible degree tuple for `(M, k)`: non-decreasing,
/// entries >= 2, summing to `M + k`. Intended for small `M` only.
pub fn enumerate_degree_tuples(m: usize, k: usize) -> crate::Result<Vec<DegreeTuple>> {
    if m > 60 {
        return Err(crate::Error::DeskScaleLimit(format!(
            "tuple enumeration is capped at M <= 60, got {m}"
        )));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(out: &mut Vec<DegreeTuple>, cur: &mut Vec<usize>, k: usize, rest: usize, min: usize) {
        if cur.len() == k {
            if rest == 0 {
                out.push(DegreeTuple::new(cur.clone()).expect("valid by construction"));
            }
            return;
        }
        let slots_left = k - cur.len();
        let mut d = min;
        while d * slots_left <= rest {
            cur.push(d);
            rec(out, cur, k, rest - d, d);
            cur.pop();
            d += 1;
        }
    }
    rec(&mut out, &mut cur, k, m + k, 2);
    Ok(out)
}

/// Brute-force confirmation that the almost-equal tuple maximizes the tail
/// product over all admissible tuples at `(M, k)`.
pub fn worst_case_is_almost_equal(m: usize, k: usize, tail_len: usize) -> crate::Result<bool> {
    let ae_tail = SlopeSequence::new(almost_equal_degrees(m, k)?).tail_product(tail_len)?;
    for t in enumerate_degree_tuples(m, k)? {
        let seq = SlopeSequence::new(t);
        if tail_len > seq.len() {
            continue;
        }
        if seq.tail_product(tail_len)? > ae_tail {
            return Ok(false);
        }
    }
    Ok(true)
}
