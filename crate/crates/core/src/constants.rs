//! Closed-form invariants and thresholds: epsilon(k), rho(k), gamma(M,k),
//! the singularity-rank thresholds, the hypertangent truncation lengths and
//! the almost-equal worst-case degree tuples.

use crate::binom::binomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

/// An ordered degree tuple `2 <= d_1 <= ... <= d_k` with `sum d_i = M + k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct DegreeTuple {
    degrees: Vec<usize>,
}

impl DegreeTuple {
    pub fn new(degrees: Vec<usize>) -> crate::Result<DegreeTuple> {
        if degrees.is_empty() {
            return Err(crate::Error::Input("degree tuple must be non-empty".into()));
        }
        if degrees.iter().any(|&d| d < 2) {
            return Err(crate::Error::Input("every degree must be at least 2".into()));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(crate::Error::Input(
                "degrees must be non-decreasing".into(),
            ));
        }
        Ok(DegreeTuple { degrees })
    }

    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    /// `M = (sum d_i) - k`.
    pub fn m(&self) -> usize {
        self.degrees.iter().sum::<usize>() - self.k()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        *self.degrees.last().unwrap()
    }
}

/// Smallest `a >= 1` with `(1 + 1/k)^a >= 2`, by exact rational iteration.
/// Boundary cases (k = 8 among them) sit very close to 2, so everything is
/// exact big-fraction arithmetic.
pub fn epsilon(k: usize) -> usize {
    assert!(k >= 1, "epsilon(k) needs k >= 1");
    let ratio = BigRational::new(BigInt::from(k as u64 + 1), BigInt::from(k as u64));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut acc = ratio.clone();
    let mut a = 1;
    while acc < two {
        acc *= &ratio;
        a += 1;
    }
    a
}

/// `rho(k) = 10k^2 + 8k + 2 eps(k) + 3`, the standing lower bound on `M`.
pub fn rho(k: usize) -> usize {
    10 * k * k + 8 * k + 2 * epsilon(k) + 3
}

/// `gamma(M, k) = M - k + 5 + binomial(M - rho(k) + 2, 2)`.
pub fn gamma(m: usize, k: usize) -> crate::Result<BigInt> {
    let rho_k = rho(k);
    if m < rho_k {
        return Err(crate::Error::DimensionBelowRho { m, k, rho: rho_k });
    }
    Ok(BigInt::from((m - k + 5) as u64) + binomial((m - rho_k + 2) as i64, 2))
}

/// The equal-or-almost-equal degree tuple for `(M, k)`: with `e = M mod k`,
/// `k - e` entries of `(M-e)/k + 1` and `e` entries one higher. This is the
/// worst case for the slope-product inequalities.
pub fn almost_equal_degrees(m: usize, k: usize) -> crate::Result<DegreeTuple> {
    if k < 1 || m < k {
        return Err(crate::Error::Input(format!(
            "almost_equal_degrees needs M >= k >= 1, got M={m}, k={k}"
        )));
    }
    let e = m % k;
    let base = (m - e) / k + 1;
    let mut degrees = vec![base; k - e];
    degrees.extend(std::iter::repeat_n(base + 1, e));
    let t = DegreeTuple::new(degrees)?;
    assert_eq!(t.m(), m, "almost-equal tuple must sum to M + k");
    Ok(t)
}

/// The constants attached to a fixed codimension `k >= 3`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ThresholdSet {
    pub k: usize,
    pub epsilon: usize,
    pub rho: usize,
    /// Level of the marked complete intersection produced at a singular
    /// point of the original variety: `c_F = 4k + 2 eps(k)`.
    pub c_f: usize,
    /// Level reached after cutting down to type `2^k`: `c_T = 2k + 2 eps(k) + 4`.
    pub c_t: usize,
    /// Truncation length for the non-singular regularity condition:
    /// `m_* = k + eps(k) + 3`.
    pub m_star: usize,
    /// Rank bound of the tangent-restricted quadratic tuple:
    /// `10k^2 + 8k + 2 eps(k) + 5`.
    pub mq2_rank: usize,
}

impl ThresholdSet {
    /// Rank bound for a type-`2^l` singularity: `2l + 4k + 2 eps(k) - 1`.
    pub fn mq1_rank(&self, l: usize) -> usize {
        2 * l + 4 * self.k + 2 * self.epsilon - 1
    }

    /// Truncation length at a type-`2^l` point: `max(eps(k) + 4 - l, 0)`.
    pub fn m_star_upper(&self, l: usize) -> usize {
        (self.epsilon + 4).saturating_sub(l)
    }
}

static THRESHOLD_CACHE: LazyLock<Mutex<HashMap<usize, ThresholdSet>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// All thresholds for a given `k >= 3`, cached: every other module consults
/// these.
pub fn thresholds(k: usize) -> ThresholdSet {
    assert!(k >= 3, "threshold set is defined for k >= 3");
    let mut cache = THRESHOLD_CACHE.lock().unwrap();
    cache
        .entry(k)
        .or_insert_with(|| {
            let eps = epsilon(k);
            ThresholdSet {
                k,
                epsilon: eps,
                rho: rho(k),
                c_f: 4 * k + 2 * eps,
                c_t: 2 * k + 2 * eps + 4,
                m_star: k + eps + 3,
                mq2_rank: 10 * k * k + 8 * k + 2 * eps + 5,
            }
        })
        .clone()
}

/// Checks the remark that `eps(k) <= k - 3` for `k >= 10`. Direct
/// evaluation shows it fails at `k = 10` (eps = 8 > 7) and holds from 11 on;
/// the computed values are reported rather than assumed.
#[derive(Clone, Debug, Serialize)]
pub struct EpsilonRemark {
    pub k: usize,
    pub epsilon: usize,
    pub bound: i64,
    pub holds: bool,
}

pub fn epsilon_remark_check(k: usize) -> EpsilonRemark {
    let e = epsilon(k);
    let bound = k as i64 - 3;
    EpsilonRemark {
        k,
        epsilon: e,
        bound,
        holds: (e as i64) <= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon(1), 1);
        assert_eq!(epsilon(3), 3);
        assert_eq!(epsilon(4), 4);
        assert_eq!(epsilon(5), 4);
        assert_eq!(epsilon(8), 6);
    }

    #[test]
    fn epsilon_is_the_threshold_exponent() {
        // (1+1/k)^eps >= 2 and (1+1/k)^(eps-1) < 2, exactly, for k in [1,200]
        let two = BigRational::from_integer(BigInt::from(2));
        for k in 1..=200usize {
            let e = epsilon(k);
            let r = BigRational::new(BigInt::from(k as u64 + 1), BigInt::from(k as u64));
            let pow = |a: usize| -> BigRational {
                let mut acc = BigRational::one();
                for _ in 0..a {
                    acc *= &r;
                }
                acc
            };
            assert!(pow(e) >= two, "k={k}");
            if e > 0 {
                assert!(pow(e - 1) < two, "k={k}");
            }
        }
    }

    #[test]
    fn k3_thresholds() {
        let t = thresholds(3);
        assert_eq!(t.epsilon, 3);
        assert_eq!(t.rho, 123);
        assert_eq!(t.c_f, 18);
        assert_eq!(t.c_t, 16);
        assert_eq!(t.m_star, 9);
        assert_eq!(t.mq2_rank, 125);
        assert_eq!(t.mq1_rank(1), 19);
        assert_eq!(t.m_star_upper(2), 5);
        assert_eq!(t.m_star_upper(10), 0);
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(123, 3).unwrap(), BigInt::from(126));
        assert_eq!(gamma(124, 3).unwrap(), BigInt::from(129));
        match gamma(122, 3) {
            Err(crate::Error::DimensionBelowRho { rho: 123, .. }) => {}
            other => panic!("expected below-rho error, got {other:?}"),
        }
    }

    #[test]
    fn almost_equal_tuples() {
        assert_eq!(
            almost_equal_degrees(96, 3).unwrap().degrees(),
            &[33, 33, 33]
        );
        assert_eq!(
            almost_equal_degrees(128, 3).unwrap().degrees(),
            &[43, 44, 44]
        );
        for k in 1..=7 {
            assert_eq!(almost_equal_degrees(k, k).unwrap().degrees(), vec![2; k]);
        }
        // non-decreasing and sums to M + k on a sweep
        for k in 1..=6usize {
            for m in k..200 {
                let t = almost_equal_degrees(m, k).unwrap();
                assert_eq!(t.m(), m);
                assert!(t.degrees().windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn cf_minus_cut_chain_stays_above_ct() {
        // c_F - 2(k - l) >= c_T for all l >= 2, k in [3, 30]
        for k in 3..=30usize {
            let t = thresholds(k);
            for l in 2..=k {
                assert!(t.c_f - 2 * (k - l) >= t.c_t, "k={k}, l={l}");
            }
        }
    }

    #[test]
    fn mq2_rank_survives_epsilon_cuts() {
        // mq2_rank - 2 eps >= 10k^2 + 8k + 5 (in fact with equality)
        for k in 3..=30usize {
            let t = thresholds(k);
            assert!(t.mq2_rank - 2 * t.epsilon >= 10 * k * k + 8 * k + 5);
            assert_eq!(t.mq2_rank - 2 * t.epsilon, 10 * k * k + 8 * k + 5);
        }
    }

    #[test]
    fn epsilon_remark_fails_exactly_at_ten() {
        assert!(!epsilon_remark_check(10).holds);
        assert_eq!(epsilon_remark_check(10).epsilon, 8);
        for k in 11..=200 {
            assert!(epsilon_remark_check(k).holds, "k={k}");
        }
    }

    #[test]
    fn gamma_at_rho_has_trivial_binomial() {
        for k in 3..=8 {
            let r = rho(k);
            let g = gamma(r, k).unwrap();
            assert_eq!(g, BigInt::from((r - k + 5) as u64) + 1);
            assert!(!g.is_zero());
        }
    }

    #[test]
    fn degree_tuple_validation() {
        assert!(DegreeTuple::new(vec![]).is_err());
        assert!(DegreeTuple::new(vec![1, 2]).is_err());
        assert!(DegreeTuple::new(vec![3, 2]).is_err());
        let t = DegreeTuple::new(vec![2, 3, 4]).unwrap();
        assert_eq!(t.k(), 3);
        assert_eq!(t.m(), 6);
    }
}
