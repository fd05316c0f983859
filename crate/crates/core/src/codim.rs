//! The codimension-of-the-complement calculus over the parameter space of
//! polynomial tuples: strata by the dimension of the span of linear parts,
//! rank-stratification bounds for tuples of quadratic forms, the
//! binomial-walk analysis of regularity failures, and the per-condition
//! verdicts against `gamma + M`.

use crate::binom::binomial;
use crate::constants::{almost_equal_degrees, epsilon, gamma, rho, DegreeTuple};
use num_bigint::BigInt;
use serde::Serialize;

/// Codimension of the stratum of tuples whose linear-part span has
/// dimension `i`: `(k - i)(M + k - i)`.
pub fn stratum_codim(k: usize, m: usize, i: usize) -> usize {
    assert!(i <= k, "span dimension cannot exceed k");
    (k - i) * (m + k - i)
}

/// Lower bound on the codimension of the locus of `e`-tuples of quadratic
/// forms in `N` variables with tuple rank at most `r`:
/// `binomial(N - r + 1, 2) - (e - 1)`, floored at zero.
pub fn rank_stratum_codim(n: usize, r: usize, e: usize) -> BigInt {
    assert!(e >= 1);
    let b = binomial(n as i64 - r as i64 + 1, 2) - BigInt::from(e as i64 - 1);
    if b < BigInt::ZERO {
        BigInt::ZERO
    } else {
        b
    }
}

/// Codimension bound for failures of the tangent-rank condition at a point
/// of type `2^l`: `-k + 1 + l(M + l) + binomial(M + l - rho(k), 2)`. The
/// stratum correction is already included.
pub fn mq2_codim_bound(k: usize, m: usize, l: usize) -> crate::Result<BigInt> {
    if l < 2 || l > k {
        return Err(crate::Error::LevelOutOfRange { l_x: l, k });
    }
    let rho_k = rho(k);
    if m < rho_k {
        return Err(crate::Error::DimensionBelowRho { m, k, rho: rho_k });
    }
    Ok(BigInt::from(1 - (k as i64))
        + BigInt::from((l * (m + l)) as u64)
        + binomial((m + l - rho_k) as i64, 2))
}

/// The minimum of `mq2_codim_bound` over `l in [2, k]`, with its argmin and
/// whether it equals `gamma + M` exactly (the binding-constant identity).
#[derive(Clone, Debug, Serialize)]
pub struct Mq2Minimum {
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub minimum: BigInt,
    pub argmin_l: usize,
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub gamma_plus_m: BigInt,
    pub equals_gamma_plus_m: bool,
}

pub fn mq2_minimum(k: usize, m: usize) -> crate::Result<Mq2Minimum> {
    let mut best: Option<(BigInt, usize)> = None;
    for l in 2..=k {
        let v = mq2_codim_bound(k, m, l)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, l));
        }
    }
    let (minimum, argmin_l) = best.expect("k >= 2");
    let gm = gamma(m, k)? + BigInt::from(m as u64);
    Ok(Mq2Minimum {
        equals_gamma_plus_m: minimum == gm,
        gamma_plus_m: gm,
        minimum,
        argmin_l,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Presentation {
    I,
    II,
}

/// One step of the binomial walk: the codimension bound for a regularity
/// failure at position `i` of the truncated sequence.
#[derive(Clone, Debug, Serialize)]
pub struct WalkStep {
    pub i: usize,
    pub degree: usize,
    pub a: i64,
    /// `B` in the active presentation.
    pub b: i64,
    /// `C = A - 2B` in the active presentation.
    pub c: i64,
    pub presentation: Presentation,
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub value: BigInt,
}

/// The walk `binomial(dim_pi - i + 1 + deg h_i, deg h_i)` over the
/// truncated component sequence, its equilibrium index, and the reduction
/// of its minimum to three closed-form candidates.
#[derive(Clone, Debug, Serialize)]
pub struct BinomialWalk {
    pub degrees: Vec<usize>,
    pub dim_pi: usize,
    pub truncation: usize,
    pub steps: Vec<WalkStep>,
    /// Last index (1-based) where presentation I has `C >= 0`; `None` when
    /// the walk starts past the equilibrium.
    pub i_star: Option<usize>,
    /// True when the equilibrium exists and lies strictly before the end.
    pub equilibrium_before_end: bool,
    #[serde(serialize_with = "crate::binom::serialize_bigint_opt")]
    pub min_value: Option<BigInt>,
    /// The three closed-form candidates: end of the degree-2 block, end of
    /// the degree-3 block, and the last step.
    #[serde(serialize_with = "crate::binom::serialize_bigint_arr3")]
    pub candidates: [BigInt; 3],
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub min_of_candidates: BigInt,
    /// Walk minimum equals the candidate minimum (asserted when the
    /// equilibrium lies before the end).
    pub min_matches_candidates: Option<bool>,
    /// Set when the degrees are not the almost-equal tuple for their
    /// `(M, k)`; the three-candidate reduction is tuned to that case.
    pub not_almost_equal_warning: bool,
}

/// Degrees of the members of the full component sequence, in order: degree
/// `j` appears `#{i : d_i >= j}` times, `j = 2, ..., d_k`.
pub fn member_degrees(degrees: &DegreeTuple) -> Vec<usize> {
    let mut out = Vec::new();
    for j in 2..=degrees.max_degree() {
        for &d in degrees.degrees() {
            if d >= j {
                out.push(j);
            }
        }
    }
    out
}

/// Builds the walk for the sequence truncated by `truncation`, on subspaces
/// of projective dimension `dim_pi`.
pub fn binomial_walk(degrees: &DegreeTuple, dim_pi: usize, truncation: usize) -> BinomialWalk {
    let k = degrees.k();
    let m = degrees.m();
    let almost_equal = almost_equal_degrees(m, k)
        .map(|ae| ae.degrees() == degrees.degrees())
        .unwrap_or(false);
    let member_deg = member_degrees(degrees);
    let steps_len = member_deg.len().saturating_sub(truncation);
    let mut steps = Vec::with_capacity(steps_len);
    let mut i_star = None;
    for (idx, &deg) in member_deg[..steps_len].iter().enumerate() {
        let i = idx + 1;
        let a = dim_pi as i64 - i as i64 + 1 + deg as i64;
        let c_i = a - 2 * deg as i64;
        let presentation = if c_i >= 0 {
            Presentation::I
        } else {
            Presentation::II
        };
        let b = match presentation {
            Presentation::I => deg as i64,
            Presentation::II => dim_pi as i64 - i as i64 + 1,
        };
        if c_i >= 0 {
            i_star = Some(i);
        }
        let value = binomial(a, deg as i64);
        debug_assert_eq!(
            value,
            binomial(a, dim_pi as i64 - i as i64 + 1),
            "the two presentations of step {i} must agree"
        );
        steps.push(WalkStep {
            i,
            degree: deg,
            a,
            b,
            c: a - 2 * b,
            presentation,
            value,
        });
    }
    let min_value = steps.iter().map(|s| s.value.clone()).min();
    let last_deg = if steps_len > 0 {
        member_deg[steps_len - 1] as i64
    } else {
        0
    };
    let candidates = [
        binomial(dim_pi as i64 + 3 - k as i64, 2),
        binomial(dim_pi as i64 + 4 - 2 * k as i64, 3),
        binomial(last_deg + 4, 4),
    ];
    let min_of_candidates = candidates.iter().min().cloned().unwrap();
    let equilibrium_before_end = i_star.is_some_and(|s| s < steps_len);
    let min_matches_candidates = if steps.is_empty() {
        None
    } else if equilibrium_before_end {
        Some(min_value.as_ref().unwrap() == &min_of_candidates)
    } else {
        None
    };
    BinomialWalk {
        degrees: degrees.degrees().to_vec(),
        dim_pi,
        truncation,
        steps,
        i_star,
        equilibrium_before_end,
        min_value,
        candidates,
        min_of_candidates,
        min_matches_candidates,
        not_almost_equal_warning: !almost_equal,
    }
}

impl BinomialWalk {
    /// Step-by-step consistency of the two-case analysis along
    /// presentation I, and strict decrease after the equilibrium.
    pub fn check_step_laws(&self) -> bool {
        for w in self.steps.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            if q.degree == p.degree {
                if q.a != p.a - 1 {
                    return false;
                }
            } else if q.degree == p.degree + 1 {
                if q.a != p.a {
                    return false;
                }
            } else {
                return false;
            }
            // in presentation I, C drops by 1 on an equal-degree step and
            // by 2 on a degree increment
            let c_p = p.a - 2 * p.degree as i64;
            let c_q = q.a - 2 * q.degree as i64;
            let drop = if q.degree == p.degree { 1 } else { 2 };
            if c_q != c_p - drop {
                return false;
            }
        }
        if let Some(star) = self.i_star {
            // strictly decreasing among the post-equilibrium steps; the
            // crossing step itself can tie when A = 2B + 1
            for w in self.steps.windows(2) {
                if w[0].i > star && !(w[1].value < w[0].value) {
                    return false;
                }
            }
        }
        true
    }
}

/// Exact integer check of the cubic inequality certifying that the final
/// walk candidate dominates the first: `M (M^2 - k^2) > 12 k^4 (M - 2k)`,
/// under the squared hypothesis `M^2 >= 12 k^4`.
#[derive(Clone, Debug, Serialize)]
pub struct CubicLemmaCheck {
    pub k: usize,
    pub m: usize,
    pub hypothesis_m_sq: bool,
    pub cubic_holds: bool,
}

pub fn lemma_cubic_check(k: usize, m: usize) -> CubicLemmaCheck {
    let mb = BigInt::from(m as u64);
    let kb = BigInt::from(k as u64);
    let lhs = &mb * (&mb * &mb - &kb * &kb);
    let rhs = BigInt::from(12) * kb.pow(4) * (BigInt::from(m as i64) - BigInt::from(2 * k as i64));
    CubicLemmaCheck {
        k,
        m,
        hypothesis_m_sq: &mb * &mb >= BigInt::from(12) * BigInt::from(k as u64).pow(4),
        cubic_holds: lhs > rhs,
    }
}

/// The irreducibility-locus bound for a tuple of forms on `P^N`:
/// `(N - e - 1)(N - e - 4)/2 + 2` (always an integer: the two factors
/// differ by 3).
pub fn irreducibility_locus_bound(n: usize, e: usize) -> BigInt {
    let a = BigInt::from(n as i64 - e as i64 - 1);
    let b = BigInt::from(n as i64 - e as i64 - 4);
    a * b / 2 + 2
}

/// The per-condition codimension verdict at `(k, M)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionVerdict {
    pub condition: String,
    /// The singularity type the worst case occurs at, when the condition
    /// ranges over types.
    pub worst_l: Option<usize>,
    /// The module bound before corrections (per subspace, per stratum).
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub module_bound: BigInt,
    /// Codimension of the stratum of linear-part spans, added.
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub stratum_correction: BigInt,
    /// Dimension of the family of subspaces quantified over, subtracted.
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub family_correction: BigInt,
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub total: BigInt,
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub required: BigInt,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodimReport {
    pub k: usize,
    pub m: usize,
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub gamma: BigInt,
    #[serde(serialize_with = "crate::binom::serialize_bigint")]
    pub gamma_plus_m: BigInt,
    pub conditions: Vec<ConditionVerdict>,
    pub all_pass: bool,
}

/// Assembles the codimension verdicts for all six conditions at `(k, M)`,
/// using almost-equal degrees for the sequence-based conditions.
pub fn condition_codim_verdict(k: usize, m: usize) -> crate::Result<CodimReport> {
    let rho_k = rho(k);
    if m < rho_k {
        return Err(crate::Error::DimensionBelowRho { m, k, rho: rho_k });
    }
    let eps = epsilon(k);
    let g = gamma(m, k)?;
    let gm = &g + BigInt::from(m as u64);
    let degrees = almost_equal_degrees(m, k)?;
    let k_ge3 = degrees.degrees().iter().filter(|&&d| d >= 3).count();
    let mut conditions = Vec::new();

    // type-2^l rank condition on the reduced tuple, no subspace family
    {
        let mut worst: Option<(BigInt, usize)> = None;
        for l in 1..=k {
            let threshold = 2 * l + 4 * k + 2 * eps - 1;
            let bound = rank_stratum_codim(m + k, threshold - 1, l);
            let total = BigInt::from(stratum_codim(k, m, k - l) as u64) + &bound;
            if worst.as_ref().is_none_or(|(w, _)| total < *w) {
                worst = Some((total, l));
            }
        }
        let (total, l) = worst.unwrap();
        let bound = rank_stratum_codim(m + k, 2 * l + 4 * k + 2 * eps - 2, l);
        conditions.push(ConditionVerdict {
            condition: "MQ1".into(),
            worst_l: Some(l),
            module_bound: bound,
            stratum_correction: BigInt::from(stratum_codim(k, m, k - l) as u64),
            family_correction: BigInt::ZERO,
            pass: total >= gm,
            required: gm.clone(),
            total,
        });
    }

    // tangent-rank condition: the stratum-corrected bound is the closed form
    {
        let mm = mq2_minimum(k, m)?;
        let l = mm.argmin_l;
        let stratum = BigInt::from(stratum_codim(k, m, k - l) as u64);
        conditions.push(ConditionVerdict {
            condition: "MQ2".into(),
            worst_l: Some(l),
            module_bound: &mm.minimum - &stratum,
            stratum_correction: stratum,
            family_correction: BigInt::ZERO,
            total: mm.minimum.clone(),
            required: gm.clone(),
            pass: mm.minimum >= gm,
        });
    }

    // regularity at non-singular points
    {
        let dim_pi = m - k - eps;
        let truncation = k + eps + 3;
        let walk = binomial_walk(&degrees, dim_pi, truncation);
        let family = BigInt::from(((dim_pi + 1) * (k + eps - 1)) as u64);
        let bound = walk.min_of_candidates.clone();
        let total = &bound - &family;
        conditions.push(ConditionVerdict {
            condition: "R1".into(),
            worst_l: None,
            module_bound: bound,
            stratum_correction: BigInt::ZERO,
            family_correction: family,
            pass: total >= gm,
            required: gm.clone(),
            total,
        });
    }

    // regularity at quadratic points: hyperplane family, truncation 4
    {
        let dim_pi = m - 1;
        let walk = binomial_walk(&degrees, dim_pi, 4);
        let family = BigInt::from((dim_pi + 1) as u64);
        let stratum = BigInt::from(stratum_codim(k, m, k - 1) as u64);
        let bound = walk.min_of_candidates.clone();
        let total = &stratum + &bound - &family;
        conditions.push(ConditionVerdict {
            condition: "R2".into(),
            worst_l: Some(1),
            module_bound: bound,
            stratum_correction: stratum,
            family_correction: family,
            pass: total >= gm,
            required: gm.clone(),
            total,
        });
    }

    // codimension condition at multi-quadratic points
    {
        let mut worst: Option<(BigInt, usize, BigInt, BigInt)> = None;
        for l in 2..=k {
            let n_sharp = m + l - eps - 1;
            let bound = irreducibility_locus_bound(n_sharp, k + k_ge3);
            let stratum = BigInt::from(stratum_codim(k, m, k - l) as u64);
            let family = BigInt::from((eps * (m + l - eps)) as u64);
            let total = &stratum + &bound - &family;
            if worst.as_ref().is_none_or(|(w, ..)| total < *w) {
                worst = Some((total, l, stratum, family));
            }
        }
        let (total, l, stratum, family) = worst.unwrap();
        let bound = irreducibility_locus_bound(m + l - eps - 1, k + k_ge3);
        conditions.push(ConditionVerdict {
            condition: "R3.1".into(),
            worst_l: Some(l),
            module_bound: bound,
            stratum_correction: stratum,
            family_correction: family,
            pass: total >= gm,
            required: gm.clone(),
            total,
        });
    }

    // regularity at multi-quadratic points
    {
        let mut worst: Option<(BigInt, usize, BigInt, BigInt, BigInt)> = None;
        for l in 2..=k {
            let dim_pi = m + l - 1 - eps;
            let truncation = (eps + 4).saturating_sub(l);
            let walk = binomial_walk(&degrees, dim_pi, truncation);
            let bound = walk.min_of_candidates.clone();
            let stratum = BigInt::from(stratum_codim(k, m, k - l) as u64);
            let family = BigInt::from((eps * (dim_pi + 1)) as u64);
            let total = &stratum + &bound - &family;
            if worst.as_ref().is_none_or(|(w, ..)| total < *w) {
                worst = Some((total, l, bound, stratum, family));
            }
        }
        let (total, l, bound, stratum, family) = worst.unwrap();
        conditions.push(ConditionVerdict {
            condition: "R3.2".into(),
            worst_l: Some(l),
            module_bound: bound,
            stratum_correction: stratum,
            family_correction: family,
            pass: total >= gm,
            required: gm.clone(),
            total,
        });
    }

    let all_pass = conditions.iter().all(|c| c.pass);
    Ok(CodimReport {
        k,
        m,
        gamma: g,
        gamma_plus_m: gm,
        conditions,
        all_pass,
    })
}
