//! Numeric shadow of the descent machinery: level states of marked complete
//! intersections, the three hyperplane-section transitions, the contraction
//! certificate, the infinitely-near multiplicity bound, and the fibration
//! admissibility tests.
//!
//! The tracer is strict-inequality bookkeeping: each state field is the
//! worst-case bound the corresponding statement guarantees, never actual
//! divisor data.

use crate::binom::binomial;
use crate::constants::{epsilon, rho, thresholds};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TransitionKind {
    /// Hyperplane section not tangent at the point: level `(k, c - 2)`.
    Transversal,
    /// Tangent hyperplane section: level `(l + 1, c - 2)`.
    Tangent,
    /// The special section driving the ratio contraction.
    Special,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionRecord {
    pub kind: TransitionKind,
    pub l_x: usize,
    pub c_x: usize,
    pub rank_lower: usize,
    /// Strict lower bound on the ratio after the step, as a string.
    pub ratio_lower: String,
}

/// Certified bounds for a marked complete intersection with a divisor:
/// the singularity type `l_X`, the singular-locus codimension `c_X`, a
/// lower bound on the rank at the marked point, and a strict lower bound on
/// the ratio `nu(D)/n(D)`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelState {
    pub k: usize,
    pub l_x: usize,
    pub c_x: usize,
    pub rank_lower: usize,
    #[serde(serialize_with = "crate::tracer::serialize_ratio")]
    pub ratio: BigRational,
    pub step_log: Vec<TransitionRecord>,
}

pub(crate) fn serialize_ratio<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl LevelState {
    /// A fresh state; validates the level inequalities and the rank bound.
    pub fn new(
        k: usize,
        l_x: usize,
        c_x: usize,
        rank_lower: usize,
        ratio: BigRational,
    ) -> crate::Result<LevelState> {
        if l_x < 2 || l_x > k {
            return Err(crate::Error::LevelOutOfRange { l_x, k });
        }
        if c_x < l_x + 4 {
            return Err(crate::Error::PrerequisiteViolated {
                step: "state".into(),
                inequality: format!("c_X >= l_X + 4 (got c_X = {c_x}, l_X = {l_x})"),
            });
        }
        if rank_lower < 2 * l_x + c_x - 1 {
            return Err(crate::Error::PrerequisiteViolated {
                step: "state".into(),
                inequality: format!(
                    "rk(o in X) >= 2 l_X + c_X - 1 = {} (got {rank_lower})",
                    2 * l_x + c_x - 1
                ),
            });
        }
        Ok(LevelState {
            k,
            l_x,
            c_x,
            rank_lower,
            ratio,
            step_log: Vec::new(),
        })
    }

    /// The state after the initial descent at a type-`2^l` point of the
    /// original variety: level `(l, c_F)` with the reduced-tuple rank bound.
    pub fn initial_for(k: usize, l: usize, rank_lower: usize, ratio: BigRational) -> crate::Result<LevelState> {
        let t = thresholds(k);
        LevelState::new(k, l, t.c_f, rank_lower, ratio)
    }
}

fn err(step: &str, inequality: String) -> crate::Error {
    crate::Error::PrerequisiteViolated {
        step: step.into(),
        inequality,
    }
}

/// Applies one hyperplane-section transition, checking its prerequisites.
/// Codimension drops by exactly 2, the rank bound by at most 2 (the worst
/// case is charged), `l` increments on the tangent step, and the special
/// step updates the ratio to the worst value the strict contraction allows.
pub fn transition(state: &LevelState, kind: TransitionKind) -> crate::Result<LevelState> {
    let k = state.k;
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    let mut next = state.clone();
    match kind {
        TransitionKind::Transversal => {
            if state.l_x != k {
                return Err(err(
                    "transversal",
                    format!("level must be (k, c_X) with l_X = k (got l_X = {})", state.l_x),
                ));
            }
            if state.c_x < k + 6 {
                return Err(err(
                    "transversal",
                    format!("c_X >= k + 6 = {} (got {})", k + 6, state.c_x),
                ));
            }
            next.c_x -= 2;
            next.rank_lower -= 2;
        }
        TransitionKind::Tangent => {
            if state.l_x < 2 || state.l_x > k - 1 {
                return Err(err(
                    "tangent",
                    format!("2 <= l_X <= k - 1 (got l_X = {})", state.l_x),
                ));
            }
            if state.c_x < state.l_x + 7 {
                return Err(err(
                    "tangent",
                    format!("c_X >= l_X + 7 = {} (got {})", state.l_x + 7, state.c_x),
                ));
            }
            next.l_x += 1;
            next.c_x -= 2;
            next.rank_lower -= 2;
        }
        TransitionKind::Special => {
            if state.l_x != k {
                return Err(err(
                    "special",
                    format!("level must be (k, c_X) with l_X = k (got l_X = {})", state.l_x),
                ));
            }
            if state.c_x < 2 * k + 4 {
                return Err(err(
                    "special",
                    format!("c_X >= 2k + 4 = {} (got {})", 2 * k + 4, state.c_x),
                ));
            }
            let rank_needed = 10 * k * k + 8 * k + 5;
            if state.rank_lower < rank_needed {
                return Err(err(
                    "special",
                    format!("rk(o in X) >= 10k^2 + 8k + 5 = {rank_needed} (got {})", state.rank_lower),
                ));
            }
            if !(state.ratio > BigRational::one() && state.ratio <= three_halves) {
                return Err(err(
                    "special",
                    format!("n(D) < nu(D) <= (3/2) n(D) (got ratio {})", state.ratio),
                ));
            }
            // 2 - ratio' < (k/(k+1)) (2 - ratio): charge the bound itself
            let two = BigRational::from_integer(BigInt::from(2));
            let factor = BigRational::new(BigInt::from(k as u64), BigInt::from(k as u64 + 1));
            next.ratio = &two - &(factor * (&two - &state.ratio));
            next.c_x -= 2;
            next.rank_lower -= 2;
        }
    }
    // the result must itself satisfy the level conditions
    if next.c_x < next.l_x + 4 {
        return Err(err(
            "result",
            format!(
                "resulting level violates c_X >= l_X + 4 (c = {}, l = {})",
                next.c_x, next.l_x
            ),
        ));
    }
    if next.rank_lower < 2 * next.l_x + next.c_x - 1 {
        return Err(err(
            "result",
            format!(
                "resulting rank bound {} below 2 l_X + c_X - 1 = {}",
                next.rank_lower,
                2 * next.l_x + next.c_x - 1
            ),
        ));
    }
    next.step_log.push(TransitionRecord {
        kind,
        l_x: next.l_x,
        c_x: next.c_x,
        rank_lower: next.rank_lower,
        ratio_lower: next.ratio.to_string(),
    });
    Ok(next)
}

/// The contraction certificate: after at most `eps(k)` special steps the
/// ratio is forced above 3/2, and the codimension and rank budgets survive
/// that many steps.
#[derive(Clone, Debug, Serialize)]
pub struct ContractionCertificate {
    pub k: usize,
    pub epsilon: usize,
    /// `(k/(k+1))^eps(k)` as an exact fraction string.
    pub contraction_factor: String,
    /// `(k/(k+1))^eps(k) <= 1/2`.
    pub factor_le_half: bool,
    /// `c_T - 2 eps(k)` and the floor `2k + 4` it must not cross.
    pub c_after: usize,
    pub c_floor: usize,
    pub c_budget_ok: bool,
    /// `mq2_rank - 2 eps(k)` and the floor `10k^2 + 8k + 5`.
    pub rank_after: usize,
    pub rank_floor: usize,
    pub rank_budget_ok: bool,
    pub pass: bool,
}

pub fn contraction_certificate(k: usize) -> ContractionCertificate {
    let t = thresholds(k);
    let eps = t.epsilon;
    let factor = BigRational::new(BigInt::from(k as u64), BigInt::from(k as u64 + 1));
    let mut pow = BigRational::one();
    for _ in 0..eps {
        pow *= &factor;
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let c_after = t.c_t - 2 * eps;
    let c_floor = 2 * k + 4;
    let rank_after = t.mq2_rank - 2 * eps;
    let rank_floor = 10 * k * k + 8 * k + 5;
    let factor_le_half = pow <= half;
    let c_ok = c_after >= c_floor;
    let rank_ok = rank_after >= rank_floor;
    ContractionCertificate {
        k,
        epsilon: eps,
        contraction_factor: pow.to_string(),
        factor_le_half,
        c_after,
        c_floor,
        c_budget_ok: c_ok,
        rank_after,
        rank_floor,
        rank_budget_ok: rank_ok,
        pass: factor_le_half && c_ok && rank_ok,
    }
}

/// The infinitely-near multiplicity bound `(mu_p + mu_q - nu) / (k + 1)`.
pub fn multiplicity_line_bound(
    mu_p: &BigRational,
    mu_q: &BigRational,
    nu: &BigRational,
    k: usize,
) -> BigRational {
    (mu_p + mu_q - nu) / BigRational::from_integer(BigInt::from(k as u64 + 1))
}

/// Enumerates the integer splittings `alpha + beta = k`, `alpha >= beta >= 1`,
/// of the normal-sheaf degrees and minimizes
/// `2 (mu_p + mu_q - nu) / (k + (alpha - beta) + 4)`; the minimum sits at
/// `(k - 1, 1)` and equals the bound above.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingCheck {
    pub k: usize,
    pub minimizing_split: Option<(usize, usize)>,
    pub minimum: Option<String>,
    pub equals_line_bound: bool,
}

pub fn splitting_check(
    mu_p: &BigRational,
    mu_q: &BigRational,
    nu: &BigRational,
    k: usize,
) -> SplittingCheck {
    let num = mu_p + mu_q - nu;
    let mut best: Option<(BigRational, (usize, usize))> = None;
    for beta in 1..=k / 2 {
        let alpha = k - beta;
        if alpha < beta {
            continue;
        }
        let denom = BigRational::from_integer(BigInt::from((k + (alpha - beta) + 4) as u64));
        let v = BigRational::from_integer(BigInt::from(2)) * &num / denom;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, (alpha, beta)));
        }
    }
    match best {
        None => SplittingCheck {
            k,
            minimizing_split: None,
            minimum: None,
            equals_line_bound: false,
        },
        Some((v, split)) => SplittingCheck {
            k,
            equals_line_bound: v == multiplicity_line_bound(mu_p, mu_q, nu, k),
            minimizing_split: Some(split),
            minimum: Some(v.to_string()),
        },
    }
}

/// Ratio monotonicity when hyperplane-section components are removed from
/// the divisor: with `ratio = alpha > 1` and `b >= 1` hyperplane sections
/// removed, `(alpha n* + (alpha - 1) b) / n* > alpha`.
pub fn removal_preserves_ratio(alpha: &BigRational, n_star: &BigRational, b: u64) -> bool {
    if !(*alpha > BigRational::one()) {
        return false;
    }
    let bq = BigRational::from_integer(BigInt::from(b));
    let new_ratio = (alpha * n_star + (alpha - BigRational::one()) * bq) / n_star;
    new_ratio > *alpha
}

// ---------------------------------------------------------------------------
// fibrations over a projective-space base

/// Bi-degree data of a fibration into complete intersections over `P^m`.
#[derive(Clone, Debug, Serialize)]
pub struct FibrationParams {
    pub m: usize,
    pub k: usize,
    pub big_m: usize,
    /// `(m_i, d_i)` pairs.
    pub bidegrees: Vec<(usize, usize)>,
}

impl FibrationParams {
    pub fn new(
        m: usize,
        k: usize,
        big_m: usize,
        bidegrees: Vec<(usize, usize)>,
    ) -> crate::Result<FibrationParams> {
        if bidegrees.len() != k {
            return Err(crate::Error::Input(format!(
                "expected {k} bidegree pairs, got {}",
                bidegrees.len()
            )));
        }
        if bidegrees.iter().any(|&(_, d)| d < 2) {
            return Err(crate::Error::Input("every fibre degree must be >= 2".into()));
        }
        let sum: usize = bidegrees.iter().map(|&(_, d)| d).sum();
        if sum != big_m + k {
            return Err(crate::Error::Input(format!(
                "fibre degrees must sum to M + k = {}, got {sum}",
                big_m + k
            )));
        }
        Ok(FibrationParams {
            m,
            k,
            big_m,
            bidegrees,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FibrationClass {
    /// Both the slope inequality and the base-dimension bound hold.
    Rigid,
    /// `sum m_i <= m`: the projection to the fibre side is a transversal
    /// fibre-space structure, so the original one is not rigid.
    NotRigidTransversal,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibrationReport {
    pub class: FibrationClass,
    pub reason: String,
    /// `sum (1 - 1/d_i) m_i` as an exact fraction string.
    pub slope_sum: String,
    /// The `m + 1` it is compared against.
    pub slope_rhs: String,
    pub sum_mi: usize,
    /// The base-dimension bound `M - k + 4 + binomial(M - rho(k) + 2, 2)`,
    /// when `M >= rho(k)`.
    pub dim_bound: Option<String>,
}

/// Classifies a fibration per the admissibility tests, all exact.
pub fn check_fibration(p: &FibrationParams) -> FibrationReport {
    let slope_sum: BigRational = p
        .bidegrees
        .iter()
        .map(|&(mi, di)| {
            BigRational::from_integer(BigInt::from(mi as u64))
                * (BigRational::one()
                    - BigRational::new(BigInt::one(), BigInt::from(di as u64)))
        })
        .sum();
    let slope_rhs = BigRational::from_integer(BigInt::from(p.m as u64 + 1));
    let sum_mi: usize = p.bidegrees.iter().map(|&(mi, _)| mi).sum();

    let mut report = FibrationReport {
        class: FibrationClass::Undetermined,
        reason: String::new(),
        slope_sum: slope_sum.to_string(),
        slope_rhs: slope_rhs.to_string(),
        sum_mi,
        dim_bound: None,
    };

    if sum_mi <= p.m {
        report.class = FibrationClass::NotRigidTransversal;
        report.reason = format!(
            "sum of base degrees {sum_mi} <= dim of base {}: a transversal fibre-space structure exists",
            p.m
        );
        return report;
    }
    let rho_k = rho(p.k);
    if p.big_m < rho_k {
        report.reason = format!(
            "M = {} is below rho({}) = {rho_k}; the rigidity criterion does not apply",
            p.big_m, p.k
        );
        return report;
    }
    let dim_bound = BigInt::from((p.big_m - p.k + 4) as u64)
        + binomial((p.big_m - rho_k + 2) as i64, 2);
    report.dim_bound = Some(dim_bound.to_string());
    let dim_ok = BigInt::from(p.m as u64) <= dim_bound;
    let slope_ok = slope_sum >= slope_rhs;
    if slope_ok && dim_ok {
        report.class = FibrationClass::Rigid;
        report.reason = "slope inequality and base-dimension bound both hold".into();
    } else if !slope_ok {
        report.reason = format!(
            "slope sum {} falls short of m + 1 = {}",
            report.slope_sum, report.slope_rhs
        );
    } else {
        report.reason = "base dimension exceeds the bound".into();
    }
    report
}

/// Convenience: the `epsilon(k)`-step worst-case chain starting from
/// `(l = k, c = c_T, rank = mq2_rank)` with ratio just above 1, as the
/// certificate's budgets play out step by step.
pub fn worst_case_special_chain(k: usize, start_ratio: BigRational) -> crate::Result<Vec<LevelState>> {
    let t = thresholds(k);
    let mut state = LevelState::new(k, k, t.c_t, t.mq2_rank, start_ratio)?;
    let mut chain = vec![state.clone()];
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    for _ in 0..epsilon(k) {
        if state.ratio > three_halves {
            break;
        }
        state = transition(&state, TransitionKind::Special)?;
        chain.push(state.clone());
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn special_step_at_k3() {
        // (l=3, c=16, rank=125, ratio slightly above 1)
        let s = LevelState::new(3, 3, 16, 125, rat(101, 100)).unwrap();
        let s2 = transition(&s, TransitionKind::Special).unwrap();
        assert_eq!(s2.c_x, 14);
        assert_eq!(s2.rank_lower, 123);
        // 2 - ratio' = (3/4)(2 - 101/100) = (3/4)(99/100) = 297/400
        assert_eq!(s2.ratio, rat(2, 1) - rat(297, 400));
    }

    #[test]
    fn tangent_step_threshold_arithmetic() {
        let s = LevelState::new(3, 2, 18, 23, rat(6, 5)).unwrap();
        let s2 = transition(&s, TransitionKind::Tangent).unwrap();
        assert_eq!((s2.l_x, s2.c_x), (3, 16));
        assert_eq!(s2.rank_lower, 21);
        assert!(s2.rank_lower >= 2 * 3 + 16 - 1);
    }

    #[test]
    fn special_step_rejects_ratio_out_of_range() {
        let s = LevelState::new(3, 3, 16, 125, rat(2, 1)).unwrap();
        match transition(&s, TransitionKind::Special) {
            Err(crate::Error::PrerequisiteViolated { step, .. }) => {
                assert_eq!(step, "special");
            }
            other => panic!("expected prerequisite violation, got {other:?}"),
        }
    }

    #[test]
    fn transversal_requires_top_type() {
        let s = LevelState::new(3, 2, 18, 23, rat(6, 5)).unwrap();
        assert!(transition(&s, TransitionKind::Transversal).is_err());
    }

    #[test]
    fn contraction_certificate_k3_is_tight() {
        let c = contraction_certificate(3);
        assert!(c.pass);
        assert_eq!(c.contraction_factor, "27/64");
        assert_eq!(c.c_after, 10);
        assert_eq!(c.c_floor, 10);
        assert_eq!(c.rank_after, 119);
        assert_eq!(c.rank_floor, 119);
    }

    #[test]
    fn contraction_certificate_scan() {
        for k in 3..=30 {
            assert!(contraction_certificate(k).pass, "k={k}");
        }
    }

    #[test]
    fn worst_case_chain_crosses_three_halves() {
        // starting arbitrarily close to 1, eps(k) steps force ratio > 3/2
        for k in [3usize, 5, 8] {
            let chain = worst_case_special_chain(k, rat(1_000_001, 1_000_000)).unwrap();
            let last = chain.last().unwrap();
            assert!(
                last.ratio > rat(3, 2),
                "k={k}: final ratio {} not above 3/2",
                last.ratio
            );
            assert!(chain.len() - 1 <= epsilon(k));
        }
    }

    #[test]
    fn line_bound_and_splittings() {
        // mu_p = mu_q = nu: bound nu/(k+1)
        let nu = rat(7, 3);
        let b = multiplicity_line_bound(&nu, &nu, &nu, 4);
        assert_eq!(b, &nu / rat(5, 1));

        // k = 2: single splitting (1,1) with denominator 6 = 2(k+1)
        let c = splitting_check(&rat(5, 2), &rat(3, 2), &rat(1, 2), 2);
        assert_eq!(c.minimizing_split, Some((1, 1)));
        assert!(c.equals_line_bound);

        // k = 5: minimizing splitting is (4, 1)
        let c = splitting_check(&rat(9, 4), &rat(11, 7), &rat(2, 3), 5);
        assert_eq!(c.minimizing_split, Some((4, 1)));
        assert!(c.equals_line_bound);
    }

    #[test]
    fn removal_monotonicity() {
        assert!(removal_preserves_ratio(&rat(7, 5), &rat(10, 1), 1));
        assert!(removal_preserves_ratio(&rat(101, 100), &rat(3, 1), 4));
        assert!(!removal_preserves_ratio(&rat(1, 1), &rat(3, 1), 1));
    }

    #[test]
    fn fibration_classification_cases() {
        // M below rho: undetermined with the reason recorded
        let p = FibrationParams::new(1, 3, 120, vec![(1, 41), (1, 41), (1, 41)]).unwrap();
        let r = check_fibration(&p);
        assert_eq!(r.class, FibrationClass::Undetermined);
        assert!(r.reason.contains("below rho"));

        // rigid example on P^1
        let p = FibrationParams::new(1, 3, 123, vec![(1, 42), (1, 42), (1, 42)]).unwrap();
        let r = check_fibration(&p);
        assert_eq!(r.class, FibrationClass::Rigid);

        // transversal structure when the base degrees are small
        let p = FibrationParams::new(5, 3, 123, vec![(1, 42), (1, 42), (1, 42)]).unwrap();
        let r = check_fibration(&p);
        assert_eq!(r.class, FibrationClass::NotRigidTransversal);
    }
}
