//! Tuple rank of quadratic forms and the complete-intersection-of-quadrics
//! diagnostics built on it.
//!
//! The rank of a tuple `(q_1, ..., q_l)` is the minimum, over all nonzero
//! coefficient vectors in the algebraic closure, of the rank of the
//! combination. Root-finding is avoided entirely:
//!
//! * `l = 1`: ordinary matrix rank.
//! * `l = 2`: the minimum rank is the smallest `r` such that the gcd of the
//!   `(r+1)`-minors of the pencil, a binary form, is nonconstant (a
//!   nonconstant binary form always has a root in the closure).
//! * `l >= 3`: the smallest `r` such that the ideal of `(r+1)`-minors has a
//!   projective zero, decided by Groebner dimension. Over the rationals the
//!   default runs over three primes and reports a majority verdict tagged
//!   monte-carlo; exact rational computation sits behind a flag.

use crate::groebner::buchberger;
use crate::matrix::SymMatrix;
use crate::poly::{Monomial, SparsePoly};
use crate::scalar::{ExactScalar, FieldKind};
use serde::Serialize;
use std::collections::HashMap;

/// An ordered tuple of symmetric matrices of equal size over one field.
#[derive(Clone, Debug)]
pub struct QuadFormTuple {
    n: usize,
    field: FieldKind,
    forms: Vec<SymMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RankConfidence {
    Exact,
    /// Majority over several primes; the closure verdict is randomized.
    MonteCarlo { primes: Vec<u64>, agreeing: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleRankResult {
    pub rank: usize,
    pub confidence: RankConfidence,
}

impl QuadFormTuple {
    pub fn new(forms: Vec<SymMatrix>) -> crate::Result<QuadFormTuple> {
        if forms.is_empty() {
            return Err(crate::Error::Input("tuple needs at least one form".into()));
        }
        let n = forms[0].n();
        let field = forms[0].field();
        if forms.iter().any(|f| f.n() != n) {
            return Err(crate::Error::Input("forms have mixed dimensions".into()));
        }
        if forms.iter().any(|f| f.field() != field) {
            return Err(crate::Error::Input("forms have mixed fields".into()));
        }
        Ok(QuadFormTuple { n, field, forms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.forms.len()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn forms(&self) -> &[SymMatrix] {
        &self.forms
    }

    pub fn reduce_mod(&self, p: u64) -> crate::Result<QuadFormTuple> {
        QuadFormTuple::new(
            self.forms
                .iter()
                .map(|f| f.reduce_mod(p))
                .collect::<crate::Result<Vec<_>>>()?,
        )
    }

    /// Restricts every form to the span of `basis`.
    pub fn restrict(&self, basis: &[Vec<ExactScalar>]) -> crate::Result<QuadFormTuple> {
        QuadFormTuple::new(self.forms.iter().map(|f| f.restrict(basis)).collect())
    }

    /// Default tuple rank; for `l >= 3` over the rationals this is the
    /// multi-prime monte-carlo route.
    pub fn tuple_rank(&self) -> usize {
        self.tuple_rank_detailed(false).rank
    }

    pub fn tuple_rank_detailed(&self, exact_rational: bool) -> TupleRankResult {
        match self.l() {
            1 => TupleRankResult {
                rank: self.forms[0].rank(),
                confidence: RankConfidence::Exact,
            },
            2 => TupleRankResult {
                rank: pencil_min_rank(&self.forms[0], &self.forms[1]),
                confidence: RankConfidence::Exact,
            },
            _ => match self.field {
                FieldKind::Prime(_) => TupleRankResult {
                    rank: minor_ideal_min_rank(self),
                    confidence: RankConfidence::Exact,
                },
                FieldKind::Rational if exact_rational => TupleRankResult {
                    rank: minor_ideal_min_rank(self),
                    confidence: RankConfidence::Exact,
                },
                FieldKind::Rational => self.multi_prime_rank(),
            },
        }
    }

    fn multi_prime_rank(&self) -> TupleRankResult {
        let primes = [32003u64, 65537, 1000003];
        let mut ranks = Vec::new();
        for &p in &primes {
            match self.reduce_mod(p) {
                Ok(t) => ranks.push(minor_ideal_min_rank(&t)),
                Err(_) => continue, // denominator hit the prime; skip it
            }
        }
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &r in &ranks {
            *counts.entry(r).or_insert(0) += 1;
        }
        if let Some((&rank, &c)) = counts.iter().max_by_key(|(_, &c)| c) {
            if c >= 2 {
                return TupleRankResult {
                    rank,
                    confidence: RankConfidence::MonteCarlo {
                        primes: primes.to_vec(),
                        agreeing: c,
                    },
                };
            }
        }
        // primes disagree (or were unusable): escalate to exact rational
        TupleRankResult {
            rank: minor_ideal_min_rank(self),
            confidence: RankConfidence::Exact,
        }
    }
}

/// Interval of possible ranks after restricting to a hyperplane: the rank
/// stays or drops by 1 or 2.
pub fn rank_after_hyperplane_bounds(r: usize) -> (usize, usize) {
    (r.saturating_sub(2), r)
}

/// Sufficient-criterion diagnostics for a complete intersection of `l`
/// quadrics in terms of the tuple rank.
#[derive(Clone, Debug, Serialize)]
pub struct QuadricCIReport {
    pub l: usize,
    pub ambient_vars: usize,
    pub tuple_rank: usize,
    pub confidence: RankConfidence,
    /// `rank >= 2l + 3`: the criterion's verdict, not an independent fact.
    pub irreducible_factorial: bool,
    /// `max{e >= 0 : rank >= 2l + e - 1}`, a lower bound on the codimension
    /// of the singular locus.
    pub codim_sing_lower: usize,
    /// `rank >= 3l + 1`.
    pub terminal_ok: bool,
    /// Set when a failed threshold already exceeds the ambient variable
    /// count, which makes that failure automatic.
    pub ambient_limited: bool,
}

pub fn quadric_ci_report(t: &QuadFormTuple) -> QuadricCIReport {
    quadric_ci_report_with(t, false)
}

/// As `quadric_ci_report`, with the rank strategy chosen by the caller.
pub fn quadric_ci_report_with(t: &QuadFormTuple, exact_rational: bool) -> QuadricCIReport {
    let l = t.l();
    let n = t.n();
    let res = t.tuple_rank_detailed(exact_rational);
    let r = res.rank;
    let irreducible = r >= 2 * l + 3;
    let terminal = r > 3 * l;
    QuadricCIReport {
        l,
        ambient_vars: n,
        tuple_rank: r,
        confidence: res.confidence,
        irreducible_factorial: irreducible,
        codim_sing_lower: (r + 1).saturating_sub(2 * l),
        terminal_ok: terminal,
        ambient_limited: (!irreducible && n < 2 * l + 3) || (!terminal && n < 3 * l + 1),
    }
}

// ---------------------------------------------------------------------------
// minors of the generic combination, level by level

/// Entries of `sum_t lambda_t Q_t` as polynomials in the lambda variables.
fn pencil_entries(forms: &[SymMatrix]) -> Vec<Vec<SparsePoly>> {
    let l = forms.len();
    let n = forms[0].n();
    let field = forms[0].field();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    SparsePoly::from_terms(
                        l,
                        field,
                        (0..l).map(|t| (Monomial::var(t, l), forms[t].entry(i, j).clone())),
                    )
                })
                .collect()
        })
        .collect()
}

fn subsets_of_size(n: usize, s: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(out: &mut Vec<u32>, cur: &mut Vec<usize>, n: usize, s: usize, from: usize) {
        if cur.len() == s {
            let mut m = 0u32;
            for &b in cur.iter() {
                m |= 1 << b;
            }
            out.push(m);
            return;
        }
        for b in from..n {
            cur.push(b);
            rec(out, cur, n, s, b + 1);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, n, s, 0);
    out
}

/// Minors of the generic combination, computed on demand by Laplace
/// expansion along the highest selected row, with full memoization. The
/// lazy smallest-size-first sweeps below usually consume only a few minors
/// per size, so nothing is tabulated eagerly.
struct MinorCache {
    n: usize,
    field: FieldKind,
    lambda_vars: usize,
    entries: Vec<Vec<SparsePoly>>,
    memo: HashMap<(u32, u32), SparsePoly>,
}

impl MinorCache {
    fn new(entries: Vec<Vec<SparsePoly>>, field: FieldKind) -> MinorCache {
        let n = entries.len();
        let lambda_vars = entries[0][0].n_vars();
        MinorCache {
            n,
            field,
            lambda_vars,
            entries,
            memo: HashMap::new(),
        }
    }

    /// The minor on row set `rm` and column set `cm` (equal popcounts).
    fn minor(&mut self, rm: u32, cm: u32) -> SparsePoly {
        if rm == 0 {
            return SparsePoly::constant(self.lambda_vars, self.field.one());
        }
        if let Some(p) = self.memo.get(&(rm, cm)) {
            return p.clone();
        }
        let s = rm.count_ones() as usize;
        let r_hi = 31 - rm.leading_zeros() as usize;
        let r_rest = rm & !(1 << r_hi);
        let mut acc = SparsePoly::zero(self.lambda_vars, self.field);
        let mut idx = 0;
        for c in 0..self.n {
            if cm & (1 << c) == 0 {
                continue;
            }
            let sub = self.minor(r_rest, cm & !(1 << c));
            if !sub.is_zero() {
                let term = &self.entries[r_hi][c] * &sub;
                if (s - 1 + idx).is_multiple_of(2) {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
            idx += 1;
        }
        self.memo.insert((rm, cm), acc.clone());
        acc
    }
}

// ---------------------------------------------------------------------------
// l = 2: gcd of binary-form minors

fn trim(v: &mut Vec<ExactScalar>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Quotient and remainder of dense univariate polynomials over a field;
/// `b` must be nonzero.
fn univ_divrem(a: &[ExactScalar], b: &[ExactScalar]) -> (Vec<ExactScalar>, Vec<ExactScalar>) {
    let field = b.last().unwrap().field();
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut q = vec![field.zero(); a.len().saturating_sub(db)];
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let c = r.last().unwrap() / lead;
        q[dr - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            r[dr - db + i] = &r[dr - db + i] - &t;
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
        if r.len() > dr {
            unreachable!("remainder degree must drop");
        }
    }
    trim(&mut q);
    (q, r)
}

fn univ_rem(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    univ_divrem(a, b).1
}

fn univ_mul(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let field = a[0].field();
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] = &out[i + j] + &t;
        }
    }
    trim(&mut out);
    out
}

fn univ_sub(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    if b.is_empty() {
        return a.to_vec();
    }
    let field = b[0].field();
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), field.zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = &out[i] - y;
    }
    trim(&mut out);
    out
}

fn univ_add(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    if b.is_empty() {
        return a.to_vec();
    }
    let field = b[0].field();
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), field.zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = &out[i] + y;
    }
    trim(&mut out);
    out
}

fn univ_gcd(mut a: Vec<ExactScalar>, mut b: Vec<ExactScalar>) -> Vec<ExactScalar> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = univ_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(c) = a.last().and_then(|c| c.inverse()) {
        for x in &mut a {
            *x = &*x * &c;
        }
    }
    a
}

/// Gcd of two binary forms (2-variable homogeneous polynomials).
fn binary_form_gcd(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let field = a.field();
    let split = |f: &SparsePoly| -> (u32, u32, Vec<ExactScalar>) {
        let min0 = f.terms().map(|(m, _)| m.0[0]).min().unwrap();
        let min1 = f.terms().map(|(m, _)| m.0[1]).min().unwrap();
        let deg = f.degree().unwrap() as u32 - min0 - min1;
        let mut coeffs = vec![field.zero(); deg as usize + 1];
        for (m, c) in f.terms() {
            coeffs[(m.0[0] - min0) as usize] = c.clone();
        }
        (min0, min1, coeffs)
    };
    let (a0, a1, ac) = split(a);
    let (b0, b1, bc) = split(b);
    let g = univ_gcd(ac, bc);
    let m0 = a0.min(b0);
    let m1 = a1.min(b1);
    let dg = g.len() as u32 - 1;
    SparsePoly::from_terms(
        2,
        field,
        g.into_iter().enumerate().map(|(i, c)| {
            (
                Monomial(vec![i as u32 + m0, dg - i as u32 + m1]),
                c,
            )
        }),
    )
}

/// Minimum rank over the closure of the pencil `lambda0 Q0 + lambda1 Q1`:
/// smallest `r` such that the `(r+1)`-minors share a nonconstant gcd (an
/// identically vanishing set of minors counts as such).
///
/// Small pencils run the literal gcd-of-minors sweep; larger ones compute
/// the same determinantal divisors by diagonalizing the pencil over the
/// univariate polynomial ring (the affine minimum rank is the number of
/// unit invariant factors), then take the point at infinity into account.
pub fn pencil_min_rank(q0: &SymMatrix, q1: &SymMatrix) -> usize {
    if q0.n() <= 8 {
        pencil_min_rank_by_minor_gcd(q0, q1)
    } else {
        pencil_min_rank_by_invariant_factors(q0, q1)
    }
}

/// The literal sweep: smallest size whose minors share a nonconstant gcd.
pub fn pencil_min_rank_by_minor_gcd(q0: &SymMatrix, q1: &SymMatrix) -> usize {
    let n = q0.n();
    let mut cache = MinorCache::new(pencil_entries(&[q0.clone(), q1.clone()]), q0.field());
    for s in 1..=n {
        let subsets = subsets_of_size(n, s);
        let mut gcd = SparsePoly::zero(2, q0.field());
        let mut constant = false;
        'level: for &rm in &subsets {
            for &cm in &subsets {
                let m = cache.minor(rm, cm);
                if m.is_zero() {
                    continue;
                }
                gcd = binary_form_gcd(&gcd, &m);
                if gcd.degree() == Some(0) {
                    constant = true;
                    break 'level;
                }
            }
        }
        if !constant {
            // gcd is zero (all minors vanish) or has positive degree: a
            // common projective root exists over the closure
            return s - 1;
        }
    }
    n
}

/// Diagonalizes `Q0 t + Q1` by unimodular row and column operations over
/// the polynomial ring, with the divisibility normalization, and counts
/// the unit invariant factors: the gcd of the `s`-minors is constant
/// exactly when at least `s` of them are units, so that count is the
/// minimum rank over all affine parameter values. The rank of `Q0` covers
/// the remaining projective point.
pub fn pencil_min_rank_by_invariant_factors(q0: &SymMatrix, q1: &SymMatrix) -> usize {
    let n = q0.n();
    // dense univariate entries: a[i][j] = q0[i][j] t + q1[i][j]
    let mut a: Vec<Vec<Vec<ExactScalar>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = vec![q1.entry(i, j).clone(), q0.entry(i, j).clone()];
                    trim(&mut p);
                    p
                })
                .collect()
        })
        .collect();
    let mut units = 0;
    for corner in 0..n {
        'reduce: loop {
            // entry of minimal degree in the working submatrix
            let mut best: Option<(usize, usize, usize)> = None;
            for i in corner..n {
                for j in corner..n {
                    if a[i][j].is_empty() {
                        continue;
                    }
                    let d = a[i][j].len() - 1;
                    if best.is_none_or(|(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                // submatrix is zero: generic rank reached
                return units.min(q0.rank());
            };
            a.swap(corner, pi);
            for row in a.iter_mut() {
                row.swap(corner, pj);
            }
            let pivot = a[corner][corner].clone();
            let mut clean = true;
            for i in (corner + 1)..n {
                if a[i][corner].is_empty() {
                    continue;
                }
                let (q, r) = univ_divrem(&a[i][corner], &pivot);
                for j in corner..n {
                    let t = univ_mul(&q, &a[corner][j]);
                    a[i][j] = univ_sub(&a[i][j], &t);
                }
                debug_assert_eq!(a[i][corner], r);
                if !r.is_empty() {
                    clean = false;
                }
            }
            if !clean {
                continue 'reduce;
            }
            for j in (corner + 1)..n {
                if a[corner][j].is_empty() {
                    continue;
                }
                let (q, r) = univ_divrem(&a[corner][j], &pivot);
                for i in corner..n {
                    let t = univ_mul(&q, &a[i][corner]);
                    a[i][j] = univ_sub(&a[i][j], &t);
                }
                debug_assert_eq!(a[corner][j], r);
                if !r.is_empty() {
                    clean = false;
                }
            }
            if !clean {
                continue 'reduce;
            }
            // divisibility normalization: without it the diagonal entries
            // are not the invariant factors (diag(t, t+1) has unit gcd but
            // no unit entry); pulling an offending row up forces the pivot
            // degree to drop on the next pass
            let offender = ((corner + 1)..n).find(|&i| {
                ((corner + 1)..n).any(|j| {
                    !a[i][j].is_empty() && !univ_divrem(&a[i][j], &pivot).1.is_empty()
                })
            });
            match offender {
                Some(i) => {
                    for j in corner..n {
                        let sum = univ_add(&a[corner][j], &a[i][j]);
                        a[corner][j] = sum;
                    }
                    continue 'reduce;
                }
                None => break 'reduce,
            }
        }
        if a[corner][corner].len() == 1 {
            units += 1;
        }
    }
    units.min(q0.rank())
}

// ---------------------------------------------------------------------------
// l >= 3: positive-dimensionality of the minor ideal

/// Minimum tuple rank via minor-ideal dimension, over the tuple's own field.
/// Smallest size first; within a size the minors feed an incrementally
/// extended Groebner basis, and the size is abandoned as soon as the ideal
/// stops being positive-dimensional.
pub fn minor_ideal_min_rank(t: &QuadFormTuple) -> usize {
    let n = t.n();
    assert!(
        n <= 12,
        "minor sweep is capped at 12 ambient variables (got {n})"
    );
    let mut cache = MinorCache::new(pencil_entries(&t.forms), t.field());
    for s in 1..=n {
        let subsets = subsets_of_size(n, s);
        let mut gb: Option<crate::groebner::GroebnerBasis> = None;
        let mut positive = true;
        'level: for &rm in &subsets {
            for &cm in &subsets {
                let m = cache.minor(rm, cm);
                if m.is_zero() {
                    continue;
                }
                let next = match &gb {
                    None => buchberger(&[m]),
                    Some(g) => g.extend(&m),
                };
                let dim = next.affine_dimension();
                gb = Some(next);
                if dim <= 0 {
                    positive = false;
                    break 'level;
                }
            }
        }
        if positive {
            // either every minor vanishes identically (ideal is zero) or
            // the full minor ideal is positive-dimensional: a projective
            // zero exists, so some combination has rank <= s - 1
            return s - 1;
        }
    }
    n
}

// ---------------------------------------------------------------------------

/// Reference implementation by exhaustive enumeration over a prime field.
///
/// Independent of the gcd / minor-ideal machinery above: it sweeps every
/// projective point of `GF(p)^l`, computes the rank of the combination by
/// plain modular elimination, and keeps the minimum with witnesses.
pub mod oracle {
    use super::QuadFormTuple;
    use crate::scalar::{add_mod, inv_mod, mul_mod, sub_mod};

    #[derive(Clone, Debug)]
    pub struct BruteForceRank {
        pub rank: usize,
        pub p: u64,
        /// Minimizing points, capped.
        pub witnesses: Vec<Vec<u64>>,
    }

    fn mat_rank_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> usize {
        let n = a.len();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| !a[r][col].is_multiple_of(p)) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = inv_mod(a[rank][col], p);
            for j in col..n {
                a[rank][j] = mul_mod(a[rank][j], inv, p);
            }
            for r in 0..n {
                if r != rank && a[r][col] != 0 {
                    let f = a[r][col];
                    for j in col..n {
                        let t = mul_mod(a[rank][j], f, p);
                        a[r][j] = sub_mod(a[r][j], t, p);
                    }
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    /// Minimum of `rank(sum lambda_i q_i mod p)` over all projective
    /// `GF(p)` points, with up to `max_witnesses` minimizers recorded.
    pub fn brute_force_tuple_rank(
        t: &QuadFormTuple,
        p: u64,
        max_witnesses: usize,
    ) -> crate::Result<BruteForceRank> {
        let l = t.l();
        let n = t.n();
        let count = ((p as u128).pow(l as u32) - 1) / (p as u128 - 1);
        if count > 20_000_000 {
            return Err(crate::Error::DeskScaleLimit(format!(
                "projective sweep of {count} points over GF({p})"
            )));
        }
        let forms: Vec<Vec<Vec<u64>>> = t
            .reduce_mod(p)?
            .forms()
            .iter()
            .map(|f| {
                f.rows()
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|c| match c {
                                crate::scalar::ExactScalar::Mod { value, .. } => *value,
                                _ => unreachable!("reduced"),
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut best = usize::MAX;
        let mut witnesses: Vec<Vec<u64>> = Vec::new();
        let mut lambda = vec![0u64; l];
        // canonical representatives: first nonzero coordinate is 1
        for lead in 0..l {
            lambda.iter_mut().for_each(|x| *x = 0);
            lambda[lead] = 1;
            let free = l - lead - 1;
            let total = (p as u128).pow(free as u32);
            for idx in 0..total {
                let mut v = idx;
                for slot in 0..free {
                    lambda[lead + 1 + slot] = (v % p as u128) as u64;
                    v /= p as u128;
                }
                let mut combo = vec![vec![0u64; n]; n];
                for (t_idx, form) in forms.iter().enumerate() {
                    let c = lambda[t_idx];
                    if c == 0 {
                        continue;
                    }
                    for i in 0..n {
                        for j in 0..n {
                            combo[i][j] = add_mod(combo[i][j], mul_mod(c, form[i][j], p), p);
                        }
                    }
                }
                let r = mat_rank_mod_p(combo, p);
                if r < best {
                    best = r;
                    witnesses.clear();
                }
                if r == best && witnesses.len() < max_witnesses {
                    witnesses.push(lambda.clone());
                }
            }
        }
        Ok(BruteForceRank {
            rank: best,
            p,
            witnesses,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_form_rank() {
        let t = QuadFormTuple::new(vec![SymMatrix::diag(&[1, 1, 0, 0])]).unwrap();
        assert_eq!(t.tuple_rank(), 2);
    }

    #[test]
    fn pencil_of_two_squares() {
        // q0 = x0^2, q1 = x1^2 in 2 vars: lambda = (1,0) realizes rank 1;
        // no combination vanishes
        let q0 = SymMatrix::diag(&[1, 0]);
        let q1 = SymMatrix::diag(&[0, 1]);
        let t = QuadFormTuple::new(vec![q0, q1]).unwrap();
        assert_eq!(t.tuple_rank(), 1);
    }

    #[test]
    fn pencil_with_cross_term() {
        // q0 = x0^2 + x1^2 + x2^2, q1 = x0 x1: minimum rank 2
        let q0 = SymMatrix::diag(&[1, 1, 1]);
        let mut q1 = SymMatrix::zero(3, FieldKind::Rational);
        q1.set_symmetric(
            0,
            1,
            ExactScalar::parse_rational("1/2").unwrap(),
        );
        let t = QuadFormTuple::new(vec![q0, q1]).unwrap();
        assert_eq!(t.tuple_rank(), 2);
        // cross-check with the enumeration oracle
        let bf = oracle::brute_force_tuple_rank(&t, 101, 8).unwrap();
        assert_eq!(bf.rank, 2);
    }

    #[test]
    fn hyperbolic_triple() {
        // (x0x1, x2x3, x4x5): every nonzero combination has rank 2, 4 or 6
        let n = 6;
        let mut forms = Vec::new();
        for pair in 0..3 {
            let mut q = SymMatrix::zero(n, FieldKind::Rational);
            q.set_symmetric(2 * pair, 2 * pair + 1, ExactScalar::parse_rational("1/2").unwrap());
            forms.push(q);
        }
        let t = QuadFormTuple::new(forms).unwrap();
        let res = t.tuple_rank_detailed(false);
        assert_eq!(res.rank, 2);
        let exact = t.tuple_rank_detailed(true);
        assert_eq!(exact.rank, 2);
        assert_eq!(exact.confidence, RankConfidence::Exact);
    }

    #[test]
    fn ci_report_thresholds() {
        // l=2, rank 7: irreducible (7 >= 7), codim_sing_lower 4, terminal (7 >= 7)
        let forms = vec![SymMatrix::diag(&[1; 8]), SymMatrix::diag(&[1, 2, 3, 4, 5, 6, 7, 8])];
        let t = QuadFormTuple::new(forms).unwrap();
        let rank = t.tuple_rank();
        assert_eq!(rank, 7);
        let rep = quadric_ci_report(&t);
        assert!(rep.irreducible_factorial);
        assert_eq!(rep.codim_sing_lower, 4);
        assert!(rep.terminal_ok);

        // l=1, rank 3 < 5: not irreducible by the criterion
        let t1 = QuadFormTuple::new(vec![SymMatrix::diag(&[1, 1, 1, 0, 0])]).unwrap();
        let rep1 = quadric_ci_report(&t1);
        assert!(!rep1.irreducible_factorial);

        // boundary of the codimension formula at e = 4
        assert_eq!((9usize + 1).saturating_sub(2 * 3), 4);
    }

    #[test]
    fn hyperplane_rank_bounds() {
        assert_eq!(rank_after_hyperplane_bounds(10), (8, 10));
        assert_eq!(rank_after_hyperplane_bounds(1), (0, 1));
        assert_eq!(rank_after_hyperplane_bounds(0), (0, 0));
    }

    #[test]
    fn invariant_factor_route_handles_coprime_diagonal() {
        // A(t) = diag(t, t+1): no unit diagonal entry before the
        // divisibility normalization, but the invariant factors are
        // (1, t(t+1)), so the affine minimum rank is 1
        let q0 = SymMatrix::diag(&[1, 1]);
        let q1 = SymMatrix::diag(&[0, 1]);
        assert_eq!(pencil_min_rank_by_invariant_factors(&q0, &q1), 1);
        assert_eq!(pencil_min_rank_by_minor_gcd(&q0, &q1), 1);
        // same shape, larger: diag(t, t, t+1, t+2)
        let q0 = SymMatrix::diag(&[1, 1, 1, 1]);
        let q1 = SymMatrix::diag(&[0, 0, 1, 2]);
        assert_eq!(pencil_min_rank_by_invariant_factors(&q0, &q1), 2);
        assert_eq!(pencil_min_rank_by_minor_gcd(&q0, &q1), 2);
        // block where only infinity degenerates: q0 singular
        let q0 = SymMatrix::diag(&[1, 0]);
        let q1 = SymMatrix::diag(&[1, 1]);
        assert_eq!(pencil_min_rank_by_invariant_factors(&q0, &q1), 1);
        assert_eq!(pencil_min_rank_by_minor_gcd(&q0, &q1), 1);
    }

    #[test]
    fn distinct_diag_pencil() {
        // diag(1,1), diag(1,2): rank drops to 1 at lambda = (-1, 1) and at
        // (2, -1); minimum is 1
        let t = QuadFormTuple::new(vec![SymMatrix::diag(&[1, 1]), SymMatrix::diag(&[1, 2])]).unwrap();
        assert_eq!(t.tuple_rank(), 1);
    }

    #[test]
    fn irrational_minimizer_still_found() {
        // q0 = I, q1 = [[2,1],[1,0]]: det(l0 I + l1 q1) = l0^2 + 2 l0 l1 - l1^2,
        // roots irrational; closure minimum rank is 1
        let q0 = SymMatrix::diag(&[1, 1]);
        let q1 = SymMatrix::from_int_entries(&[vec![2, 1], vec![1, 0]]).unwrap();
        let t = QuadFormTuple::new(vec![q0, q1]).unwrap();
        assert_eq!(t.tuple_rank(), 1);
        // the GF(101) sweep cannot see the irrational root: 2 is not a
        // square mod 101, so the enumerated minimum stays at 2
        let bf = oracle::brute_force_tuple_rank(&t, 101, 4).unwrap();
        assert_eq!(bf.rank, 2);
    }
}
