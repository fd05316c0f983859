//! Dual-route checks: places where an independent classical computation
//! corroborates the Groebner-based decisions.

use cicert_core::constants::DegreeTuple;
use cicert_core::poly::{Monomial, SparsePoly};
use cicert_core::regularity::{
    self, is_regular_sequence, two_prime_dimension, Confidence, SampledVerdict, DEFAULT_PRIME,
};
use cicert_core::scalar::{ExactScalar, FieldKind};
use cicert_core::singularity::PointedTuple;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Degree of `f` in variable `var`.
fn deg_in(f: &SparsePoly, var: usize) -> usize {
    f.terms().map(|(m, _)| m.0[var] as usize).max().unwrap_or(0)
}

/// Coefficient of `x_var^i` in `f`, as a polynomial in the other variables
/// (returned in the full variable ring with `var`-exponent zero).
fn coeff_of_power(f: &SparsePoly, var: usize, i: usize) -> SparsePoly {
    SparsePoly::from_terms(
        f.n_vars(),
        f.field(),
        f.terms().filter(|(m, _)| m.0[var] as usize == i).map(|(m, c)| {
            let mut e = m.0.clone();
            e[var] = 0;
            (Monomial(e), c.clone())
        }),
    )
}

/// Determinant by Laplace expansion; fine for the small Sylvester matrices
/// this test builds.
fn det(mat: &[Vec<SparsePoly>]) -> SparsePoly {
    let n = mat.len();
    let n_vars = mat[0][0].n_vars();
    let field = mat[0][0].field();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = SparsePoly::zero(n_vars, field);
    for (j, entry) in mat[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<SparsePoly>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = entry * &det(&minor);
        if j % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

/// Resultant of `f`, `g` with respect to `var` (Sylvester determinant).
fn resultant(f: &SparsePoly, g: &SparsePoly, var: usize) -> SparsePoly {
    let m = deg_in(f, var);
    let n = deg_in(g, var);
    let size = m + n;
    let n_vars = f.n_vars();
    let field = f.field();
    let mut mat = vec![vec![SparsePoly::zero(n_vars, field); size]; size];
    for row in 0..n {
        for (i, col) in (0..=m).map(|i| (i, row + i)).collect::<Vec<_>>() {
            mat[row][col] = coeff_of_power(f, var, m - i);
        }
    }
    for row in 0..m {
        for (i, col) in (0..=n).map(|i| (i, row + i)).collect::<Vec<_>>() {
            mat[n + row][col] = coeff_of_power(g, var, n - i);
        }
    }
    det(&mat)
}

#[test]
fn plane_quadric_cubic_regularity_vs_resultant() {
    // a random dense quadric and cubic on P^2: the Groebner route says the
    // pair is regular; the classical route says their resultant in the
    // first variable is not identically zero (no common component)
    let f_field = FieldKind::Prime(DEFAULT_PRIME);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..5 {
        let mut dense = |d: usize| {
            let mut p = SparsePoly::zero(3, f_field);
            // all monomials of degree d in 3 variables
            for a in 0..=d {
                for b in 0..=(d - a) {
                    let e = vec![a as u32, b as u32, (d - a - b) as u32];
                    p.add_term(Monomial(e), f_field.from_i64(rng.gen_range(1..=31)));
                }
            }
            p
        };
        let q = dense(2);
        let c = dense(3);
        let verdict = is_regular_sequence(&[q.clone(), c.clone()], 2, DEFAULT_PRIME).unwrap();
        let res = resultant(&q, &c, 0);
        assert_eq!(
            verdict.regular,
            !res.is_zero(),
            "groebner and resultant disagree"
        );
        assert!(verdict.regular);
    }
}

#[test]
fn surviving_zero_member_violates_r1() {
    // k = 1, d = (7): the truncation keeps one member, the quadratic
    // level, which is made identically zero
    let d = DegreeTuple::new(vec![7]).unwrap();
    let n = 8; // M + k + 1 with M = 6
    let t = |e: Vec<u32>, c: i64| (Monomial(e), ExactScalar::from_int(c));
    let mut terms = vec![t(vec![6, 1, 0, 0, 0, 0, 0, 0], 1)]; // linear pivot
    // levels 3..7 present, level 2 absent
    for (j, var) in [(3usize, 2usize), (4, 3), (5, 4), (6, 5), (7, 6)] {
        let mut e = vec![0u32; n];
        e[0] = (7 - j) as u32;
        e[var] = j as u32;
        terms.push(t(e, 1));
    }
    let f = SparsePoly::from_terms(n, FieldKind::Rational, terms);
    let point: Vec<ExactScalar> = std::iter::once(1i64)
        .chain(std::iter::repeat_n(0, n - 1))
        .map(ExactScalar::from_int)
        .collect();
    let pt = PointedTuple::new(d, vec![f], point).unwrap();
    let report = regularity::check_r1(&pt, 2, None, 5, DEFAULT_PRIME).unwrap();
    assert!(matches!(report.verdict, SampledVerdict::Violated { .. }));
    assert!(report.samples.iter().all(|s| s.first_failure == Some(1)));
}

#[test]
fn all_quadric_codimension_check_reports_rank_criterion() {
    // k = 2, d = (2, 2), type 2^2: the codimension condition reduces to
    // the tuple of quadrics, and the rank criterion is evaluated
    let d = DegreeTuple::new(vec![2, 2]).unwrap();
    let t = |e: Vec<u32>, c: i64| (Monomial(e), ExactScalar::from_int(c));
    let f1 = SparsePoly::from_terms(
        5,
        FieldKind::Rational,
        vec![t(vec![0, 1, 1, 0, 0], 1), t(vec![0, 0, 0, 1, 1], 1)],
    );
    let f2 = SparsePoly::from_terms(
        5,
        FieldKind::Rational,
        vec![t(vec![0, 1, 0, 1, 0], 1), t(vec![0, 0, 1, 0, 1], -1)],
    );
    let point: Vec<ExactScalar> = [1i64, 0, 0, 0, 0]
        .iter()
        .map(|&c| ExactScalar::from_int(c))
        .collect();
    let pt = PointedTuple::new(d, vec![f1, f2], point).unwrap();
    let report = regularity::check_r3_1(&pt, 2, 3, DEFAULT_PRIME).unwrap();
    assert!(
        report.notes.iter().any(|n| n.contains("all degrees are 2")),
        "{:?}",
        report.notes
    );
}

#[test]
fn two_prime_agreement_escalation_contract() {
    let f = FieldKind::Rational;
    let x0 = SparsePoly::variable(0, 3, f);
    let x1 = SparsePoly::variable(1, 3, f);
    let g = &(&x0 * &x0) - &(&x1 * &x1);
    let res = two_prime_dimension(std::slice::from_ref(&g)).unwrap();
    assert_eq!(res.dimension, 1);
    assert_eq!(res.confidence, Confidence::MultiPrimeAgree);
    let single = regularity::single_prime_dimension(&[g], DEFAULT_PRIME).unwrap();
    assert_eq!(single.dimension, 1);
    assert_eq!(single.confidence, Confidence::SinglePrime);
    assert_eq!(single.prime_used, DEFAULT_PRIME);
}
