//! Randomized invariants: ring laws for the exact kernels, rank
//! invariances, route agreements, and the small algebraic identities the
//! descent bookkeeping relies on.

use cicert_core::constants::DegreeTuple;
use cicert_core::matrix::SymMatrix;
use cicert_core::poly::{Monomial, SparsePoly};
use cicert_core::quad::{
    pencil_min_rank_by_invariant_factors, pencil_min_rank_by_minor_gcd, QuadFormTuple,
};
use cicert_core::scalar::{ExactScalar, FieldKind};
use cicert_core::slopes::SlopeSequence;
use cicert_core::tracer::removal_preserves_ratio;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn scalar_strategy() -> impl Strategy<Value = ExactScalar> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| {
        ExactScalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    })
}

fn poly_strategy(n_vars: usize, max_deg: u32) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..=max_deg, n_vars),
            scalar_strategy(),
        ),
        0..6,
    )
    .prop_map(move |terms| {
        SparsePoly::from_terms(
            n_vars,
            FieldKind::Rational,
            terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                .map(|(e, c)| (Monomial(e), c)),
        )
    })
}

fn sym_matrix_strategy(n: usize) -> impl Strategy<Value = SymMatrix> {
    // weighted toward zero so structured pencils (diagonal, block) occur
    let entry = prop_oneof![
        2 => Just(0i64),
        5 => -5i64..=5,
    ];
    prop::collection::vec(entry, n * (n + 1) / 2).prop_map(move |vals| {
        let mut m = SymMatrix::zero(n, FieldKind::Rational);
        let mut it = vals.into_iter();
        for i in 0..n {
            for j in i..n {
                m.set_symmetric(i, j, ExactScalar::from_int(it.next().unwrap()));
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_laws(
        f in poly_strategy(3, 3),
        g in poly_strategy(3, 3),
        h in poly_strategy(3, 3),
    ) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f - &g) + &g, f);
    }

    #[test]
    fn graded_parts_sum_to_identity(f in poly_strategy(3, 4)) {
        let sum = f
            .graded_parts()
            .values()
            .fold(SparsePoly::zero(3, FieldKind::Rational), |a, b| &a + b);
        prop_assert_eq!(sum, f.clone());
        for (d, part) in f.graded_parts() {
            prop_assert!(part.is_homogeneous_of(d));
            prop_assert!(!part.is_zero());
        }
    }

    #[test]
    fn restriction_is_multiplicative(
        f in poly_strategy(3, 2),
        g in poly_strategy(3, 2),
        basis in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 2),
    ) {
        let basis: Vec<Vec<ExactScalar>> = basis
            .into_iter()
            .map(|v| v.into_iter().map(ExactScalar::from_int).collect())
            .collect();
        let restrict = |p: &SparsePoly| p.restrict_to_subspace(&basis);
        if let (Ok(rf), Ok(rg), Ok(rfg)) = (restrict(&f), restrict(&g), restrict(&(&f * &g))) {
            prop_assert_eq!(&rf * &rg, rfg);
            // linearity
            let rsum = restrict(&(&f + &g)).unwrap();
            prop_assert_eq!(&rf + &rg, rsum);
        }
    }

    #[test]
    fn matrix_rank_agrees_with_prime_fields(m in sym_matrix_strategy(4)) {
        let rq = m.rank();
        let mut max_modular = 0;
        for p in [101u64, 32003, 65537] {
            let rp = m.reduce_mod(p).unwrap().rank();
            prop_assert!(rp <= rq);
            max_modular = max_modular.max(rp);
        }
        // entries are tiny; three simultaneous bad primes would need a
        // minor divisible by all of them
        prop_assert_eq!(max_modular, rq);
    }

    #[test]
    fn full_product_telescopes(degrees in prop::collection::vec(2usize..=30, 1..=5)) {
        let mut d = degrees.clone();
        d.sort_unstable();
        let k = d.len();
        let seq = SlopeSequence::new(DegreeTuple::new(d.clone()).unwrap());
        let expect = BigRational::new(
            d.iter().map(|&x| BigInt::from(x as u64)).product(),
            BigInt::from(2u64).pow(k as u32),
        );
        prop_assert_eq!(seq.full_product(), expect);
    }

    #[test]
    fn tuple_rank_bounded_by_members(
        q0 in sym_matrix_strategy(4),
        q1 in sym_matrix_strategy(4),
        a in -5i64..=5,
        b in -5i64..=5,
    ) {
        prop_assume!(!(a == 0 && b == 0));
        let t = QuadFormTuple::new(vec![q0.clone(), q1.clone()]).unwrap();
        let r = t.tuple_rank();
        prop_assert!(r <= q0.rank());
        prop_assert!(r <= q1.rank());
        let combo = q0.linear_combination(
            &ExactScalar::from_int(a),
            &q1,
            &ExactScalar::from_int(b),
        );
        prop_assert!(r <= combo.rank());
    }

    #[test]
    fn pencil_routes_agree(
        q0 in sym_matrix_strategy(4),
        q1 in sym_matrix_strategy(4),
    ) {
        let by_gcd = pencil_min_rank_by_minor_gcd(&q0, &q1);
        let by_factors = pencil_min_rank_by_invariant_factors(&q0, &q1);
        prop_assert_eq!(by_gcd, by_factors);
    }

    #[test]
    fn tuple_rank_invariances(
        q0 in sym_matrix_strategy(4),
        q1 in sym_matrix_strategy(4),
        mix in -3i64..=3,
        shear in prop::collection::vec(-3i64..=3, 6),
    ) {
        let t = QuadFormTuple::new(vec![q0.clone(), q1.clone()]).unwrap();
        let r = t.tuple_rank();

        // invertible mixing of the two forms: (q0, q1 + mix q0)
        let mixed = QuadFormTuple::new(vec![
            q0.clone(),
            q1.linear_combination(
                &ExactScalar::from_int(1),
                &q0,
                &ExactScalar::from_int(mix),
            ),
        ])
        .unwrap();
        prop_assert_eq!(mixed.tuple_rank(), r);

        // simultaneous congruence by a unit upper-triangular matrix
        let n = 4;
        let mut a: Vec<Vec<ExactScalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ExactScalar::from_int((i == j) as i64))
                    .collect()
            })
            .collect();
        let mut it = shear.into_iter();
        for i in 0..n {
            for j in (i + 1)..n {
                a[i][j] = ExactScalar::from_int(it.next().unwrap());
            }
        }
        let cong = QuadFormTuple::new(vec![q0.congruence(&a), q1.congruence(&a)]).unwrap();
        prop_assert_eq!(cong.tuple_rank(), r);
    }

    #[test]
    fn hyperplane_restriction_drops_tuple_rank_by_at_most_two(
        q0 in sym_matrix_strategy(4),
        q1 in sym_matrix_strategy(4),
    ) {
        let t = QuadFormTuple::new(vec![q0, q1]).unwrap();
        let r = t.tuple_rank();
        // coordinate hyperplane x3 = 0
        let basis: Vec<Vec<ExactScalar>> = (0..3)
            .map(|i| {
                (0..4)
                    .map(|j| ExactScalar::from_int((i == j) as i64))
                    .collect()
            })
            .collect();
        let restricted = t.restrict(&basis).unwrap();
        let rr = restricted.tuple_rank();
        prop_assert!(rr <= r);
        prop_assert!(r <= rr + 2);
    }

    #[test]
    fn removing_hyperplane_components_preserves_ratio(
        num in 2i64..=40,
        den in 1i64..=20,
        n_star in 1i64..=30,
        b in 1u64..=5,
    ) {
        prop_assume!(num > den); // ratio > 1
        let alpha = BigRational::new(BigInt::from(num), BigInt::from(den));
        let n_star = BigRational::from_integer(BigInt::from(n_star));
        prop_assert!(removal_preserves_ratio(&alpha, &n_star, b));
    }
}

#[test]
fn contraction_identity_is_epsilon_definition() {
    // (k/(k+1))^a <= 1/2 iff ((k+1)/k)^a >= 2: the two sequences cross at
    // the same exponent for every k
    use cicert_core::constants::epsilon;
    use num_traits::One;
    for k in 1..=100usize {
        let e = epsilon(k);
        let frac = BigRational::new(BigInt::from(k as u64), BigInt::from(k as u64 + 1));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut pow = BigRational::one();
        for _ in 0..e {
            pow *= &frac;
        }
        assert!(pow <= half, "k={k}");
        if e > 1 {
            let mut prev = BigRational::one();
            for _ in 0..e - 1 {
                prev *= &frac;
            }
            assert!(prev > half, "k={k}");
        }
    }
}

#[test]
fn level_chain_from_cf_stays_above_ct() {
    // tangent descent from (l, c_F) reaches (k, c_F - 2(k - l)) with the
    // codimension still at or above c_T, for every l >= 2
    use cicert_core::constants::thresholds;
    use cicert_core::tracer::{transition, LevelState, TransitionKind};
    for k in 3..=12usize {
        let t = thresholds(k);
        for l in 2..k {
            let rank = t.mq2_rank;
            let ratio = BigRational::new(BigInt::from(11), BigInt::from(10));
            let mut state = LevelState::new(k, l, t.c_f, rank, ratio).unwrap();
            for _ in 0..(k - l) {
                state = transition(&state, TransitionKind::Tangent).unwrap();
            }
            assert_eq!(state.l_x, k);
            assert_eq!(state.c_x, t.c_f - 2 * (k - l));
            assert!(state.c_x >= t.c_t, "k={k}, l={l}");
        }
    }
}

#[test]
fn classify_is_invariant_under_point_fixing_changes() {
    use cicert_core::constants::DegreeTuple;
    use cicert_core::singularity::{classify, PointedTuple};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..8 {
        // random pair of quadrics vanishing at (1:0:...:0) in 5 variables,
        // with f2's linear level zeroed so the point is singular
        let n = 5;
        let field = FieldKind::Rational;
        let gen = |rng: &mut ChaCha8Rng, kill_linear: bool| {
            let mut p = SparsePoly::zero(n, field);
            for a in 1..n {
                for b in a..n {
                    let mut e = vec![0u32; n];
                    e[a] += 1;
                    e[b] += 1;
                    p.add_term(Monomial(e), ExactScalar::from_int(rng.gen_range(-4..=4)));
                }
            }
            if !kill_linear {
                let mut e = vec![0u32; n];
                e[0] = 1;
                e[1] = 1;
                p.add_term(Monomial(e), ExactScalar::from_int(1));
            }
            p
        };
        let f1 = gen(&mut rng, false);
        let f2 = gen(&mut rng, true);
        let point: Vec<ExactScalar> = std::iter::once(1i64)
            .chain(std::iter::repeat_n(0, n - 1))
            .map(ExactScalar::from_int)
            .collect();
        let d = DegreeTuple::new(vec![2, 2]).unwrap();
        let pt = PointedTuple::new(d.clone(), vec![f1.clone(), f2.clone()], point.clone()).unwrap();
        let base = classify(&pt).unwrap();

        // coordinate change fixing the point: x0 -> y0 + random linear in
        // the others, x_j -> random unimodular mix of y_1..y_4
        let mut images: Vec<SparsePoly> = Vec::new();
        {
            let mut img0 = SparsePoly::variable(0, n, field);
            for b in 1..n {
                img0.add_term(Monomial::var(b, n), ExactScalar::from_int(rng.gen_range(-3..=3)));
            }
            images.push(img0);
            // unit upper-triangular on the remaining variables
            for j in 1..n {
                let mut img = SparsePoly::variable(j, n, field);
                for b in (j + 1)..n {
                    img.add_term(Monomial::var(b, n), ExactScalar::from_int(rng.gen_range(-3..=3)));
                }
                images.push(img);
            }
        }
        let g1 = f1.compose(&images);
        let g2 = f2.compose(&images);
        // invertible mixing of the equal-degree equations
        let h1 = &g1 + &g2.scale(&ExactScalar::from_int(rng.gen_range(-2..=2)));
        let h2 = g2;
        let pt2 = PointedTuple::new(d, vec![h1, h2], point).unwrap();
        let changed = classify(&pt2).unwrap();

        assert_eq!(base.l, changed.l, "trial {trial}");
        assert_eq!(
            base.tuple_rank_def12, changed.tuple_rank_def12,
            "trial {trial}"
        );
        assert_eq!(
            base.tuple_rank_tangent, changed.tuple_rank_tangent,
            "trial {trial}"
        );
    }
}

#[test]
fn sequence_regularity_is_permutation_stable() {
    use cicert_core::regularity::{is_regular_sequence, DEFAULT_PRIME};
    let f = FieldKind::Prime(DEFAULT_PRIME);
    let t = |e: &[u32], c: i64| (Monomial(e.to_vec()), f.from_i64(c));
    let members = vec![
        SparsePoly::from_terms(4, f, vec![t(&[2, 0, 0, 0], 1), t(&[0, 1, 1, 0], 3)]),
        SparsePoly::from_terms(4, f, vec![t(&[0, 2, 0, 0], 1), t(&[1, 0, 0, 1], -2)]),
        SparsePoly::from_terms(4, f, vec![t(&[0, 0, 3, 0], 2), t(&[1, 1, 0, 1], 5)]),
    ];
    let base = is_regular_sequence(&members, 3, DEFAULT_PRIME).unwrap();
    assert!(base.regular);
    let mut permuted = members.clone();
    permuted.swap(0, 2);
    assert!(is_regular_sequence(&permuted, 3, DEFAULT_PRIME).unwrap().regular);
    permuted.swap(1, 2);
    assert!(is_regular_sequence(&permuted, 3, DEFAULT_PRIME).unwrap().regular);
}

#[test]
fn tangent_rank_bounds_against_single_forms() {
    // the tangent-restricted tuple rank never exceeds any single restricted
    // form's rank, and restriction to the tangent space (codimension k - l
    // in the ambient chart) costs each form at most 2(k - l) of rank
    use cicert_core::constants::DegreeTuple;
    use cicert_core::matrix::SymMatrix;
    use cicert_core::singularity::{classify, local_geometry, PointedTuple};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..6 {
        // k = 2 quadrics in 5 variables, f2 without a linear level
        let n = 5;
        let field = FieldKind::Rational;
        let mut make = |kill_linear: bool| {
            let mut p = SparsePoly::zero(n, field);
            for a in 1..n {
                for b in a..n {
                    let mut e = vec![0u32; n];
                    e[a] += 1;
                    e[b] += 1;
                    p.add_term(Monomial(e), ExactScalar::from_int(rng.gen_range(-4..=4)));
                }
            }
            if !kill_linear {
                let mut e = vec![0u32; n];
                e[0] = 1;
                e[1] = 1;
                p.add_term(Monomial(e), ExactScalar::from_int(1));
            }
            p
        };
        let f1 = make(false);
        let f2 = make(true);
        let point: Vec<ExactScalar> = std::iter::once(1i64)
            .chain(std::iter::repeat_n(0, n - 1))
            .map(ExactScalar::from_int)
            .collect();
        let d = DegreeTuple::new(vec![2, 2]).unwrap();
        let pt = PointedTuple::new(d, vec![f1, f2], point).unwrap();
        let geo = local_geometry(&pt);
        if geo.l == 0 {
            continue;
        }
        let rep = classify(&pt).unwrap();
        let k = 2;
        let tangent_rank = rep.tuple_rank_tangent.unwrap();
        for q in &geo.quadratic {
            let restricted: SymMatrix = q.restrict(&geo.tangent_basis);
            let single = restricted.rank();
            assert!(tangent_rank <= single);
            assert!(single + 2 * (k - geo.l) >= q.rank());
        }
    }
}
