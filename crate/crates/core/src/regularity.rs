//! The ordered sequence of restricted homogeneous components and the
//! regular-sequence / codimension checks on explicit inputs.
//!
//! The universally quantified subspace conditions are handled by sampling:
//! a failing subspace is a certificate of violation, while passing samples
//! are evidence only, and the report says which. Random subspaces come from
//! a seeded generator whose seed is always echoed.

use crate::constants::epsilon;
use crate::groebner::{buchberger, GroebnerBasis};
use crate::matrix::rank_of_rows;
use crate::poly::SparsePoly;
use crate::quad::{quadric_ci_report, QuadFormTuple};
use crate::scalar::{ExactScalar, FieldKind};
use crate::singularity::{local_geometry, LocalGeometry, PointedTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Default prime for finite-field decision work.
pub const DEFAULT_PRIME: u64 = 32003;
/// Second prime used by agreement checks.
pub const SECOND_PRIME: u64 = 65537;

/// Desk-scale guard: inputs beyond this are rejected rather than ground
/// through a Groebner blow-up.
pub const MAX_SEQUENCE_LEN: usize = 64;
pub const MAX_RESTRICTED_VARS: usize = 24;

/// How an ideal dimension was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Confidence {
    ExactRational,
    SinglePrime,
    MultiPrimeAgree,
}

/// Projective dimension of an ideal with the prime it was computed over.
#[derive(Clone, Debug, Serialize)]
pub struct IdealDimResult {
    pub dimension: i64,
    pub prime_used: u64,
    pub confidence: Confidence,
}

/// One member of the component sequence: the polynomial `f_{i,j}` restricted
/// to the projectivized tangent space, keyed by `(degree j, poly index i)`.
#[derive(Clone, Debug)]
pub struct SequenceMember {
    pub poly_index: usize,
    pub degree: usize,
    pub poly: SparsePoly,
}

/// The full ordered sequence; `(i1,j1)` precedes `(i2,j2)` iff `j1 < j2`,
/// or `j1 = j2` and `i1 < i2`.
#[derive(Clone, Debug)]
pub struct ComponentSequence {
    pub n_vars: usize,
    pub members: Vec<SequenceMember>,
}

impl ComponentSequence {
    /// The sequence with the last `m` members removed.
    pub fn truncate(&self, m: usize) -> &[SequenceMember] {
        &self.members[..self.members.len().saturating_sub(m)]
    }
}

/// Builds the sequence of homogeneous components of degree >= 2 restricted
/// to the tangent space at the marked point, in the `(j, i)` order. A full
/// sequence always has exactly `M` members; this is asserted.
pub fn build_sequence(pt: &PointedTuple) -> crate::Result<(ComponentSequence, LocalGeometry)> {
    let geo = local_geometry(pt);
    build_sequence_with(pt, geo)
}

fn build_sequence_with(
    pt: &PointedTuple,
    geo: LocalGeometry,
) -> crate::Result<(ComponentSequence, LocalGeometry)> {
    let m_total: usize = pt.degrees().degrees().iter().map(|d| d - 1).sum();
    if m_total > MAX_SEQUENCE_LEN {
        return Err(crate::Error::DeskScaleLimit(format!(
            "sequence of {m_total} members exceeds the cap of {MAX_SEQUENCE_LEN}"
        )));
    }
    let n_vars = geo.tangent_basis.len();
    if n_vars > MAX_RESTRICTED_VARS {
        return Err(crate::Error::DeskScaleLimit(format!(
            "{n_vars} tangent variables exceed the cap of {MAX_RESTRICTED_VARS}"
        )));
    }
    // members are taken in the original (un-permuted) polynomial order
    let inverse: Vec<usize> = {
        let mut inv = vec![0; geo.permutation.len()];
        for (slot, &orig) in geo.permutation.iter().enumerate() {
            inv[orig] = slot;
        }
        inv
    };
    let dmax = pt.degrees().max_degree();
    let mut members = Vec::with_capacity(m_total);
    for j in 2..=dmax {
        for (i, &d) in pt.degrees().degrees().iter().enumerate() {
            if j <= d {
                let local = &geo.local[inverse[i]];
                let component = local.graded_part(j);
                let restricted = component.restrict_to_subspace(&geo.tangent_basis)?;
                members.push(SequenceMember {
                    poly_index: i,
                    degree: j,
                    poly: restricted,
                });
            }
        }
    }
    assert_eq!(members.len(), pt.m(), "a full sequence has M members");
    Ok((ComponentSequence { n_vars, members }, geo))
}

/// Verdict of a regular-sequence check over one prime.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    /// 1-based index of the first member whose prefix fails.
    pub first_failure: Option<usize>,
    /// Projective dimension after each prefix.
    pub prefix_dims: Vec<i64>,
    pub prime: u64,
}

/// A sequence of homogeneous polynomials is regular iff every length-`t`
/// prefix cuts the ambient projective space down to dimension exactly
/// `ambient_proj_dim - t`. Decided over `GF(prime)` via the leading-term
/// ideal of an incrementally extended Groebner basis.
pub fn is_regular_sequence(
    members: &[SparsePoly],
    ambient_proj_dim: usize,
    prime: u64,
) -> crate::Result<RegularityVerdict> {
    let mut gb: Option<GroebnerBasis> = None;
    let mut prefix_dims = Vec::with_capacity(members.len());
    for (idx, f) in members.iter().enumerate() {
        let t = idx + 1;
        if f.is_zero() {
            return Ok(RegularityVerdict {
                regular: false,
                first_failure: Some(t),
                prefix_dims,
                prime,
            });
        }
        let fp = match f.field() {
            FieldKind::Prime(p) if p == prime => f.clone(),
            FieldKind::Rational => f.reduce_mod(prime)?,
            FieldKind::Prime(_) => {
                return Err(crate::Error::Input(
                    "sequence members live in a different prime field".into(),
                ))
            }
        };
        let next = match &gb {
            None => buchberger(&[fp]),
            Some(g) => g.extend(&fp),
        };
        let dim = next.projective_dimension();
        gb = Some(next);
        prefix_dims.push(dim);
        let expected = ambient_proj_dim as i64 - t as i64;
        if dim != expected.max(-1) || expected < -1 {
            return Ok(RegularityVerdict {
                regular: false,
                first_failure: Some(t),
                prefix_dims,
                prime,
            });
        }
    }
    Ok(RegularityVerdict {
        regular: true,
        first_failure: None,
        prefix_dims,
        prime,
    })
}

/// Outcome of one sampled subspace.
#[derive(Clone, Debug, Serialize)]
pub struct SampleResult {
    pub sample: usize,
    pub pass: bool,
    pub first_failure: Option<usize>,
    /// Dimensions observed (regularity prefixes, or the single system
    /// dimension for the codimension condition).
    pub dims: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SampledVerdict {
    /// Some subspace failed: a certificate that the for-all condition is
    /// violated.
    Violated { sample: usize },
    /// Every sampled subspace passed; evidence, not a proof.
    NoCounterexample { samples: usize },
    /// Nothing was checked (zero samples, or an empty truncated sequence).
    Vacuous,
}

/// Report of a sampled regularity / codimension check.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub condition: String,
    pub l: usize,
    pub truncation: usize,
    pub subspace_codim: usize,
    pub seed: u64,
    pub prime: u64,
    pub samples: Vec<SampleResult>,
    pub verdict: SampledVerdict,
    /// Extra notes (irreducibility caveats and the like).
    pub notes: Vec<String>,
}

fn random_subspace_basis(
    rng: &mut ChaCha8Rng,
    ambient: usize,
    dim: usize,
) -> Vec<Vec<ExactScalar>> {
    loop {
        let basis: Vec<Vec<ExactScalar>> = (0..dim)
            .map(|_| {
                (0..ambient)
                    .map(|_| ExactScalar::from_int(rng.gen_range(-10..=10)))
                    .collect()
            })
            .collect();
        if rank_of_rows(&basis, FieldKind::Rational) == dim {
            return basis;
        }
    }
}

struct TruncatedCheck {
    condition: &'static str,
    truncation: usize,
    subspace_codim: usize,
}

/// Shared driver for the three truncated-sequence conditions.
fn check_truncated(
    pt: &PointedTuple,
    spec: TruncatedCheck,
    geo: LocalGeometry,
    samples: usize,
    explicit: Option<&[Vec<Vec<ExactScalar>>]>,
    seed: u64,
    prime: u64,
) -> crate::Result<RegularityReport> {
    let (seq, geo) = build_sequence_with(pt, geo)?;
    let l = geo.l;
    let truncated: Vec<&SparsePoly> = seq
        .truncate(spec.truncation)
        .iter()
        .map(|m| &m.poly)
        .collect();
    // members live on P(T_oF), of projective dimension M + l - 1
    let ambient_proj = pt.m() + l - 1;
    if spec.subspace_codim > ambient_proj {
        return Err(crate::Error::Input(format!(
            "subspace codimension {} exceeds the ambient projective dimension {ambient_proj}",
            spec.subspace_codim
        )));
    }
    let pi_dim = ambient_proj - spec.subspace_codim;
    let mut report = RegularityReport {
        condition: spec.condition.to_string(),
        l,
        truncation: spec.truncation,
        subspace_codim: spec.subspace_codim,
        seed,
        prime,
        samples: Vec::new(),
        verdict: SampledVerdict::Vacuous,
        notes: Vec::new(),
    };
    if truncated.is_empty() {
        report
            .notes
            .push("truncated sequence is empty; nothing to check".into());
        return Ok(report);
    }
    let explicit_count = explicit.map_or(0, |e| e.len());
    if samples + explicit_count == 0 {
        report.notes.push("vacuous, 0 samples".into());
        return Ok(report);
    }
    // bases are drawn sequentially from the seed, so reports stay
    // deterministic; the restriction and Groebner work per sample is
    // independent and fans out
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bases: Vec<Vec<Vec<ExactScalar>>> = explicit.unwrap_or(&[]).to_vec();
    let _ = explicit_count;
    for _ in 0..samples {
        bases.push(random_subspace_basis(&mut rng, seq.n_vars, pi_dim + 1));
    }
    report.samples = bases
        .par_iter()
        .enumerate()
        .map(|(idx, basis)| -> crate::Result<SampleResult> {
            let restricted: Vec<SparsePoly> = truncated
                .iter()
                .map(|p| p.restrict_to_subspace(basis))
                .collect::<crate::Result<Vec<_>>>()?;
            let v = is_regular_sequence(&restricted, pi_dim, prime)?;
            Ok(SampleResult {
                sample: idx,
                pass: v.regular,
                first_failure: v.first_failure,
                dims: v.prefix_dims,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    report.verdict = match report.samples.iter().find(|s| !s.pass) {
        Some(s) => SampledVerdict::Violated { sample: s.sample },
        None => SampledVerdict::NoCounterexample {
            samples: report.samples.len(),
        },
    };
    Ok(report)
}

/// Non-singular-point regularity: truncate by `k + eps(k) + 3`, restrict to
/// subspaces of codimension `k + eps(k) - 1`.
pub fn check_r1(
    pt: &PointedTuple,
    samples: usize,
    explicit: Option<&[Vec<Vec<ExactScalar>>]>,
    seed: u64,
    prime: u64,
) -> crate::Result<RegularityReport> {
    let geo = local_geometry(pt);
    if geo.l != 0 {
        return Err(crate::Error::WrongSingularityType {
            condition: "R1".into(),
            expected: "2^0 (non-singular)".into(),
            actual: geo.l,
        });
    }
    let k = pt.k();
    let eps = epsilon(k);
    check_truncated(
        pt,
        TruncatedCheck {
            condition: "R1",
            truncation: k + eps + 3,
            subspace_codim: k + eps - 1,
        },
        geo,
        samples,
        explicit,
        seed,
        prime,
    )
}

/// Quadratic-point regularity: truncate by 4, restrict to hyperplanes.
pub fn check_r2(
    pt: &PointedTuple,
    samples: usize,
    explicit: Option<&[Vec<Vec<ExactScalar>>]>,
    seed: u64,
    prime: u64,
) -> crate::Result<RegularityReport> {
    let geo = local_geometry(pt);
    if geo.l != 1 {
        return Err(crate::Error::WrongSingularityType {
            condition: "R2".into(),
            expected: "2^1 (quadratic)".into(),
            actual: geo.l,
        });
    }
    check_truncated(
        pt,
        TruncatedCheck {
            condition: "R2",
            truncation: 4,
            subspace_codim: 1,
        },
        geo,
        samples,
        explicit,
        seed,
        prime,
    )
}

/// Multi-quadratic-point regularity: truncate by `max(eps(k) + 4 - l, 0)`,
/// restrict to subspaces of codimension `eps(k)`.
pub fn check_r3_2(
    pt: &PointedTuple,
    samples: usize,
    explicit: Option<&[Vec<Vec<ExactScalar>>]>,
    seed: u64,
    prime: u64,
) -> crate::Result<RegularityReport> {
    let geo = local_geometry(pt);
    if geo.l < 2 {
        return Err(crate::Error::WrongSingularityType {
            condition: "R3.2".into(),
            expected: "2^l, l >= 2".into(),
            actual: geo.l,
        });
    }
    let eps = epsilon(pt.k());
    let truncation = (eps + 4).saturating_sub(geo.l);
    check_truncated(
        pt,
        TruncatedCheck {
            condition: "R3.2",
            truncation,
            subspace_codim: eps,
        },
        geo,
        samples,
        explicit,
        seed,
        prime,
    )
}

/// Codimension condition at a multi-quadratic point: on sampled subspaces
/// `P` of codimension `eps(k)` through the point inside the embedded
/// tangent space, the system `{f_i|_P} + {f_{i,2}|_P : d_i >= 3}` must cut
/// codimension exactly `k + #{i : d_i >= 3}`.
///
/// Irreducibility and reducedness are not decided in general; when every
/// degree is 2 the rank criterion for complete intersections of quadrics is
/// applied and reported.
pub fn check_r3_1(
    pt: &PointedTuple,
    samples: usize,
    seed: u64,
    prime: u64,
) -> crate::Result<RegularityReport> {
    let geo = local_geometry(pt);
    let l = geo.l;
    if l < 2 {
        return Err(crate::Error::WrongSingularityType {
            condition: "R3.1".into(),
            expected: "2^l, l >= 2".into(),
            actual: geo.l,
        });
    }
    let k = pt.k();
    let eps = epsilon(k);
    let k_ge3 = pt.degrees().degrees().iter().filter(|&&d| d >= 3).count();
    let expected_codim = k + k_ge3;
    // the embedded tangent space has projective dimension M + l
    let tangent_proj_dim = pt.m() + l;
    if eps > tangent_proj_dim {
        return Err(crate::Error::Input(
            "subspace codimension exceeds the tangent space dimension".into(),
        ));
    }
    let p_dim = tangent_proj_dim - eps;
    if expected_codim > p_dim {
        return Err(crate::Error::Input(format!(
            "expected codimension {expected_codim} exceeds dim P = {p_dim}; \
             the input is below the scale the condition is stated for"
        )));
    }
    let t_vars = p_dim + 1;
    if t_vars > MAX_RESTRICTED_VARS {
        return Err(crate::Error::DeskScaleLimit(format!(
            "{t_vars} subspace variables exceed the cap of {MAX_RESTRICTED_VARS}"
        )));
    }

    let mut report = RegularityReport {
        condition: "R3.1".to_string(),
        l,
        truncation: 0,
        subspace_codim: eps,
        seed,
        prime,
        samples: Vec::new(),
        verdict: SampledVerdict::Vacuous,
        notes: Vec::new(),
    };
    if samples == 0 {
        report.notes.push("vacuous, 0 samples".into());
        return Ok(report);
    }

    let n_hom = pt.m() + k + 1;
    let n_aff = n_hom - 1;
    let chart = pt.chart();
    let affine_point = pt.chart_affine_coords();
    let field = FieldKind::Rational;
    let quadratic_parts: Vec<(usize, SparsePoly)> = {
        let local = pt.localize();
        pt.degrees()
            .degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d >= 3)
            .map(|(i, _)| (i, local[i].graded_part(2)))
            .collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_quadrics_note = false;
    for s in 0..samples {
        // W': a codim-eps subspace of the affine tangent directions
        let sub_dim = geo.tangent_basis.len() - eps;
        let mix = random_subspace_basis(&mut rng, geo.tangent_basis.len(), sub_dim);
        let w_basis: Vec<Vec<ExactScalar>> = mix
            .iter()
            .map(|coeffs| {
                (0..n_aff)
                    .map(|j| {
                        let mut acc = field.zero();
                        for (b, c) in coeffs.iter().enumerate() {
                            acc = &acc + &(c * &geo.tangent_basis[b][j]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();

        // homogeneous parametrization of P: t_0 -> the point, t_b -> the
        // direction w_b placed in the chart-at-zero slot
        let images: Vec<SparsePoly> = {
            let mut images = Vec::with_capacity(n_hom);
            let mut aff_idx = 0;
            let pc = &pt.point()[chart];
            for j in 0..n_hom {
                let mut img = SparsePoly::zero(t_vars, field);
                if j == chart {
                    img.add_term(
                        crate::poly::Monomial::var(0, t_vars),
                        &pt.point()[j] / pc,
                    );
                } else {
                    img.add_term(
                        crate::poly::Monomial::var(0, t_vars),
                        affine_point[aff_idx].clone(),
                    );
                    for (b, w) in w_basis.iter().enumerate() {
                        img.add_term(
                            crate::poly::Monomial::var(b + 1, t_vars),
                            w[aff_idx].clone(),
                        );
                    }
                    aff_idx += 1;
                }
                images.push(img);
            }
            images
        };

        let mut system: Vec<SparsePoly> = pt.polys().iter().map(|f| f.compose(&images)).collect();
        for (_, q) in &quadratic_parts {
            // quadratic parts are forms in the affine coordinates read as
            // homogeneous coordinates adapted to the point; restricted to P
            // they become forms in t_1..t_{p_dim}
            let restricted = q.restrict_to_subspace(&w_basis)?;
            system.push(shift_vars(&restricted, 1, t_vars));
        }

        let reduced: Vec<SparsePoly> = system
            .iter()
            .map(|f| f.reduce_mod(prime))
            .collect::<crate::Result<Vec<_>>>()?;
        let dim = buchberger(&reduced).projective_dimension();
        let codim = p_dim as i64 - dim;
        let pass = codim == expected_codim as i64;
        report.samples.push(SampleResult {
            sample: s,
            pass,
            first_failure: None,
            dims: vec![dim],
        });

        if k_ge3 == 0 && !all_quadrics_note {
            all_quadrics_note = true;
            // all degrees are 2: the system is a tuple of quadrics and the
            // rank criterion decides irreducibility
            let matrices: Vec<_> = system
                .iter()
                .map(crate::matrix::SymMatrix::from_quadratic_poly)
                .collect::<crate::Result<Vec<_>>>()?;
            let tuple = QuadFormTuple::new(matrices)?;
            let ci = quadric_ci_report(&tuple);
            report.notes.push(if ci.irreducible_factorial {
                format!(
                    "all degrees are 2: rank criterion certifies irreducible factorial (tuple rank {})",
                    ci.tuple_rank
                )
            } else {
                format!(
                    "all degrees are 2: rank criterion inconclusive (tuple rank {})",
                    ci.tuple_rank
                )
            });
        }
    }
    if k_ge3 > 0 {
        report
            .notes
            .push("codimension verified; irreducibility not certified".into());
    }
    report.verdict = match report.samples.iter().find(|s| !s.pass) {
        Some(s) => SampledVerdict::Violated { sample: s.sample },
        None => SampledVerdict::NoCounterexample {
            samples: report.samples.len(),
        },
    };
    Ok(report)
}

/// Re-embeds a polynomial in `new_n` variables with indices shifted up by
/// `offset`.
fn shift_vars(p: &SparsePoly, offset: usize, new_n: usize) -> SparsePoly {
    SparsePoly::from_terms(
        new_n,
        p.field(),
        p.terms().map(|(m, c)| {
            let mut e = vec![0u32; new_n];
            for (i, &x) in m.0.iter().enumerate() {
                e[i + offset] = x;
            }
            (crate::poly::Monomial(e), c.clone())
        }),
    )
}

/// Projective ideal dimension over one prime.
pub fn single_prime_dimension(gens: &[SparsePoly], prime: u64) -> crate::Result<IdealDimResult> {
    let reduced: Vec<SparsePoly> = gens
        .iter()
        .map(|g| g.reduce_mod(prime))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(IdealDimResult {
        dimension: buchberger(&reduced).projective_dimension(),
        prime_used: prime,
        confidence: Confidence::SinglePrime,
    })
}

/// Runs an ideal-dimension computation over two primes and escalates to an
/// exact rational run on disagreement.
pub fn two_prime_dimension(gens: &[SparsePoly]) -> crate::Result<IdealDimResult> {
    let d1 = {
        let r: Vec<SparsePoly> = gens
            .iter()
            .map(|g| g.reduce_mod(DEFAULT_PRIME))
            .collect::<crate::Result<Vec<_>>>()?;
        buchberger(&r).projective_dimension()
    };
    let d2 = {
        let r: Vec<SparsePoly> = gens
            .iter()
            .map(|g| g.reduce_mod(SECOND_PRIME))
            .collect::<crate::Result<Vec<_>>>()?;
        buchberger(&r).projective_dimension()
    };
    if d1 == d2 {
        Ok(IdealDimResult {
            dimension: d1,
            prime_used: DEFAULT_PRIME,
            confidence: Confidence::MultiPrimeAgree,
        })
    } else {
        Ok(IdealDimResult {
            dimension: buchberger(gens).projective_dimension(),
            prime_used: 0,
            confidence: Confidence::ExactRational,
        })
    }
}
