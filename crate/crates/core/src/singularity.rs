//! Classification of a point on an explicit complete intersection:
//! non-singular or multi-quadratic of type `2^l`, with the two tuple ranks
//! the genericity conditions consume.

use crate::constants::{epsilon, DegreeTuple};
use crate::matrix::{express_in_span, kernel_basis, rank_of_rows, SymMatrix};
use crate::poly::SparsePoly;
use crate::quad::{QuadFormTuple, RankConfidence};
use crate::scalar::{ExactScalar, FieldKind};
use serde::Serialize;

/// A tuple of homogeneous polynomials together with a marked projective
/// point they all vanish at.
#[derive(Clone, Debug)]
pub struct PointedTuple {
    degrees: DegreeTuple,
    polys: Vec<SparsePoly>,
    point: Vec<ExactScalar>,
}

impl PointedTuple {
    pub fn new(
        degrees: DegreeTuple,
        polys: Vec<SparsePoly>,
        point: Vec<ExactScalar>,
    ) -> crate::Result<PointedTuple> {
        let k = degrees.k();
        let n_hom = degrees.m() + k + 1;
        if polys.len() != k {
            return Err(crate::Error::Input(format!(
                "expected {k} polynomials, got {}",
                polys.len()
            )));
        }
        if point.len() != n_hom {
            return Err(crate::Error::Input(format!(
                "point must have {n_hom} projective coordinates, got {}",
                point.len()
            )));
        }
        if point.iter().all(|c| c.is_zero()) {
            return Err(crate::Error::Input("projective point cannot be zero".into()));
        }
        if point.iter().any(|c| c.field() != FieldKind::Rational) {
            return Err(crate::Error::Input(
                "points are accepted in rational projective coordinates only".into(),
            ));
        }
        for (i, (f, &d)) in polys.iter().zip(degrees.degrees()).enumerate() {
            if f.n_vars() != n_hom {
                return Err(crate::Error::Input(format!(
                    "f_{i} has {} variables, expected {n_hom}",
                    f.n_vars()
                )));
            }
            if !f.is_homogeneous_of(d) {
                return Err(crate::Error::Input(format!(
                    "f_{i} is not homogeneous of degree {d}"
                )));
            }
            if !f.eval(&point).is_zero() {
                return Err(crate::Error::PointOffVariety { index: i });
            }
        }
        Ok(PointedTuple {
            degrees,
            polys,
            point,
        })
    }

    pub fn degrees(&self) -> &DegreeTuple {
        &self.degrees
    }

    pub fn k(&self) -> usize {
        self.degrees.k()
    }

    pub fn m(&self) -> usize {
        self.degrees.m()
    }

    pub fn polys(&self) -> &[SparsePoly] {
        &self.polys
    }

    pub fn point(&self) -> &[ExactScalar] {
        &self.point
    }

    /// Index of the affine chart used by `localize`: the first coordinate
    /// of the point that is nonzero.
    pub fn chart(&self) -> usize {
        self.point.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// The point's affine coordinates in that chart, for the variables kept
    /// by `localize` (all original coordinates except the chart one).
    pub fn chart_affine_coords(&self) -> Vec<ExactScalar> {
        let c = self.chart();
        let pc = &self.point[c];
        self.point
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != c)
            .map(|(_, pj)| pj / pc)
            .collect()
    }

    /// Dehomogenizes at the chart coordinate and translates the point to
    /// the origin. Every output vanishes at 0.
    pub fn localize(&self) -> Vec<SparsePoly> {
        let n_hom = self.m() + self.k() + 1;
        let n_aff = n_hom - 1;
        let c = self.chart();
        let a = self.chart_affine_coords();
        let field = FieldKind::Rational;
        // variable j of the homogeneous ring maps to z_{idx} + a_{idx}, the
        // chart variable to 1
        let mut images = Vec::with_capacity(n_hom);
        let mut idx = 0;
        for j in 0..n_hom {
            if j == c {
                images.push(SparsePoly::constant(n_aff, field.one()));
            } else {
                let mut img = SparsePoly::variable(idx, n_aff, field);
                img.add_term(crate::poly::Monomial::one(n_aff), a[idx].clone());
                images.push(img);
                idx += 1;
            }
        }
        let local: Vec<SparsePoly> = self.polys.iter().map(|f| f.compose(&images)).collect();
        for (i, g) in local.iter().enumerate() {
            debug_assert!(
                g.eval(&vec![field.zero(); n_aff]).is_zero(),
                "localized f_{i} must vanish at the origin"
            );
        }
        local
    }
}

/// What `classify` found at the marked point.
#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    pub k: usize,
    /// `l = k - dim<linear parts>`; 0 means non-singular.
    pub l: usize,
    /// Reordering applied so that the last `k - l` polynomials have
    /// independent linear parts: dependent indices first, in input order.
    pub permutation: Vec<usize>,
    /// Rank of the reduced quadratic tuple `(f*_{i,2})`, unrestricted.
    pub tuple_rank_def12: Option<usize>,
    /// Rank of all `k` quadratic parts restricted to the tangent space.
    pub tuple_rank_tangent: Option<usize>,
    pub def12_confidence: Option<RankConfidence>,
    pub tangent_confidence: Option<RankConfidence>,
    pub mq1_threshold: Option<usize>,
    pub mq2_threshold: Option<usize>,
    /// True when `l = 0` (vacuous) or the reduced-tuple rank clears its
    /// threshold.
    pub mq1_pass: bool,
    /// Evaluated only for `l >= 2`.
    pub mq2_pass: Option<bool>,
}

/// Internal coordinate data `classify` shares with the regularity checks.
#[derive(Clone, Debug)]
pub struct LocalGeometry {
    /// Localized (affine) polynomials, reordered: dependent first.
    pub local: Vec<SparsePoly>,
    pub permutation: Vec<usize>,
    pub l: usize,
    /// Basis of the tangent space `{all linear parts = 0}` inside the
    /// affine chart; length `M + l`.
    pub tangent_basis: Vec<Vec<ExactScalar>>,
    /// Quadratic-part matrices of the reordered polynomials.
    pub quadratic: Vec<SymMatrix>,
    /// Reduced quadratic matrices `f*_{i,2}` for the `l` dependent ones.
    pub reduced_quadratic: Vec<SymMatrix>,
}

pub fn local_geometry(pt: &PointedTuple) -> LocalGeometry {
    let k = pt.k();
    let local_in = pt.localize();
    let n_aff = pt.m() + k;
    let field = FieldKind::Rational;
    let linear_vec = |f: &SparsePoly| -> Vec<ExactScalar> {
        let lin = f.graded_part(1);
        (0..n_aff)
            .map(|j| lin.coeff(&crate::poly::Monomial::var(j, n_aff)))
            .collect()
    };
    let linears: Vec<Vec<ExactScalar>> = local_in.iter().map(linear_vec).collect();

    // greedy pivoting: keep the polynomials whose linear part grows the span
    let mut independent: Vec<usize> = Vec::new();
    let mut span: Vec<Vec<ExactScalar>> = Vec::new();
    for (i, lv) in linears.iter().enumerate() {
        span.push(lv.clone());
        if rank_of_rows(&span, field) == span.len() {
            independent.push(i);
        } else {
            span.pop();
        }
    }
    let dependent: Vec<usize> = (0..k).filter(|i| !independent.contains(i)).collect();
    let l = dependent.len();
    let permutation: Vec<usize> = dependent.iter().chain(&independent).copied().collect();

    let local: Vec<SparsePoly> = permutation.iter().map(|&i| local_in[i].clone()).collect();
    let quadratic: Vec<SymMatrix> = local
        .iter()
        .map(|f| SymMatrix::from_quadratic_poly(&f.graded_part(2)).expect("rational field"))
        .collect();

    // lambda relations: f_{i,1} = sum_j lambda_{i,j} f_{j,1} over the
    // independent set, then f*_{i,2} = f_{i,2} - sum lambda_{i,j} f_{j,2}
    let ind_rows: Vec<Vec<ExactScalar>> =
        independent.iter().map(|&j| linears[j].clone()).collect();
    let mut reduced_quadratic = Vec::with_capacity(l);
    for (slot, &i) in dependent.iter().enumerate() {
        let lambda = express_in_span(&ind_rows, &linears[i], field)
            .expect("dependent linear part lies in the independent span");
        let mut q = quadratic[slot].clone();
        for (jj, lam) in lambda.iter().enumerate() {
            if !lam.is_zero() {
                // independent j sits at reordered slot l + jj
                q = q.linear_combination(&field.one(), &quadratic[l + jj], &-lam);
            }
        }
        reduced_quadratic.push(q);
    }

    let tangent_basis = kernel_basis(&ind_rows, n_aff, field);
    debug_assert_eq!(tangent_basis.len(), pt.m() + l);

    LocalGeometry {
        local,
        permutation,
        l,
        tangent_basis,
        quadratic,
        reduced_quadratic,
    }
}

/// Classifies the marked point and evaluates the two rank conditions.
///
/// Tuples of three or more forms are decided through the minor-ideal
/// sweep, which is capped at 12 ambient variables; larger inputs are
/// rejected as beyond desk scale.
pub fn classify(pt: &PointedTuple) -> crate::Result<SingularityReport> {
    let k = pt.k();
    let geo = local_geometry(pt);
    let l = geo.l;
    let eps = epsilon(k);
    let mq1_threshold = 2 * l + 4 * k + 2 * eps - 1;
    let mq2_threshold = 10 * k * k + 8 * k + 2 * eps + 5;

    if l == 0 {
        return Ok(SingularityReport {
            k,
            l,
            permutation: geo.permutation,
            tuple_rank_def12: None,
            tuple_rank_tangent: None,
            def12_confidence: None,
            tangent_confidence: None,
            mq1_threshold: None,
            mq2_threshold: Some(mq2_threshold),
            mq1_pass: true,
            mq2_pass: None,
        });
    }

    let n_aff = pt.m() + k;
    if l >= 3 && n_aff > 12 {
        return Err(crate::Error::DeskScaleLimit(format!(
            "reduced tuple of {l} forms in {n_aff} variables exceeds the minor-sweep cap"
        )));
    }
    let tangent_dim = geo.tangent_basis.len();
    if k >= 3 && tangent_dim > 12 {
        return Err(crate::Error::DeskScaleLimit(format!(
            "tangent tuple of {k} forms in {tangent_dim} variables exceeds the minor-sweep cap"
        )));
    }

    let def12_tuple = QuadFormTuple::new(geo.reduced_quadratic.clone()).expect("l >= 1");
    let def12 = def12_tuple.tuple_rank_detailed(false);

    let restricted: Vec<SymMatrix> = geo
        .quadratic
        .iter()
        .map(|q| q.restrict(&geo.tangent_basis))
        .collect();
    let tangent_tuple = QuadFormTuple::new(restricted).expect("k >= 1");
    let tangent = tangent_tuple.tuple_rank_detailed(false);

    Ok(SingularityReport {
        k,
        l,
        permutation: geo.permutation,
        tuple_rank_def12: Some(def12.rank),
        tuple_rank_tangent: Some(tangent.rank),
        def12_confidence: Some(def12.confidence),
        tangent_confidence: Some(tangent.confidence),
        mq1_threshold: Some(mq1_threshold),
        mq2_threshold: Some(mq2_threshold),
        mq1_pass: def12.rank >= mq1_threshold,
        mq2_pass: if l >= 2 {
            Some(tangent.rank >= mq2_threshold)
        } else {
            None
        },
    })
}

/// Classifies many marked points in parallel; each entry succeeds or
/// fails independently.
pub fn classify_batch(points: &[PointedTuple]) -> Vec<crate::Result<SingularityReport>> {
    use rayon::prelude::*;
    points.par_iter().map(classify).collect()
}

/// Verdict of the marked-complete-intersection level conditions.
#[derive(Clone, Debug, Serialize)]
pub struct MarkedLevelVerdict {
    pub l_x: usize,
    pub c_x: usize,
    pub k: usize,
    pub type_matches: bool,
    /// `c_X >= l_X + 4`.
    pub level_ok: bool,
    /// `rk(o in X) >= 2 l_X + c_X - 1`, on the reduced-tuple rank.
    pub rank_ok: bool,
    pub rank_required: usize,
    pub rank_found: Option<usize>,
    /// Set when the rank threshold already exceeds the ambient variable
    /// count, making the failure automatic.
    pub ambient_limited: bool,
    /// The admissible integer interval `[k + l_X + 3, k + c_X - 1]`;
    /// `None` when empty.
    pub admissible_set: Option<(usize, usize)>,
    pub pass: bool,
}

/// Checks the level conditions for declared `(l_X, c_X)` against a
/// classified point, and reports the admissible set.
pub fn marked_ci_level_check(
    report: &SingularityReport,
    l_x: usize,
    c_x: usize,
    k: usize,
    ambient_vars: usize,
) -> crate::Result<MarkedLevelVerdict> {
    if l_x < 2 || l_x > k {
        return Err(crate::Error::LevelOutOfRange { l_x, k });
    }
    let type_matches = report.l == l_x;
    let level_ok = c_x >= l_x + 4;
    let rank_required = 2 * l_x + c_x - 1;
    let rank_found = report.tuple_rank_def12;
    let rank_ok = rank_found.is_some_and(|r| r >= rank_required);
    let lo = k + l_x + 3;
    let hi = k + c_x; // interval upper end is k + c_x - 1
    let admissible_set = if lo < hi { Some((lo, hi - 1)) } else { None };
    Ok(MarkedLevelVerdict {
        l_x,
        c_x,
        k,
        type_matches,
        level_ok,
        rank_ok,
        rank_required,
        rank_found,
        ambient_limited: !rank_ok && ambient_vars < rank_required,
        admissible_set,
        pass: type_matches && level_ok && rank_ok,
    })
}
