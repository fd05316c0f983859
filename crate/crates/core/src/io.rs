//! JSON literal formats for polynomials, matrices and the other fixture
//! inputs. All coefficients travel as exact strings (`"num"` or
//! `"num/den"`); round-trips are bit-exact.

use crate::constants::DegreeTuple;
use crate::matrix::SymMatrix;
use crate::poly::{Monomial, SparsePoly};
use crate::quad::QuadFormTuple;
use crate::scalar::{ExactScalar, FieldKind};
use crate::singularity::PointedTuple;
use crate::tracer::FibrationParams;
use serde::{Deserialize, Serialize};

/// `{"vars": n, "terms": [[coeff, [e1,...,en]], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyLiteral {
    pub vars: usize,
    pub terms: Vec<(String, Vec<u32>)>,
}

impl PolyLiteral {
    pub fn from_poly(p: &SparsePoly) -> PolyLiteral {
        PolyLiteral {
            vars: p.n_vars(),
            // grevlex descending: deterministic serialization
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| (c.to_exact_string(), m.0.clone()))
                .collect(),
        }
    }

    pub fn to_poly(&self) -> crate::Result<SparsePoly> {
        let mut p = SparsePoly::zero(self.vars, FieldKind::Rational);
        for (c, e) in &self.terms {
            if e.len() != self.vars {
                return Err(crate::Error::Input(format!(
                    "exponent vector {:?} does not have {} entries",
                    e, self.vars
                )));
            }
            p.add_term(Monomial(e.clone()), ExactScalar::parse_rational(c)?);
        }
        Ok(p)
    }
}

/// A symmetric matrix with entries in the same coefficient string format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SymMatrixLiteral {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl SymMatrixLiteral {
    pub fn from_matrix(m: &SymMatrix) -> SymMatrixLiteral {
        SymMatrixLiteral {
            n: m.n(),
            entries: m
                .rows()
                .iter()
                .map(|r| r.iter().map(|c| c.to_exact_string()).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> crate::Result<SymMatrix> {
        if self.entries.len() != self.n {
            return Err(crate::Error::Input("matrix row count mismatch".into()));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| ExactScalar::parse_rational(s))
                    .collect::<crate::Result<Vec<_>>>()
            })
            .collect::<crate::Result<Vec<_>>>()?;
        SymMatrix::new(rows)
    }
}

/// Input for `quad rank`: a list of symmetric matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadTupleLiteral {
    pub forms: Vec<SymMatrixLiteral>,
    /// Optional frozen expected rank, used by fixture tests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl QuadTupleLiteral {
    pub fn to_tuple(&self) -> crate::Result<QuadFormTuple> {
        let forms = self
            .forms
            .iter()
            .map(|f| f.to_matrix())
            .collect::<crate::Result<Vec<_>>>()?;
        QuadFormTuple::new(forms)
    }
}

/// Input for `classify-point` and `check-regularity`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointedTupleLiteral {
    pub degrees: Vec<usize>,
    pub polys: Vec<PolyLiteral>,
    pub point: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Seed used to generate the fixture, echoed for reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl PointedTupleLiteral {
    pub fn from_tuple(pt: &PointedTuple) -> PointedTupleLiteral {
        PointedTupleLiteral {
            degrees: pt.degrees().degrees().to_vec(),
            polys: pt.polys().iter().map(PolyLiteral::from_poly).collect(),
            point: pt.point().iter().map(|c| c.to_exact_string()).collect(),
            note: None,
            seed: None,
        }
    }

    pub fn to_tuple(&self) -> crate::Result<PointedTuple> {
        let degrees = DegreeTuple::new(self.degrees.clone())?;
        let polys = self
            .polys
            .iter()
            .map(|p| p.to_poly())
            .collect::<crate::Result<Vec<_>>>()?;
        let point = self
            .point
            .iter()
            .map(|s| ExactScalar::parse_rational(s))
            .collect::<crate::Result<Vec<_>>>()?;
        PointedTuple::new(degrees, polys, point)
    }
}

/// Input for `check-fibration`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FibrationLiteral {
    pub m: usize,
    pub k: usize,
    #[serde(rename = "M")]
    pub big_m: usize,
    /// Pairs `(m_i, d_i)`.
    pub bidegrees: Vec<(usize, usize)>,
}

impl FibrationLiteral {
    pub fn to_params(&self) -> crate::Result<FibrationParams> {
        FibrationParams::new(self.m, self.k, self.big_m, self.bidegrees.clone())
    }
}
