//! Symmetric matrices of quadratic forms and small dense exact linear algebra.

use crate::poly::{Monomial, SparsePoly};
use crate::scalar::{ExactScalar, FieldKind};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row echelon form in place; returns the rank. Plain Gaussian elimination
/// with exact division, valid over any of our fields.
pub fn row_reduce(rows: &mut [Vec<ExactScalar>], field: FieldKind) -> usize {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        for j in col..n {
            rows[rank][j] = &rows[rank][j] * &inv;
        }
        for r in 0..m {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for j in col..n {
                    let t = &rows[rank][j] * &f;
                    rows[r][j] = &rows[r][j] - &t;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    let _ = field;
    rank
}

pub fn rank_of_rows(rows: &[Vec<ExactScalar>], field: FieldKind) -> usize {
    let mut work = rows.to_vec();
    row_reduce(&mut work, field)
}

/// Basis of the right kernel of the matrix given by `rows` (m x n).
pub fn kernel_basis(rows: &[Vec<ExactScalar>], n: usize, field: FieldKind) -> Vec<Vec<ExactScalar>> {
    let mut work = rows.to_vec();
    row_reduce(&mut work, field);
    // locate pivot columns
    let mut pivots = Vec::new();
    for row in &work {
        if let Some(c) = row.iter().position(|x| !x.is_zero()) {
            pivots.push(c);
        }
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); n];
        v[free] = field.one();
        for (ri, &pc) in pivots.iter().enumerate() {
            // pivot row ri is normalized with leading 1 at pc
            let coeff = work[ri][free].clone();
            if !coeff.is_zero() {
                v[pc] = -&coeff;
            }
        }
        basis.push(v);
    }
    basis
}

/// Solves `sum_j x_j rows[j] = target` (a linear combination problem),
/// returning the coefficients if the target lies in the row span.
pub fn express_in_span(
    rows: &[Vec<ExactScalar>],
    target: &[ExactScalar],
    field: FieldKind,
) -> Option<Vec<ExactScalar>> {
    // Solve A^T x = target with augmented elimination over columns of A^T.
    let k = rows.len();
    let n = target.len();
    let mut aug: Vec<Vec<ExactScalar>> = (0..n)
        .map(|i| {
            let mut row: Vec<ExactScalar> = rows.iter().map(|r| r[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    row_reduce(&mut aug, field);
    let mut x = vec![field.zero(); k];
    for row in &aug {
        let Some(c) = row.iter().position(|v| !v.is_zero()) else {
            continue;
        };
        if c == k {
            return None; // inconsistent
        }
        x[c] = row[k].clone();
    }
    Some(x)
}

/// A symmetric matrix over `ExactScalar`: the matrix of a quadratic form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymMatrix {
    n: usize,
    field: FieldKind,
    rows: Vec<Vec<ExactScalar>>,
}

impl SymMatrix {
    pub fn new(rows: Vec<Vec<ExactScalar>>) -> crate::Result<SymMatrix> {
        let n = rows.len();
        let field = rows
            .first()
            .and_then(|r| r.first())
            .map(|c| c.field())
            .unwrap_or(FieldKind::Rational);
        for r in &rows {
            if r.len() != n {
                return Err(crate::Error::Input("matrix is not square".into()));
            }
            for c in r {
                if c.field() != field {
                    return Err(crate::Error::Input("mixed coefficient fields".into()));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(crate::Error::Input(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(SymMatrix { n, field, rows })
    }

    pub fn zero(n: usize, field: FieldKind) -> SymMatrix {
        SymMatrix {
            n,
            field,
            rows: vec![vec![field.zero(); n]; n],
        }
    }

    pub fn diag(entries: &[i64]) -> SymMatrix {
        let n = entries.len();
        let mut m = SymMatrix::zero(n, FieldKind::Rational);
        for (i, &e) in entries.iter().enumerate() {
            m.rows[i][i] = ExactScalar::from_int(e);
        }
        m
    }

    pub fn from_int_entries(entries: &[Vec<i64>]) -> crate::Result<SymMatrix> {
        SymMatrix::new(
            entries
                .iter()
                .map(|r| r.iter().map(|&v| ExactScalar::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExactScalar {
        &self.rows[i][j]
    }

    pub fn set_symmetric(&mut self, i: usize, j: usize, v: ExactScalar) {
        assert_eq!(v.field(), self.field);
        self.rows[i][j] = v.clone();
        self.rows[j][i] = v;
    }

    pub fn rows(&self) -> &[Vec<ExactScalar>] {
        &self.rows
    }

    /// `a*self + b*other`, entrywise.
    pub fn linear_combination(&self, a: &ExactScalar, other: &SymMatrix, b: &ExactScalar) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| &(&self.rows[i][j] * a) + &(&other.rows[i][j] * b))
                    .collect()
            })
            .collect();
        SymMatrix {
            n: self.n,
            field: self.field,
            rows,
        }
    }

    pub fn scale(&self, a: &ExactScalar) -> SymMatrix {
        SymMatrix {
            n: self.n,
            field: self.field,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c * a).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        self.linear_combination(&self.field.one(), other, &self.field.one())
    }

    /// Exact rank. Rationals go through clearing denominators and
    /// fraction-free (Bareiss) elimination on big integers; prime fields use
    /// ordinary Gaussian elimination.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldKind::Rational => {
                let int_rows: Vec<Vec<BigInt>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let mut lcm = BigInt::one();
                        for c in r {
                            let d = c.as_rational().unwrap().denom();
                            lcm = lcm.lcm(d);
                        }
                        r.iter()
                            .map(|c| {
                                let q = c.as_rational().unwrap();
                                q.numer() * (&lcm / q.denom())
                            })
                            .collect()
                    })
                    .collect();
                bareiss_rank(int_rows)
            }
            FieldKind::Prime(_) => rank_of_rows(&self.rows, self.field),
        }
    }

    /// Congruence restriction to a subspace: `B^T Q B` for the basis matrix
    /// `B` whose columns are `basis` vectors (each of length `n`).
    pub fn restrict(&self, basis: &[Vec<ExactScalar>]) -> SymMatrix {
        let r = basis.len();
        let mut out = SymMatrix::zero(r, self.field);
        // qb[b] = Q * basis[b]
        let qb: Vec<Vec<ExactScalar>> = basis
            .iter()
            .map(|v| {
                (0..self.n)
                    .map(|i| {
                        let mut acc = self.field.zero();
                        for j in 0..self.n {
                            acc = &acc + &(&self.rows[i][j] * &v[j]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        for a in 0..r {
            for b in a..r {
                let mut acc = self.field.zero();
                for i in 0..self.n {
                    acc = &acc + &(&basis[a][i] * &qb[b][i]);
                }
                out.rows[a][b] = acc.clone();
                out.rows[b][a] = acc;
            }
        }
        out
    }

    /// Congruence transform `A^T Q A` for a square matrix `A` given by rows.
    pub fn congruence(&self, a: &[Vec<ExactScalar>]) -> SymMatrix {
        // columns of A as basis vectors
        let cols: Vec<Vec<ExactScalar>> = (0..self.n)
            .map(|j| (0..self.n).map(|i| a[i][j].clone()).collect())
            .collect();
        self.restrict(&cols)
    }

    pub fn reduce_mod(&self, p: u64) -> crate::Result<SymMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.reduce_mod(p)).collect::<crate::Result<Vec<_>>>())
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(SymMatrix {
            n: self.n,
            field: FieldKind::Prime(p),
            rows,
        })
    }

    /// The matrix of the quadratic part of `f` (a polynomial of degree <= 2
    /// in its variables): off-diagonal entries are half the mixed
    /// coefficients, so the characteristic must not be 2.
    pub fn from_quadratic_poly(f: &SparsePoly) -> crate::Result<SymMatrix> {
        if let FieldKind::Prime(2) = f.field() {
            return Err(crate::Error::Input(
                "quadratic form matrices need characteristic != 2".into(),
            ));
        }
        let n = f.n_vars();
        let field = f.field();
        let mut m = SymMatrix::zero(n, field);
        let half = field
            .from_i64(2)
            .inverse()
            .expect("characteristic is not 2");
        for (mono, c) in f.terms() {
            if mono.degree() != 2 {
                continue;
            }
            let support: Vec<usize> = (0..n).filter(|&i| mono.0[i] > 0).collect();
            match support.as_slice() {
                [i] => {
                    let v = &m.rows[*i][*i] + c;
                    m.rows[*i][*i] = v;
                }
                [i, j] => {
                    let add = c * &half;
                    let v = &m.rows[*i][*j] + &add;
                    m.set_symmetric(*i, *j, v);
                }
                _ => unreachable!("degree-2 monomial has at most 2 variables"),
            }
        }
        Ok(m)
    }

    /// The quadratic form `x^T Q x` as a polynomial.
    pub fn to_quadratic_poly(&self) -> SparsePoly {
        let mut f = SparsePoly::zero(self.n, self.field);
        for i in 0..self.n {
            for j in i..self.n {
                let c = if i == j {
                    self.rows[i][i].clone()
                } else {
                    let two = self.field.from_i64(2);
                    &self.rows[i][j] * &two
                };
                if !c.is_zero() {
                    let mut e = vec![0u32; self.n];
                    e[i] += 1;
                    e[j] += 1;
                    f.add_term(Monomial(e), c);
                }
            }
        }
        f
    }
}

/// Fraction-free Gaussian elimination rank for integer matrices.
fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in (rank + 1)..m {
            for c in (col + 1)..n {
                let t = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = &t / &prev; // exact by Bareiss
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        debug_assert!(prev.is_positive() || prev.is_negative());
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}
