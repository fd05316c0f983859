//! Sparse multivariate polynomials over [`ExactScalar`].
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! graded reverse-lexicographic order. The map therefore doubles as the
//! canonical term order for display and as the leading-term structure the
//! Groebner engine needs. Exponent vectors are dense fixed-length arrays;
//! at desk scale (a few dozen variables) nothing fancier pays off.

use crate::scalar::{ExactScalar, FieldKind};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A monomial as a dense exponent vector. `Ord` is grevlex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(i: usize, n_vars: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = self.degree();
        let db = other.degree();
        if da != db {
            return da.cmp(&db);
        }
        // Same degree: in grevlex the monomial whose last differing exponent
        // is smaller is the larger one.
        for i in (0..self.0.len()).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate polynomial. No stored coefficient is zero, so
/// structural equality of the term maps is polynomial equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly {
    n_vars: usize,
    field: FieldKind,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl SparsePoly {
    pub fn zero(n_vars: usize, field: FieldKind) -> Self {
        SparsePoly {
            n_vars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: ExactScalar) -> Self {
        let mut p = SparsePoly::zero(n_vars, c.field());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n_vars), c);
        }
        p
    }

    pub fn variable(i: usize, n_vars: usize, field: FieldKind) -> Self {
        assert!(i < n_vars);
        let mut p = SparsePoly::zero(n_vars, field);
        p.terms.insert(Monomial::var(i, n_vars), field.one());
        p
    }

    /// Builds from raw terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(n_vars: usize, field: FieldKind, it: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, ExactScalar)>,
    {
        let mut p = SparsePoly::zero(n_vars, field);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        assert_eq!(m.0.len(), self.n_vars, "exponent vector length mismatch");
        assert_eq!(c.field(), self.field, "coefficient field mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Monomial, ExactScalar> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; `None` is the "minus infinity" degree of the zero
    /// polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree() as usize).max()
    }

    /// Leading term in grevlex.
    pub fn leading(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() as usize == d)
    }

    pub fn map_coeffs(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> SparsePoly {
        let field = self
            .terms
            .values()
            .next()
            .map(|c| f(c).field())
            .unwrap_or(self.field);
        SparsePoly::from_terms(self.n_vars, field, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Reduction of a rational polynomial mod `p`.
    pub fn reduce_mod(&self, p: u64) -> crate::Result<SparsePoly> {
        let mut out = SparsePoly::zero(self.n_vars, FieldKind::Prime(p));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.reduce_mod(p)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.n_vars, self.field);
        }
        SparsePoly::from_terms(
            self.n_vars,
            self.field,
            self.terms.iter().map(|(m, a)| (m.clone(), a * c)),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &ExactScalar) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.n_vars, self.field);
        }
        SparsePoly::from_terms(
            self.n_vars,
            self.field,
            self.terms.iter().map(|(t, a)| (t.mul(m), a * c)),
        )
    }

    /// Splits into homogeneous components, lowest degree first. Zero
    /// polynomial has no parts.
    pub fn graded_parts(&self) -> BTreeMap<usize, SparsePoly> {
        let mut parts: BTreeMap<usize, SparsePoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree() as usize)
                .or_insert_with(|| SparsePoly::zero(self.n_vars, self.field))
                .add_term(m.clone(), c.clone());
        }
        parts
    }

    /// The degree-`d` homogeneous component (zero if absent).
    pub fn graded_part(&self, d: usize) -> SparsePoly {
        let mut part = SparsePoly::zero(self.n_vars, self.field);
        for (m, c) in &self.terms {
            if m.degree() as usize == d {
                part.add_term(m.clone(), c.clone());
            }
        }
        part
    }

    pub fn eval(&self, xs: &[ExactScalar]) -> ExactScalar {
        assert_eq!(xs.len(), self.n_vars);
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &xs[i].pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`. All images must share the
    /// same variable count and field. Powers are memoized per variable.
    pub fn compose(&self, images: &[SparsePoly]) -> SparsePoly {
        assert_eq!(images.len(), self.n_vars);
        let out_vars = images.first().map(|p| p.n_vars()).unwrap_or(0);
        let mut powers: Vec<Vec<SparsePoly>> = images
            .iter()
            .map(|p| vec![SparsePoly::constant(out_vars, self.field.one()), p.clone()])
            .collect();
        let mut acc = SparsePoly::zero(out_vars, self.field);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &mut powers[i];
                while p.len() <= e as usize {
                    let next = &p[p.len() - 1] * &p[1];
                    p.push(next);
                }
                t = &t * &p[e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Restriction onto the span of `basis`: substitutes the linear
    /// parametrization of the subspace. `basis` must be linearly
    /// independent (checked) and each vector as long as `n_vars`.
    pub fn restrict_to_subspace(&self, basis: &[Vec<ExactScalar>]) -> crate::Result<SparsePoly> {
        for v in basis {
            if v.len() != self.n_vars {
                return Err(crate::Error::Input(format!(
                    "basis vector length {} != n_vars {}",
                    v.len(),
                    self.n_vars
                )));
            }
        }
        let rows: Vec<Vec<ExactScalar>> = basis.to_vec();
        if crate::matrix::rank_of_rows(&rows, self.field) != basis.len() {
            return Err(crate::Error::DegenerateSubspace);
        }
        let r = basis.len();
        let images: Vec<SparsePoly> = (0..self.n_vars)
            .map(|j| {
                SparsePoly::from_terms(
                    r,
                    self.field,
                    (0..r).map(|b| (Monomial::var(b, r), basis[b][j].clone())),
                )
            })
            .collect();
        Ok(self.compose(&images))
    }
}

impl std::ops::Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.map_coeffs(|c| -c)
    }
}

impl std::ops::Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count mismatch");
        let mut out = SparsePoly::zero(self.n_vars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // grevlex descending
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                let mut firstv = true;
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !firstv {
                        write!(f, "*")?;
                    }
                    firstv = false;
                    if e == 1 {
                        write!(f, "x{i}")?;
                    } else {
                        write!(f, "x{i}^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn grevlex_order() {
        // x^2 > xy > y^2 and xy > x
        let x2 = mono(&[2, 0]);
        let xy = mono(&[1, 1]);
        let y2 = mono(&[0, 2]);
        let x = mono(&[1, 0]);
        assert!(x2 > xy);
        assert!(xy > y2);
        assert!(xy > x);
        // 3 vars, degree 2: x0x2 vs x1^2 -- last differing exponent decides
        assert!(mono(&[0, 2, 0]) > mono(&[1, 0, 1]));
    }

    #[test]
    fn graded_parts_definition() {
        // f = z1 + z1 z2  ->  parts {1: z1, 2: z1 z2}
        let f = SparsePoly::from_terms(
            2,
            FieldKind::Rational,
            vec![(mono(&[1, 0]), q(1)), (mono(&[1, 1]), q(1))],
        );
        let parts = f.graded_parts();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&1].n_terms(), 1);
        assert_eq!(parts[&2].n_terms(), 1);
        let sum = parts.values().fold(SparsePoly::zero(2, FieldKind::Rational), |a, b| &a + b);
        assert_eq!(sum, f);

        let zero = SparsePoly::zero(3, FieldKind::Rational);
        assert!(zero.graded_parts().is_empty());
        assert_eq!(zero.degree(), None);
    }

    #[test]
    fn graded_parts_of_expanded_cube() {
        // (z1+z2)^3 expanded is a single part at degree 3, equal to itself
        let z1 = SparsePoly::variable(0, 2, FieldKind::Rational);
        let z2 = SparsePoly::variable(1, 2, FieldKind::Rational);
        let s = &z1 + &z2;
        let cube = &(&s * &s) * &s;
        let parts = cube.graded_parts();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&3], cube);
        assert!(cube.is_homogeneous_of(3));
    }

    #[test]
    fn restrict_coordinate_subspace() {
        // f = x0^2 + x1^2 in 3 vars restricted to the x0x1-plane
        let f = SparsePoly::from_terms(
            3,
            FieldKind::Rational,
            vec![(mono(&[2, 0, 0]), q(1)), (mono(&[0, 2, 0]), q(1))],
        );
        let basis = vec![
            vec![q(1), q(0), q(0)],
            vec![q(0), q(1), q(0)],
        ];
        let g = f.restrict_to_subspace(&basis).unwrap();
        assert_eq!(g.n_vars(), 2);
        let expect = SparsePoly::from_terms(
            2,
            FieldKind::Rational,
            vec![(mono(&[2, 0]), q(1)), (mono(&[0, 2]), q(1))],
        );
        assert_eq!(g, expect);
    }

    #[test]
    fn restrict_kills_transverse_term() {
        // f = x0 x2 restricted to span(e0, e1) is 0
        let f = SparsePoly::from_terms(3, FieldKind::Rational, vec![(mono(&[1, 0, 1]), q(1))]);
        let basis = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]];
        assert!(f.restrict_to_subspace(&basis).unwrap().is_zero());
    }

    #[test]
    fn restrict_isotropic_line() {
        // f = x0^2 - x1^2 on the line x0 = x1 = t vanishes
        let f = SparsePoly::from_terms(
            3,
            FieldKind::Rational,
            vec![(mono(&[2, 0, 0]), q(1)), (mono(&[0, 2, 0]), q(-1))],
        );
        let basis = vec![vec![q(1), q(1), q(0)]];
        assert!(f.restrict_to_subspace(&basis).unwrap().is_zero());
    }

    #[test]
    fn restrict_rejects_dependent_basis() {
        let f = SparsePoly::variable(0, 3, FieldKind::Rational);
        let basis = vec![
            vec![q(1), q(1), q(0)],
            vec![q(2), q(2), q(0)],
        ];
        match f.restrict_to_subspace(&basis) {
            Err(crate::Error::DegenerateSubspace) => {}
            other => panic!("expected degenerate subspace error, got {other:?}"),
        }
    }

    #[test]
    fn degree_does_not_increase_under_restriction() {
        let f = SparsePoly::from_terms(
            3,
            FieldKind::Rational,
            vec![(mono(&[2, 1, 0]), q(3)), (mono(&[0, 0, 1]), q(5))],
        );
        let basis = vec![vec![q(1), q(-2), q(7)], vec![q(0), q(3), q(1)]];
        let g = f.restrict_to_subspace(&basis).unwrap();
        assert!(g.degree().unwrap_or(0) <= f.degree().unwrap());
    }
}
