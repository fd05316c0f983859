//! A Buchberger engine over the crate's exact scalars, plus ideal dimension
//! read off the leading-term ideal.
//!
//! Everything here is deliberately plain: graded reverse-lex order, normal
//! pair selection, product and chain criteria, full interreduction. The
//! inputs this crate feeds it are desk-scale (a couple of dozen variables,
//! a handful of generators), where a straightforward implementation is both
//! fast enough and easy to trust.

use crate::poly::{Monomial, SparsePoly};
use crate::scalar::FieldKind;
use std::collections::HashMap;

/// A reduced, monic Groebner basis w.r.t. grevlex.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub polys: Vec<SparsePoly>,
    pub n_vars: usize,
    pub field: FieldKind,
}

fn monic(f: &SparsePoly) -> SparsePoly {
    match f.leading() {
        None => f.clone(),
        Some((_, c)) => {
            let inv = c.inverse().expect("leading coefficient is nonzero");
            f.scale(&inv)
        }
    }
}

/// Fully reduces `f` modulo `basis`: no term of the result is divisible by
/// any basis leading monomial.
pub fn normal_form(f: &SparsePoly, basis: &[SparsePoly]) -> SparsePoly {
    let mut work = f.clone();
    let mut rem = SparsePoly::zero(f.n_vars(), f.field());
    'outer: while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            let (glm, glc) = match g.leading() {
                Some(t) => t,
                None => continue,
            };
            if glm.divides(&lm) {
                let q = glm.quotient(&lm);
                let c = &lc / glc;
                let sub = g.mul_monomial(&q, &c);
                work = &work - &sub;
                continue 'outer;
            }
        }
        // leading term is irreducible: move it to the remainder
        rem.add_term(lm.clone(), lc.clone());
        let single = SparsePoly::from_terms(f.n_vars(), f.field(), [(lm, lc)]);
        work = &work - &single;
    }
    rem
}

fn s_poly(f: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_monomial(&fm.quotient(&l), &(&g.field().one() / fc));
    let b = g.mul_monomial(&gm.quotient(&l), &(&g.field().one() / gc));
    &a - &b
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn make_pairs(basis: &[SparsePoly], lo: usize) -> Vec<Pair> {
    let mut pairs = Vec::new();
    for j in lo..basis.len() {
        for i in 0..j {
            let lcm = basis[i]
                .leading()
                .unwrap()
                .0
                .lcm(basis[j].leading().unwrap().0);
            pairs.push(Pair { i, j, lcm });
        }
    }
    pairs
}

fn run_buchberger(mut basis: Vec<SparsePoly>, mut pairs: Vec<Pair>) -> Vec<SparsePoly> {
    while !pairs.is_empty() {
        // normal selection: smallest lcm first
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lcm.cmp(&b.lcm))
            .unwrap();
        let pair = pairs.swap_remove(idx);
        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        let (mi, mj) = (fi.leading().unwrap().0, fj.leading().unwrap().0);
        if mi.coprime(mj) {
            continue; // product criterion
        }
        // chain criterion: some other basis element divides the lcm and both
        // companion pairs are no longer pending
        let chain = basis.iter().enumerate().any(|(k, g)| {
            k != pair.i
                && k != pair.j
                && g.leading().is_some_and(|(m, _)| m.divides(&pair.lcm))
                && !pairs.iter().any(|p| {
                    (p.i == pair.i.min(k) && p.j == pair.i.max(k))
                        || (p.i == pair.j.min(k) && p.j == pair.j.max(k))
                })
        });
        if chain {
            continue;
        }
        let s = s_poly(fi, fj);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            basis.push(monic(&r));
            let n = basis.len();
            for i in 0..n - 1 {
                let lcm = basis[i]
                    .leading()
                    .unwrap()
                    .0
                    .lcm(basis[n - 1].leading().unwrap().0);
                pairs.push(Pair { i, j: n - 1, lcm });
            }
        }
    }
    interreduce(basis)
}

fn interreduce(mut basis: Vec<SparsePoly>) -> Vec<SparsePoly> {
    // drop elements whose leading monomial is divided by another's
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut kept: Vec<SparsePoly> = Vec::new();
    for f in &basis {
        let lm = f.leading().unwrap().0;
        if !kept
            .iter()
            .any(|g| g.leading().unwrap().0.divides(lm))
        {
            kept.push(f.clone());
        }
    }
    // tail-reduce each against the others
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let mut others = Vec::with_capacity(kept.len() - 1);
        others.extend(kept[..i].iter().cloned());
        others.extend(kept[i + 1..].iter().cloned());
        let r = normal_form(&kept[i], &others);
        if !r.is_zero() {
            out.push(monic(&r));
        }
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Groebner basis of the ideal generated by `gens` (zeros are ignored).
pub fn buchberger(gens: &[SparsePoly]) -> GroebnerBasis {
    let n_vars = gens.first().map(|g| g.n_vars()).unwrap_or(0);
    let field = gens
        .first()
        .map(|g| g.field())
        .unwrap_or(FieldKind::Rational);
    let basis: Vec<SparsePoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(monic)
        .collect();
    let pairs = make_pairs(&basis, 0);
    GroebnerBasis {
        polys: run_buchberger(basis, pairs),
        n_vars,
        field,
    }
}

impl GroebnerBasis {
    /// Extends an existing basis by one more generator. Pairs among the old
    /// elements reduce to zero already, so only new pairs are queued.
    pub fn extend(&self, f: &SparsePoly) -> GroebnerBasis {
        if f.is_zero() {
            return self.clone();
        }
        let mut basis = self.polys.clone();
        let r = normal_form(f, &basis);
        if r.is_zero() {
            return self.clone();
        }
        basis.push(monic(&r));
        let pairs = make_pairs(&basis, basis.len() - 1);
        GroebnerBasis {
            polys: run_buchberger(basis, pairs),
            n_vars: self.n_vars,
            field: self.field,
        }
    }

    pub fn contains_constant(&self) -> bool {
        self.polys
            .iter()
            .any(|g| g.leading().is_some_and(|(m, _)| m.is_one()))
    }

    /// Krull dimension of the quotient ring, computed as the largest
    /// coordinate subset not containing the support of any leading monomial.
    /// Returns -1 when the ideal is the whole ring.
    pub fn affine_dimension(&self) -> i64 {
        if self.contains_constant() {
            return -1;
        }
        assert!(
            self.n_vars <= 32,
            "dimension bitmask machinery is capped at 32 variables"
        );
        let supports: Vec<u32> = self
            .polys
            .iter()
            .map(|g| {
                let m = g.leading().unwrap().0;
                let mut mask = 0u32;
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        mask |= 1 << i;
                    }
                }
                mask
            })
            .collect();
        let all = if self.n_vars == 32 {
            u32::MAX
        } else {
            (1u32 << self.n_vars) - 1
        };
        let mut memo = HashMap::new();
        max_independent(&supports, all, &mut memo) as i64
    }

    /// Dimension of the projective zero set of a homogeneous ideal; -1 for
    /// the empty set.
    pub fn projective_dimension(&self) -> i64 {
        let a = self.affine_dimension();
        if a <= 0 {
            -1
        } else {
            a - 1
        }
    }
}

fn max_independent(supports: &[u32], avail: u32, memo: &mut HashMap<u32, u32>) -> u32 {
    if let Some(&v) = memo.get(&avail) {
        return v;
    }
    let blocking = supports.iter().find(|&&s| s & !avail == 0 && s != 0);
    let res = match blocking {
        None => avail.count_ones(),
        Some(&s) => {
            let mut best = 0;
            let mut bits = s & avail;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                bits ^= bit;
                best = best.max(max_independent(supports, avail & !bit, memo));
            }
            best
        }
    };
    memo.insert(avail, res);
    res
}

/// Projective dimension of the zero set of homogeneous `gens` over their
/// (common) field.
pub fn ideal_projective_dimension(gens: &[SparsePoly]) -> i64 {
    buchberger(gens).projective_dimension()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::ExactScalar;

    fn var(i: usize, n: usize, f: FieldKind) -> SparsePoly {
        SparsePoly::variable(i, n, f)
    }

    fn fp() -> FieldKind {
        FieldKind::prime(32003).unwrap()
    }

    #[test]
    fn coordinate_ideal_dimensions() {
        let f = fp();
        // V(x0) in P^2 has dimension 1; V(x0, x1) dimension 0; V(x0,x1,x2) empty
        let x0 = var(0, 3, f);
        let x1 = var(1, 3, f);
        let x2 = var(2, 3, f);
        let gb = buchberger(std::slice::from_ref(&x0));
        assert_eq!(gb.projective_dimension(), 1);
        let gb = gb.extend(&x1);
        assert_eq!(gb.projective_dimension(), 0);
        let gb = gb.extend(&x2);
        assert_eq!(gb.projective_dimension(), -1);
    }

    #[test]
    fn twisted_cubic_dimension() {
        // x z - y^2, y w - z^2, x w - y z in P^3: a curve
        let f = fp();
        let n = 4;
        let term = |e: &[u32], c: i64| {
            (Monomial(e.to_vec()), f.from_i64(c))
        };
        let g1 = SparsePoly::from_terms(n, f, vec![term(&[1, 0, 1, 0], 1), term(&[0, 2, 0, 0], -1)]);
        let g2 = SparsePoly::from_terms(n, f, vec![term(&[0, 1, 0, 1], 1), term(&[0, 0, 2, 0], -1)]);
        let g3 = SparsePoly::from_terms(n, f, vec![term(&[1, 0, 0, 1], 1), term(&[0, 1, 1, 0], -1)]);
        assert_eq!(ideal_projective_dimension(&[g1, g2, g3]), 1);
    }

    #[test]
    fn rational_and_prime_field_agree_on_small_ideal() {
        // same generators over QQ and GF(32003)
        let q = FieldKind::Rational;
        let n = 3;
        let t = |e: &[u32], c: i64| (Monomial(e.to_vec()), ExactScalar::from_int(c));
        let g1 = SparsePoly::from_terms(n, q, vec![t(&[2, 0, 0], 1), t(&[0, 1, 1], -3)]);
        let g2 = SparsePoly::from_terms(n, q, vec![t(&[0, 2, 0], 2), t(&[1, 0, 1], 5)]);
        let dq = ideal_projective_dimension(&[g1.clone(), g2.clone()]);
        let dp = ideal_projective_dimension(&[
            g1.reduce_mod(32003).unwrap(),
            g2.reduce_mod(32003).unwrap(),
        ]);
        assert_eq!(dq, dp);
        assert_eq!(dq, 0);
    }

    #[test]
    fn principal_ideal_dimension() {
        // a quadric in P^3 is a surface
        let f = fp();
        let t = |e: &[u32], c: i64| (Monomial(e.to_vec()), f.from_i64(c));
        let g = SparsePoly::from_terms(4, f, vec![t(&[1, 1, 0, 0], 1), t(&[0, 0, 1, 1], -1)]);
        assert_eq!(ideal_projective_dimension(&[g]), 2);
    }

    #[test]
    fn normal_form_is_idempotent() {
        let f = fp();
        let x0 = var(0, 2, f);
        let x1 = var(1, 2, f);
        let g = &(&x0 * &x0) - &(&x1 * &x1);
        let gb = buchberger(&[g]);
        let p = &(&x0 * &x0) * &x0;
        let r = normal_form(&p, &gb.polys);
        assert_eq!(r, normal_form(&r, &gb.polys));
    }
}
