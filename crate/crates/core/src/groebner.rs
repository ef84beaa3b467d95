//! Buchberger's algorithm with the sugar selection strategy.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::field::{FieldSpec, Scalar};
use crate::poly::{Exponent, Polynomial, Ring};

/// Monomial orders used by the ideal engine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic over the ring's variable list.
    Grevlex,
    Lex,
    /// Block order: grevlex on the flagged variables first, then grevlex on
    /// the others. Eliminates the flagged block.
    Elimination(Vec<bool>),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elimination(block) => {
                let pick = |e: &[u32], inside: bool| -> Vec<u32> {
                    e.iter()
                        .zip(block)
                        .map(|(&x, &f)| if f == inside { x } else { 0 })
                        .collect()
                };
                grevlex(&pick(a, true), &pick(b, true)).then_with(|| grevlex(&pick(a, false), &pick(b, false)))
            }
        }
    }
}

/// Terms sorted in descending monomial order.
#[derive(Debug, Clone)]
struct DPoly {
    terms: Vec<(Exponent, Scalar)>,
}

impl DPoly {
    fn from_poly(p: &Polynomial, order: &MonomialOrder) -> DPoly {
        let mut terms: Vec<_> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        DPoly { terms }
    }

    fn to_poly(&self, ring: &Arc<Ring>) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Exponent {
        &self.terms[0].0
    }

    fn monic(mut self, field: FieldSpec) -> DPoly {
        if let Some((_, c)) = self.terms.first() {
            let inv = field.inv(c);
            for t in &mut self.terms {
                t.1 = field.mul(&t.1, &inv);
            }
        }
        self
    }

    /// `self − c·x^m·other`, merging in order.
    fn sub_scaled(&self, c: &Scalar, m: &[u32], other: &DPoly, order: &MonomialOrder, field: FieldSpec) -> DPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let shifted = other.terms.iter().map(|(e, v)| {
            let e: Exponent = e.iter().zip(m).map(|(a, b)| a + b).collect();
            (e, field.neg(&field.mul(v, c)))
        });
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                    Ordering::Greater => out.push(a.next().unwrap()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (e, u) = a.next().unwrap();
                        let (_, v) = b.next().unwrap();
                        let s = field.add(&u, &v);
                        if !s.is_zero() {
                            out.push((e, s));
                        }
                    }
                },
            }
        }
        DPoly { terms: out }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Full normal form of `f` modulo `basis`.
fn reduce(f: &DPoly, basis: &[&DPoly], order: &MonomialOrder, field: FieldSpec) -> DPoly {
    let mut p = f.clone();
    let mut rem: Vec<(Exponent, Scalar)> = Vec::new();
    while let Some((e, c)) = p.terms.first().cloned() {
        match basis.iter().find(|g| divides(g.lm(), &e)) {
            Some(g) => {
                let q = field.div(&c, &g.terms[0].1);
                let m = quotient(&e, g.lm());
                p = p.sub_scaled(&q, &m, g, order, field);
            }
            None => {
                rem.push((e, c));
                p.terms.remove(0);
            }
        }
    }
    DPoly { terms: rem }
}

fn s_polynomial(f: &DPoly, g: &DPoly, order: &MonomialOrder, field: FieldSpec) -> DPoly {
    let l = lcm(f.lm(), g.lm());
    let mf = quotient(&l, f.lm());
    let mg = quotient(&l, g.lm());
    let cf = field.inv(&f.terms[0].1);
    let left = DPoly { terms: Vec::new() }.sub_scaled(&field.neg(&cf), &mf, f, order, field);
    let cg = field.inv(&g.terms[0].1);
    left.sub_scaled(&cg, &mg, g, order, field)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exponent,
    sugar: u32,
}

/// Reduced Gröbner basis of `gens` (monic, sorted by descending leading
/// monomial). The zero ideal yields an empty basis; the unit ideal `[1]`.
pub fn groebner_basis(ring: &Arc<Ring>, gens: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let field = ring.field;
    let mut basis: Vec<DPoly> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return vec![Polynomial::one(ring)];
        }
        sugar.push(g.total_degree().unwrap_or(0));
        basis.push(DPoly::from_poly(g, order).monic(field));
    }
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let add_pairs =
        |k: usize, basis: &[DPoly], sugar: &[u32], pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>| {
            for i in 0..k {
                let l = lcm(basis[i].lm(), basis[k].lm());
                let dl = degree(&l);
                let s = (sugar[i] + dl - degree(basis[i].lm())).max(sugar[k] + dl - degree(basis[k].lm()));
                pairs.push(Pair {
                    i,
                    j: k,
                    lcm: l,
                    sugar: s,
                });
                pending.insert((i, k));
            }
        };
    for k in 0..basis.len() {
        add_pairs(k, &basis, &sugar, &mut pairs, &mut pending);
    }
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (p, q) = (&pairs[a], &pairs[b]);
                p.sugar
                    .cmp(&q.sugar)
                    .then_with(|| order.cmp(&p.lcm, &q.lcm))
                    .then_with(|| (p.i, p.j).cmp(&(q.i, q.j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));
        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        // product criterion
        if fi.lm().iter().zip(fj.lm()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // chain criterion
        let chain = (0..basis.len()).any(|l| {
            l != pair.i
                && l != pair.j
                && divides(basis[l].lm(), &pair.lcm)
                && !pending.contains(&(pair.i.min(l), pair.i.max(l)))
                && !pending.contains(&(pair.j.min(l), pair.j.max(l)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(fi, fj, order, field);
        let refs: Vec<&DPoly> = basis.iter().collect();
        let h = reduce(&s, &refs, order, field);
        if h.is_zero() {
            continue;
        }
        if degree(h.lm()) == 0 {
            return vec![Polynomial::one(ring)];
        }
        basis.push(h.monic(field));
        sugar.push(pair.sugar);
        let k = basis.len() - 1;
        add_pairs(k, &basis, &sugar, &mut pairs, &mut pending);
    }
    // minimalize
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| {
            !(0..basis.len())
                .any(|j| j != i && divides(basis[j].lm(), basis[i].lm()) && (basis[j].lm() != basis[i].lm() || j < i))
        })
        .collect();
    let minimal: Vec<DPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect();
    // interreduce
    let mut reduced: Vec<DPoly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&DPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g)
            .collect();
        let head = DPoly {
            terms: vec![minimal[i].terms[0].clone()],
        };
        let tail = DPoly {
            terms: minimal[i].terms[1..].to_vec(),
        };
        let mut t = reduce(&tail, &others, order, field);
        let mut terms = head.terms;
        terms.append(&mut t.terms);
        reduced.push(DPoly { terms }.monic(field));
    }
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    reduced.iter().map(|d| d.to_poly(ring)).collect()
}

/// Normal form of `f` modulo a Gröbner basis computed under `order`.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let ds: Vec<DPoly> = basis.iter().map(|b| DPoly::from_poly(b, order)).collect();
    let refs: Vec<&DPoly> = ds.iter().collect();
    reduce(&DPoly::from_poly(f, order), &refs, order, f.field()).to_poly(f.ring())
}

/// Leading monomial of a nonzero polynomial under `order`.
pub fn leading_monomial(f: &Polynomial, order: &MonomialOrder) -> Option<Exponent> {
    f.terms().map(|(e, _)| e).max_by(|a, b| order.cmp(a, b)).cloned()
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial], order: &MonomialOrder) -> bool {
    let ds: Vec<DPoly> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| DPoly::from_poly(b, order))
        .collect();
    let Some(first) = basis.first() else {
        return true;
    };
    let field = first.field();
    let refs: Vec<&DPoly> = ds.iter().collect();
    for i in 0..ds.len() {
        for j in (i + 1)..ds.len() {
            let s = s_polynomial(&ds[i], &ds[j], order, field);
            if !reduce(&s, &refs, order, field).is_zero() {
                return false;
            }
        }
    }
    true
}

/// True iff the basis is `[1]`.
pub fn is_unit_basis(basis: &[Polynomial]) -> bool {
    basis.len() == 1 && basis[0].is_constant() && basis[0].constant_term().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn polys(ring: &Arc<Ring>, src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| parse_polynomial(ring, s).unwrap()).collect()
    }

    #[test]
    fn grevlex_ordering() {
        let o = MonomialOrder::Grevlex;
        // x > y > z, and x*z < y^2 in grevlex
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[0, 0, 3], &[2, 0, 0]), Ordering::Greater);
    }

    #[test]
    fn char_two_basis() {
        let r = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let gb = groebner_basis(&r, &polys(&r, &["x^2 + y^2*z", "y^2"]), &MonomialOrder::Grevlex);
        let printed: Vec<String> = gb.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, vec!["x^2", "y^2"]);
        assert!(is_groebner_basis(&gb, &MonomialOrder::Grevlex));
    }

    #[test]
    fn unit_basis() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let gb = groebner_basis(&r, &polys(&r, &["1 + x*y^3", "y^3"]), &MonomialOrder::Grevlex);
        assert!(is_unit_basis(&gb));
        let gb = groebner_basis(&r, &polys(&r, &["x"]), &MonomialOrder::Grevlex);
        assert_eq!(gb, polys(&r, &["x"]));
    }

    #[test]
    fn cyclic_three_is_a_basis() {
        let r = Ring::new(FieldSpec::Rationals, ["a", "b", "c"]);
        let g = polys(&r, &["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]);
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let gb = groebner_basis(&r, &g, &order);
            assert!(is_groebner_basis(&gb, &order));
            for p in &g {
                assert!(normal_form(p, &gb, &order).is_zero());
            }
        }
    }
}
