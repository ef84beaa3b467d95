//! Finitely generated ideals and the closed sets they cut out.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::One;

use crate::groebner::{groebner_basis, is_unit_basis, normal_form, MonomialOrder};
use crate::poly::{Polynomial, Ring};

/// A polynomial ideal with a lazily computed grevlex Gröbner basis.
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    basis: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            basis,
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Ideal {
        for g in &gens {
            assert!(g.ring() == ring, "generator from a different ring");
        }
        Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            basis: OnceLock::new(),
        }
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![Polynomial::one(ring)])
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    /// The ideal `(x_i : i ∈ vars)`.
    pub fn coordinate(ring: &Arc<Ring>, vars: &[usize]) -> Ideal {
        Ideal::new(ring, vars.iter().map(|&v| Polynomial::var(ring, v)).collect())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced grevlex basis, computed once.
    pub fn groebner(&self) -> &[Polynomial] {
        self.basis
            .get_or_init(|| groebner_basis(&self.ring, &self.gens, &MonomialOrder::Grevlex))
    }

    /// Reduced basis under an arbitrary order (not cached).
    pub fn groebner_with(&self, order: &MonomialOrder) -> Vec<Polynomial> {
        if *order == MonomialOrder::Grevlex {
            return self.groebner().to_vec();
        }
        groebner_basis(&self.ring, &self.gens, order)
    }

    pub fn is_unit(&self) -> bool {
        is_unit_basis(self.groebner())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        if f.is_zero() {
            return true;
        }
        normal_form(f, self.groebner(), &MonomialOrder::Grevlex).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// `f` vanishes on `V(self)` over the algebraic closure: `1 ∈ I + (1 − t·f)`.
    pub fn radical_contains(&self, f: &Polynomial) -> bool {
        if f.is_zero() || self.contains(f) {
            return true;
        }
        let ext = self.ring.with_fresh_var("t");
        let t = Polynomial::var(&ext, ext.arity() - 1);
        let mut gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|g| g.embed(&ext).expect("subring embedding"))
            .collect();
        let fe = f.embed(&ext).expect("subring embedding");
        gens.push(&Polynomial::one(&ext) - &(&t * &fe));
        is_unit_basis(&groebner_basis(&ext, &gens, &MonomialOrder::Grevlex))
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let a = self.compact_generators();
        let b = other.compact_generators();
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for f in &a {
            for g in &b {
                gens.push(f * g);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// The basis if already known and not larger, else the generators.
    fn compact_generators(&self) -> Vec<Polynomial> {
        match self.basis.get() {
            Some(b) if b.len() <= self.gens.len() => b.clone(),
            _ => self.gens.clone(),
        }
    }

    /// `I ∩ k[vars not eliminated]`, returned in the smaller ring.
    pub fn eliminate(&self, vars: &[usize]) -> Ideal {
        let n = self.ring.arity();
        let block: Vec<bool> = (0..n).map(|j| vars.contains(&j)).collect();
        let basis = groebner_basis(&self.ring, &self.gens, &MonomialOrder::Elimination(block));
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut sub = self.ring.clone();
        for &v in sorted.iter().rev() {
            sub = sub.without(v);
        }
        let kept: Vec<Polynomial> = basis
            .into_iter()
            .filter(|g| vars.iter().all(|&v| !g.involves(v)))
            .map(|g| g.embed(&sub).expect("eliminated variables absent"))
            .collect();
        Ideal::new(&sub, kept)
    }

    /// Substitutes `x_var = 0` into every generator, landing in the subring.
    pub fn restrict_to_zero(&self, var: usize) -> Ideal {
        let sub = self.ring.without(var);
        Ideal::new(&sub, self.gens.iter().map(|g| g.restrict_to_zero(var, &sub)).collect())
    }

    pub fn substitute(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Ideal {
        Ideal::new(target, self.gens.iter().map(|g| g.substitute(target, images)).collect())
    }

    pub fn embed(&self, target: &Arc<Ring>) -> Ideal {
        Ideal::new(
            target,
            self.gens
                .iter()
                .map(|g| g.embed(target).expect("embedding into a ring with all used variables"))
                .collect(),
        )
    }

    /// Variables `x_j` that vanish on `V(self)`.
    pub fn vanishing_coordinates(&self) -> Vec<usize> {
        (0..self.ring.arity())
            .filter(|&j| self.radical_contains(&Polynomial::var(&self.ring, j)))
            .collect()
    }

    /// If `V(self)` is the coordinate subspace `V(x_S)` (and nonempty), the set `S`.
    pub fn as_coordinate_subspace(&self) -> Option<Vec<usize>> {
        if self.is_unit() {
            return None;
        }
        let vars = self.vanishing_coordinates();
        let coord = Ideal::coordinate(&self.ring, &vars);
        self.gens.iter().all(|g| coord.contains(g)).then_some(vars)
    }
}

/// A closed set: the union of the zero sets of its components.
#[derive(Clone, Debug)]
pub struct ClosedSet {
    components: Vec<Ideal>,
}

impl ClosedSet {
    pub fn new(components: Vec<Ideal>) -> ClosedSet {
        assert!(!components.is_empty(), "a closed set needs at least one component");
        ClosedSet { components }
    }

    pub fn from_ideal(ideal: Ideal) -> ClosedSet {
        ClosedSet::new(vec![ideal])
    }

    pub fn empty(ring: &Arc<Ring>) -> ClosedSet {
        ClosedSet::from_ideal(Ideal::unit(ring))
    }

    pub fn components(&self) -> &[Ideal] {
        &self.components
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.components[0].ring()
    }

    /// Empty over the algebraic closure (Nullstellensatz).
    pub fn is_empty(&self) -> bool {
        self.components.iter().all(Ideal::is_unit)
    }

    /// A single ideal with the same zero set (product of components).
    pub fn defining_ideal(&self) -> Ideal {
        let live: Vec<&Ideal> = self.components.iter().filter(|c| !c.is_unit()).collect();
        match live.split_first() {
            None => Ideal::unit(self.ring()),
            Some((first, rest)) => rest.iter().fold((*first).clone(), |acc, c| acc.product(c)),
        }
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &ClosedSet) -> bool {
        let target = other.defining_ideal();
        let tgens = target.compact_generators();
        self.components
            .iter()
            .filter(|c| !c.is_unit())
            .all(|c| tgens.iter().all(|g| c.radical_contains(g)))
    }

    pub fn set_eq(&self, other: &ClosedSet) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn intersect(&self, other: &ClosedSet) -> ClosedSet {
        let mut comps = Vec::new();
        for a in &self.components {
            for b in &other.components {
                comps.push(a.sum(b));
            }
        }
        ClosedSet::new(comps)
    }

    pub fn union(&self, other: &ClosedSet) -> ClosedSet {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        ClosedSet::new(comps)
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .filter(|c| !c.is_unit())
            .map(|c| {
                let b: Vec<String> = c.groebner().iter().map(|g| g.to_string()).collect();
                format!("V({})", b.join(", "))
            })
            .collect();
        write!(f, "{}", parts.join(" u "))
    }
}

/// True iff the polynomial is the constant one.
pub fn is_one(p: &Polynomial) -> bool {
    p.is_constant() && p.constant_term().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::parse_polynomial;

    fn ideal(ring: &Arc<Ring>, src: &[&str]) -> Ideal {
        Ideal::new(ring, src.iter().map(|s| parse_polynomial(ring, s).unwrap()).collect())
    }

    fn q2() -> Arc<Ring> {
        Ring::new(FieldSpec::Rationals, ["x", "y"])
    }

    #[test]
    fn membership() {
        let r = q2();
        let p = |s| parse_polynomial(&r, s).unwrap();
        assert!(ideal(&r, &["x^2", "x*y", "y^2"]).contains(&p("x^2 + x*y")));
        assert!(!ideal(&r, &["x^4"]).contains(&p("x^2")));
        assert!(Ideal::unit(&r).contains(&p("x^7 + 3")));
    }

    #[test]
    fn radical_membership() {
        let r = q2();
        assert!(ideal(&r, &["x^2", "y^2"]).radical_contains(&Polynomial::var(&r, 0)));
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let i = ideal(&f2, &["x^2 + y^2*z", "y^2"]);
        assert!(i.radical_contains(&Polynomial::var(&f2, 0)));
        let q3 = Ring::new(FieldSpec::Rationals, ["x", "y", "z"]);
        assert!(!ideal(&q3, &["y^2*z"]).radical_contains(&Polynomial::var(&q3, 1)));
    }

    #[test]
    fn emptiness() {
        let r = q2();
        assert!(ClosedSet::from_ideal(ideal(&r, &["1 + x*y^3", "y^3", "x*y^2"])).is_empty());
        assert!(!ClosedSet::from_ideal(ideal(&r, &["x", "y"])).is_empty());
        assert!(ClosedSet::new(vec![Ideal::unit(&r), Ideal::unit(&r)]).is_empty());
    }

    #[test]
    fn elimination() {
        let r = q2();
        let e = ideal(&r, &["x - y^2", "y^3"]).eliminate(&[0]);
        assert_eq!(e.ring().vars, vec!["y".to_string()]);
        assert_eq!(e.groebner()[0].to_string(), "y^3");
        let e = ideal(&r, &["x"]).eliminate(&[1]);
        assert_eq!(e.to_string(), "(x)");
        let e = ideal(&r, &["x*y - 1"]).eliminate(&[0]);
        assert!(e.is_zero());
    }

    #[test]
    fn closed_set_union_and_containment() {
        let r = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let line = ClosedSet::from_ideal(ideal(&r, &["x", "y"]));
        let two = ClosedSet::from_ideal(ideal(&r, &["y^2*z"]));
        assert!(line.is_subset_of(&two));
        assert!(!two.is_subset_of(&line));
        let split = ClosedSet::new(vec![ideal(&r, &["y"]), ideal(&r, &["z"])]);
        assert!(split.set_eq(&two));
    }

    #[test]
    fn coordinate_subspaces() {
        let r = q2();
        assert_eq!(
            ideal(&r, &["x^2", "x*y", "y^3"]).as_coordinate_subspace(),
            Some(vec![0, 1])
        );
        assert_eq!(ideal(&r, &["x^2"]).as_coordinate_subspace(), Some(vec![0]));
        assert_eq!(ideal(&r, &["x - y"]).as_coordinate_subspace(), None);
        assert_eq!(Ideal::unit(&r).as_coordinate_subspace(), None);
    }
}
