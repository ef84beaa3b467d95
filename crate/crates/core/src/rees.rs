//! ℚ-Rees algebras presented by finitely many weighted generators `f·T^a`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ideal::{ClosedSet, Ideal};
use crate::poly::{exponents_up_to, Polynomial, Ring};
use crate::weight::{Extended, Weight};

/// One weighted generator `poly · T^weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub poly: Polynomial,
    pub weight: Weight,
}

impl Generator {
    pub fn new(poly: Polynomial, weight: Weight) -> Generator {
        Generator { poly, weight }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.num_terms() > 1 {
            write!(f, "({}) : {}", self.poly, self.weight)
        } else {
            write!(f, "{} : {}", self.poly, self.weight)
        }
    }
}

/// The smallest ℚ-Rees algebra containing the generators. Duplicates are
/// kept; an empty list is the zero algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct QReesAlgebra {
    ring: Arc<Ring>,
    gens: Vec<Generator>,
}

impl QReesAlgebra {
    /// Zero polynomials are dropped; weights must be positive.
    pub fn new(ring: &Arc<Ring>, gens: Vec<Generator>) -> Result<QReesAlgebra> {
        let mut kept = Vec::with_capacity(gens.len());
        for g in gens {
            if g.poly.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if g.weight.is_zero() {
                return Err(Error::NonPositiveWeight(g.weight.to_string()));
            }
            if !g.poly.is_zero() {
                kept.push(g);
            }
        }
        Ok(QReesAlgebra {
            ring: ring.clone(),
            gens: kept,
        })
    }

    pub fn zero(ring: &Arc<Ring>) -> QReesAlgebra {
        QReesAlgebra {
            ring: ring.clone(),
            gens: Vec::new(),
        }
    }

    /// Convenience constructor from `(polynomial, weight)` pairs.
    pub fn from_pairs(ring: &Arc<Ring>, pairs: impl IntoIterator<Item = (Polynomial, Weight)>) -> Result<QReesAlgebra> {
        QReesAlgebra::new(ring, pairs.into_iter().map(|(p, w)| Generator::new(p, w)).collect())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// `N`: lcm of the weight denominators.
    pub fn denominator(&self) -> i64 {
        Weight::common_denominator(self.gens.iter().map(|g| &g.weight))
    }

    /// The level ideal `J_a`, generated by products over minimal index
    /// multisets whose weights sum to at least `a`.
    pub fn level_ideal(&self, a: Weight) -> Ideal {
        if a.is_zero() {
            return Ideal::unit(&self.ring);
        }
        if self.gens.is_empty() {
            return Ideal::zero(&self.ring);
        }
        let mut products = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        self.minimal_products(a, 0, Weight::ZERO, &mut stack, &mut products);
        Ideal::new(&self.ring, products)
    }

    fn minimal_products(
        &self,
        target: Weight,
        from: usize,
        sum: Weight,
        stack: &mut Vec<usize>,
        out: &mut Vec<Polynomial>,
    ) {
        if sum >= target {
            let smallest = stack.iter().map(|&i| self.gens[i].weight).min().unwrap();
            if (sum - smallest) < target {
                let mut prod = Polynomial::one(&self.ring);
                for &i in stack.iter() {
                    prod = &prod * &self.gens[i].poly;
                }
                out.push(prod);
            }
            return;
        }
        for i in from..self.gens.len() {
            stack.push(i);
            self.minimal_products(target, i, sum + self.gens[i].weight, stack, out);
            stack.pop();
        }
    }

    /// `J₁ ⊙ J₂`: concatenated generator lists.
    pub fn odot(&self, other: &QReesAlgebra) -> Result<QReesAlgebra> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(QReesAlgebra {
            ring: self.ring.clone(),
            gens,
        })
    }

    /// `J^b`: every weight `a` becomes `a/b`.
    pub fn scale(&self, b: Weight) -> Result<QReesAlgebra> {
        if b.is_zero() {
            return Err(Error::NonPositiveWeight(b.to_string()));
        }
        Ok(QReesAlgebra {
            ring: self.ring.clone(),
            gens: self
                .gens
                .iter()
                .map(|g| Generator::new(g.poly.clone(), g.weight / b))
                .collect(),
        })
    }

    /// `min_i ord_ξ(f_i) / a_i`; infinity for the zero algebra.
    pub fn ord_at_point(&self, point: &[Scalar]) -> Result<Extended> {
        let mut best = Extended::Infinity;
        for g in &self.gens {
            let o = g.poly.order_at_point(point)?.expect("generators are nonzero");
            let v = Extended::Finite(Weight::int(o as i64) / g.weight);
            best = best.min(v);
        }
        Ok(best)
    }

    /// Ideal of the locus `{ξ : ord(J)(ξ) ≥ ω}`: all Hasse derivatives of
    /// `f_i` of order below `⌈a_i·ω⌉`.
    pub fn order_locus_ideal(&self, omega: Weight) -> Ideal {
        let mut gens = Vec::new();
        for g in &self.gens {
            let need = (g.weight * omega).ceil();
            if need <= 0 {
                continue;
            }
            for alpha in exponents_up_to(self.ring.arity(), (need - 1) as u32) {
                let d = g.poly.hasse_derivative(&alpha).expect("arity matches");
                if !d.is_zero() {
                    gens.push(d);
                }
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `Sing(J) = {ord ≥ 1}` as an ideal.
    pub fn sing_ideal(&self) -> Ideal {
        self.order_locus_ideal(Weight::ONE)
    }

    pub fn sing_locus(&self) -> ClosedSet {
        ClosedSet::from_ideal(self.sing_ideal())
    }

    /// Values `m / a_i` that `ord` can take.
    fn order_candidates(&self) -> Vec<Weight> {
        let mut c: Vec<Weight> = self
            .gens
            .iter()
            .flat_map(|g| {
                let d = g.poly.total_degree().unwrap_or(0);
                (0..=d).map(move |m| Weight::int(m as i64) / g.weight)
            })
            .collect();
        c.sort();
        c.dedup();
        c
    }

    /// Maximum of `ord` over `V(within)` and the ideal of the locus where
    /// it is attained (intersected with `within`). `None` when `V(within)`
    /// is empty or the algebra is zero.
    pub fn max_order_within(&self, within: &Ideal) -> Option<(Weight, Ideal)> {
        if self.gens.is_empty() || within.is_unit() {
            return None;
        }
        let cands = self.order_candidates();
        let feasible = |w: Weight| !self.order_locus_ideal(w).sum(within).is_unit();
        // feasibility is monotone decreasing in ω and holds at ω = 0
        let (mut lo, mut hi) = (0usize, cands.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if feasible(cands[mid]) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let omega = cands[lo];
        Some((omega, self.order_locus_ideal(omega).sum(within)))
    }

    /// `(ω_max, {ord = ω_max})` over the whole chart.
    pub fn max_order_stratum(&self) -> Result<(Weight, ClosedSet)> {
        if self.gens.is_empty() {
            return Err(Error::Precondition(
                "maximal order of the zero algebra is infinite".into(),
            ));
        }
        let (w, ideal) = self
            .max_order_within(&Ideal::zero(&self.ring))
            .expect("nonzero algebra on a nonempty chart");
        Ok((w, ClosedSet::from_ideal(ideal)))
    }

    /// Clears denominators: weights `a_i·N`, returned with `N`.
    pub fn to_integer_grading(&self) -> (QReesAlgebra, i64) {
        let n = self.denominator();
        let scaled = QReesAlgebra {
            ring: self.ring.clone(),
            gens: self
                .gens
                .iter()
                .map(|g| Generator::new(g.poly.clone(), g.weight * Weight::int(n)))
                .collect(),
        };
        (scaled, n)
    }

    /// Adds `f_i·T^m` for `1 ≤ m < n_i`; requires integral weights.
    pub fn monotone_closure(&self) -> Result<QReesAlgebra> {
        let mut gens = Vec::new();
        for g in &self.gens {
            if !g.weight.is_integer() {
                return Err(Error::Precondition(format!("weight {} is not integral", g.weight)));
            }
            gens.push(g.clone());
            for m in (1..g.weight.numer()).rev() {
                gens.push(Generator::new(g.poly.clone(), Weight::int(m)));
            }
        }
        Ok(QReesAlgebra {
            ring: self.ring.clone(),
            gens,
        })
    }

    /// Applies a ring map to every generator, dropping those that vanish.
    pub fn map_polys(&self, target: &Arc<Ring>, f: impl Fn(&Polynomial) -> Polynomial) -> QReesAlgebra {
        QReesAlgebra {
            ring: target.clone(),
            gens: self
                .gens
                .iter()
                .map(|g| Generator::new(f(&g.poly), g.weight))
                .filter(|g| !g.poly.is_zero())
                .collect(),
        }
    }

    pub fn substitute(&self, target: &Arc<Ring>, images: &[Polynomial]) -> QReesAlgebra {
        self.map_polys(target, |p| p.substitute(target, images))
    }
}

impl fmt::Display for QReesAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return writeln!(f, "(zero algebra)");
        }
        for g in &self.gens {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::parse_polynomial;
    use num_traits::Zero;

    fn alg(ring: &Arc<Ring>, gens: &[(&str, &str)]) -> QReesAlgebra {
        QReesAlgebra::from_pairs(
            ring,
            gens.iter()
                .map(|(p, w)| (parse_polynomial(ring, p).unwrap(), w.parse().unwrap())),
        )
        .unwrap()
    }

    fn ideal_eq(a: &Ideal, b: &Ideal) -> bool {
        a.contains_ideal(b) && b.contains_ideal(a)
    }

    fn id(ring: &Arc<Ring>, src: &[&str]) -> Ideal {
        Ideal::new(ring, src.iter().map(|s| parse_polynomial(ring, s).unwrap()).collect())
    }

    #[test]
    fn level_ideal_examples() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let j = alg(&r, &[("x", "3/2"), ("y", "1")]);
        assert!(ideal_eq(&j.level_ideal(Weight::new(3, 2)), &id(&r, &["x", "y^2"])));
        let j = alg(&r, &[("x^2", "1")]);
        assert!(ideal_eq(&j.level_ideal(Weight::int(2)), &id(&r, &["x^4"])));
        assert!(j.level_ideal(Weight::ZERO).is_unit());
        assert!(QReesAlgebra::zero(&r).level_ideal(Weight::ONE).is_zero());
    }

    #[test]
    fn odot_and_scale() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let a = alg(&r, &[("x", "1")]);
        let b = alg(&r, &[("y", "2")]);
        assert_eq!(a.odot(&b).unwrap(), alg(&r, &[("x", "1"), ("y", "2")]));
        assert_eq!(a.odot(&QReesAlgebra::zero(&r)).unwrap(), a);
        assert_eq!(a.odot(&a).unwrap().generators().len(), 2);
        let c = alg(&r, &[("x^2", "1")]);
        assert_eq!(c.scale(Weight::int(2)).unwrap(), alg(&r, &[("x^2", "1/2")]));
        assert_eq!(c.scale(Weight::ONE).unwrap(), c);
        assert!(c.scale(Weight::ZERO).is_err());
        let d = alg(&r, &[("y^3", "2"), ("y^2", "1")]);
        assert_eq!(
            d.scale(Weight::new(2, 3)).unwrap(),
            alg(&r, &[("y^3", "3"), ("y^2", "3/2")])
        );
    }

    #[test]
    fn orders_at_points() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let o = vec![Scalar::zero(); 2];
        assert_eq!(
            alg(&r, &[("x^2+y^3", "2")]).ord_at_point(&o).unwrap(),
            Extended::Finite(Weight::ONE)
        );
        let line = Ring::new(FieldSpec::Rationals, ["y"]);
        assert_eq!(
            alg(&line, &[("y^3", "2"), ("y^2", "1")])
                .ord_at_point(&[Scalar::zero()])
                .unwrap(),
            Extended::Finite(Weight::new(3, 2))
        );
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let p = vec![Scalar::zero(), Scalar::zero(), f2.field.from_int(1)];
        assert_eq!(
            alg(&f2, &[("x^2+y^2*z", "2")]).ord_at_point(&p).unwrap(),
            Extended::Finite(Weight::ONE)
        );
        assert_eq!(QReesAlgebra::zero(&r).ord_at_point(&o).unwrap(), Extended::Infinity);
    }

    #[test]
    fn singular_loci() {
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let s = alg(&f2, &[("x^2+y^2*z", "2")]).sing_locus();
        assert!(s.set_eq(&ClosedSet::from_ideal(id(&f2, &["x", "y"]))));
        let s = alg(&f2, &[("y^2*z", "1")]).sing_locus();
        assert!(s.set_eq(&ClosedSet::new(vec![id(&f2, &["y"]), id(&f2, &["z"])])));
        let r = Ring::new(FieldSpec::Rationals, ["x"]);
        assert!(alg(&r, &[("x", "1")])
            .sing_locus()
            .set_eq(&ClosedSet::from_ideal(id(&r, &["x"]))));
    }

    #[test]
    fn max_strata() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let (w, s) = alg(&r, &[("x^2+y^3", "2")]).max_order_stratum().unwrap();
        assert_eq!(w, Weight::ONE);
        assert!(s.set_eq(&ClosedSet::from_ideal(id(&r, &["x", "y"]))));
        let (w, s) = alg(&r, &[("x", "1")]).max_order_stratum().unwrap();
        assert_eq!(w, Weight::ONE);
        assert!(s.set_eq(&ClosedSet::from_ideal(id(&r, &["x"]))));
        let r3 = Ring::new(FieldSpec::Rationals, ["x", "y", "z"]);
        let (w, s) = alg(&r3, &[("x^2-y^2*z", "2")]).max_order_stratum().unwrap();
        assert_eq!(w, Weight::ONE);
        assert!(s.set_eq(&ClosedSet::from_ideal(id(&r3, &["x", "y"]))));
        assert!(QReesAlgebra::zero(&r).max_order_stratum().is_err());
    }

    #[test]
    fn integer_grading_and_closure() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let (a, n) = alg(&r, &[("x", "3/2")]).to_integer_grading();
        assert_eq!((a, n), (alg(&r, &[("x", "3")]), 2));
        let (a, n) = alg(&r, &[("x", "1/2"), ("y", "1/3")]).to_integer_grading();
        assert_eq!((a, n), (alg(&r, &[("x", "3"), ("y", "2")]), 6));
        let i = alg(&r, &[("x", "2")]);
        assert_eq!(i.to_integer_grading(), (i.clone(), 1));
        assert_eq!(i.monotone_closure().unwrap(), alg(&r, &[("x", "2"), ("x", "1")]));
        let j = alg(&r, &[("x", "3"), ("y", "1")]);
        assert_eq!(
            j.monotone_closure().unwrap(),
            alg(&r, &[("x", "3"), ("x", "2"), ("x", "1"), ("y", "1")])
        );
        assert!(alg(&r, &[("x", "1/2")]).monotone_closure().is_err());
    }

    #[test]
    fn zero_weight_rejected() {
        let r = Ring::new(FieldSpec::Rationals, ["x"]);
        let g = Generator::new(Polynomial::var(&r, 0), Weight::ZERO);
        assert!(matches!(
            QReesAlgebra::new(&r, vec![g]),
            Err(Error::NonPositiveWeight(_))
        ));
    }
}
