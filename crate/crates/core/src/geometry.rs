//! Charts of blowups at coordinate centers, divisor bookkeeping, transforms,
//! coefficient and elimination algebras, and maximal contact.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ideal::Ideal;
use crate::poly::{Polynomial, Ring};
use crate::rees::{Generator, QReesAlgebra};
use crate::saturation::diff_saturate;
use crate::weight::{Extended, Weight};

/// A coordinate divisor `V(x_var)` and the blowup step that created it
/// (0 for input divisors).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DivisorRecord {
    pub var: usize,
    pub created: usize,
}

/// The triangular change `x_var ↦ image`, where `image − x_var` does not
/// involve `x_var`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateChange {
    pub var: usize,
    pub image: Polynomial,
}

impl CoordinateChange {
    pub fn images(&self) -> Vec<Polynomial> {
        let ring = self.image.ring();
        (0..ring.arity())
            .map(|j| {
                if j == self.var {
                    self.image.clone()
                } else {
                    Polynomial::var(ring, j)
                }
            })
            .collect()
    }

    pub fn apply(&self, j: &QReesAlgebra) -> QReesAlgebra {
        j.substitute(j.ring(), &self.images())
    }

    pub fn apply_ideal(&self, i: &Ideal) -> Ideal {
        i.substitute(i.ring(), &self.images())
    }
}

impl fmt::Display for CoordinateChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.image.ring().vars[self.var], self.image)
    }
}

/// Link from a chart to its parent: parent variable `j` equals
/// `substitution[j]` written in the child's coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ParentLink {
    pub id: String,
    pub substitution: Vec<Polynomial>,
}

/// One affine chart of the blowup tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub id: String,
    pub ring: Arc<Ring>,
    pub parent: Option<ParentLink>,
    pub divisors: Vec<DivisorRecord>,
    pub coordinate_changes: Vec<CoordinateChange>,
}

impl Chart {
    pub fn root(ring: &Arc<Ring>, divisors: Vec<DivisorRecord>) -> Result<Chart> {
        let mut seen = vec![false; ring.arity()];
        for d in &divisors {
            if d.var >= ring.arity() {
                return Err(Error::Precondition(format!(
                    "divisor variable index {} out of range",
                    d.var
                )));
            }
            if std::mem::replace(&mut seen[d.var], true) {
                return Err(Error::Precondition(format!(
                    "two divisors on variable {}",
                    ring.vars[d.var]
                )));
            }
        }
        let mut divisors = divisors;
        divisors.sort_by_key(|d| (d.created, d.var));
        Ok(Chart {
            id: "0".to_string(),
            ring: ring.clone(),
            parent: None,
            divisors,
            coordinate_changes: Vec::new(),
        })
    }

    pub fn divisor_on(&self, var: usize) -> Option<&DivisorRecord> {
        self.divisors.iter().find(|d| d.var == var)
    }
}

/// Images of the chart variables for the `x_c`-chart of the blowup along
/// `V(x_j : j ∈ center)`.
pub fn blowup_images(ring: &Arc<Ring>, center: &[usize], chart_var: usize) -> Vec<Polynomial> {
    let xc = Polynomial::var(ring, chart_var);
    (0..ring.arity())
        .map(|j| {
            let xj = Polynomial::var(ring, j);
            if j != chart_var && center.contains(&j) {
                &xj * &xc
            } else {
                xj
            }
        })
        .collect()
}

fn check_center(ring: &Arc<Ring>, center: &[usize], chart_var: usize) -> Result<()> {
    if center.is_empty() {
        return Err(Error::Precondition("empty center".into()));
    }
    if let Some(&bad) = center.iter().find(|&&c| c >= ring.arity()) {
        return Err(Error::Precondition(format!("center variable index {bad} out of range")));
    }
    if !center.contains(&chart_var) {
        return Err(Error::Precondition(format!(
            "chart variable {} is not in the center",
            ring.vars.get(chart_var).map(String::as_str).unwrap_or("?")
        )));
    }
    Ok(())
}

/// The `chart_var` chart of the blowup of `parent` along `V(x_center)`, after
/// first applying `changes` to the parent coordinates. The new exceptional
/// divisor gets creation index `created`.
pub fn blowup_chart(
    parent: &Chart,
    center: &[usize],
    chart_var: usize,
    created: usize,
    changes: &[CoordinateChange],
) -> Result<Chart> {
    let ring = &parent.ring;
    check_center(ring, center, chart_var)?;
    for ch in changes {
        if parent.divisor_on(ch.var).is_some() {
            return Err(Error::Precondition(format!(
                "coordinate change on divisor variable {}",
                ring.vars[ch.var]
            )));
        }
    }
    let images = blowup_images(ring, center, chart_var);
    let mut substitution: Vec<Polynomial> = (0..ring.arity()).map(|j| Polynomial::var(ring, j)).collect();
    for ch in changes {
        let step = ch.images();
        substitution = substitution.iter().map(|p| p.substitute(ring, &step)).collect();
    }
    let substitution = substitution.iter().map(|p| p.substitute(ring, &images)).collect();
    let mut divisors: Vec<DivisorRecord> = parent.divisors.iter().copied().filter(|d| d.var != chart_var).collect();
    divisors.push(DivisorRecord {
        var: chart_var,
        created,
    });
    Ok(Chart {
        id: format!("{}.{}", parent.id, ring.vars[chart_var]),
        ring: ring.clone(),
        parent: Some(ParentLink {
            id: parent.id.clone(),
            substitution,
        }),
        divisors,
        coordinate_changes: changes.to_vec(),
    })
}

/// `ℓ_H = min ν_H(f_i)/a_i` for `H = V(x_var)`; infinite for the zero algebra.
pub fn ell_value(j: &QReesAlgebra, var: usize) -> Extended {
    j.generators()
        .iter()
        .map(|g| {
            let v = g.poly.divisor_valuation(var).expect("generators are nonzero");
            Extended::Finite(Weight::int(v as i64) / g.weight)
        })
        .min()
        .unwrap_or(Extended::Infinity)
}

/// Replaces each `f_i` by `f_i / x_var^{⌈a_i·ell⌉}`.
pub fn divide_by_divisor(j: &QReesAlgebra, var: usize, ell: Weight) -> Result<QReesAlgebra> {
    if Extended::Finite(ell) > ell_value(j, var) {
        return Err(Error::Precondition(format!(
            "I({})^{} does not divide the algebra",
            j.ring().vars[var],
            ell
        )));
    }
    let gens = j
        .generators()
        .iter()
        .map(|g| {
            let k = (g.weight * ell).ceil() as u32;
            let q = g.poly.divide_by_var_power(var, k).expect("valuation checked");
            Generator::new(q, g.weight)
        })
        .collect();
    QReesAlgebra::new(j.ring(), gens)
}

/// Divides out `ℓ_H` for each listed divisor variable, returning the quotient
/// and the `ℓ` values in the given order. A generator `f·T^a` for which some
/// `a·ℓ_H` is fractional is first replaced by `f^k·T^{ka}` with the least `k`
/// making every exponent integral, so the division is exact and
/// `ord(quotient) = ord(J) − Σ_{H∋ξ} ℓ_H`.
pub fn non_monomial_part(j: &QReesAlgebra, vars: &[usize]) -> (QReesAlgebra, Vec<Extended>) {
    let ells: Vec<Extended> = vars.iter().map(|&v| ell_value(j, v)).collect();
    let finite: Vec<(usize, Weight)> = vars
        .iter()
        .zip(&ells)
        .filter_map(|(&v, l)| match l {
            Extended::Finite(w) if !w.is_zero() => Some((v, *w)),
            _ => None,
        })
        .collect();
    let gens = j
        .generators()
        .iter()
        .map(|g| {
            let k = finite
                .iter()
                .fold(1i64, |acc, (_, l)| num_integer::lcm(acc, (g.weight * *l).denom()));
            let weight = g.weight * Weight::int(k);
            let mut poly = g.poly.pow(k as u32);
            for &(v, l) in &finite {
                let e = (weight * l).numer() as u32;
                poly = poly.divide_by_var_power(v, e).expect("valuation bounds the exponent");
            }
            Generator::new(poly, weight)
        })
        .collect();
    (QReesAlgebra::new(j.ring(), gens).expect("weights are positive"), ells)
}

/// Controlled transform along the `chart_var` chart of the blowup with
/// center `V(x_center)`: substitute, then divide by the exceptional divisor
/// with `ℓ = 1`. The center must lie in `Sing(J)`.
pub fn transform(j: &QReesAlgebra, center: &[usize], chart_var: usize) -> Result<QReesAlgebra> {
    let ring = j.ring();
    check_center(ring, center, chart_var)?;
    let c = Ideal::coordinate(ring, center);
    if let Some(g) = j.sing_ideal().generators().iter().find(|g| !c.contains(g)) {
        return Err(Error::Precondition(format!(
            "center V({}) is not contained in Sing: {} does not vanish on it",
            center
                .iter()
                .map(|&v| ring.vars[v].as_str())
                .collect::<Vec<_>>()
                .join(","),
            g
        )));
    }
    let total = j.substitute(ring, &blowup_images(ring, center, chart_var));
    divide_by_divisor(&total, chart_var, Weight::ONE)
}

/// `Coeff_V(J)` for `V = V(x_var)`: `Diff(J)` restricted to `x_var = 0`, in
/// the ring without `x_var`.
pub fn coefficient_algebra(j: &QReesAlgebra, var: usize) -> QReesAlgebra {
    let sub = j.ring().without(var);
    diff_saturate(j).map_polys(&sub, |p| p.restrict_to_zero(var, &sub))
}

/// Generators of `J` not involving `x_var`, viewed in the ring without it.
pub fn elimination_algebra(j: &QReesAlgebra, var: usize) -> QReesAlgebra {
    let sub = j.ring().without(var);
    let gens = j
        .generators()
        .iter()
        .filter(|g| !g.poly.involves(var))
        .map(|g| Generator::new(g.poly.restrict_to_zero(var, &sub), g.weight))
        .collect();
    QReesAlgebra::new(&sub, gens).expect("weights are positive")
}

/// A hypersurface of maximal contact `V(x_var)`, reached after `change`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalContact {
    pub var: usize,
    pub change: Option<CoordinateChange>,
}

/// Splits `g` as `c·x_v + h` with `c` a nonzero constant and `h` free of `x_v`.
fn linear_in(g: &Polynomial, v: usize) -> Option<(Scalar, Polynomial)> {
    if g.degree_in(v) != Some(1) {
        return None;
    }
    let ring = g.ring();
    let mut c = None;
    let mut h = Polynomial::zero(ring);
    for (e, coeff) in g.terms() {
        if e[v] == 1 {
            if e.iter().enumerate().any(|(j, &k)| j != v && k > 0) {
                return None;
            }
            c = Some(coeff.clone());
        } else {
            h = &h + &Polynomial::monomial(ring, e.clone(), coeff.clone());
        }
    }
    c.map(|c| (c, h))
}

/// Splits `g = u·x_v` with `u` free of `x_v`.
fn unit_multiple_of(g: &Polynomial, v: usize) -> Option<Polynomial> {
    if g.degree_in(v) != Some(1) || g.divisor_valuation(v) != Some(1) {
        return None;
    }
    let u = g.divide_by_var_power(v, 1)?;
    (!u.involves(v)).then_some(u)
}

/// Looks for a weight ≥ 1 generator of `Diff(J)` cutting out a smooth
/// hypersurface containing `V(stratum)`: first `c·x_v`, then `u·x_v` with
/// `u` nowhere zero on the stratum, then `c·x_v + h` (solved by a
/// triangular change, never on a variable in `frozen`).
pub fn find_maximal_contact(j: &QReesAlgebra, stratum: &Ideal, frozen: &[usize]) -> Result<MaximalContact> {
    let ring = j.ring();
    let p = ring.field.characteristic();
    if p != 0 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    let diff = diff_saturate(j);
    let linear: Vec<&Polynomial> = diff
        .generators()
        .iter()
        .filter(|g| g.weight >= Weight::ONE)
        .map(|g| &g.poly)
        .collect();
    for v in 0..ring.arity() {
        if linear.iter().any(|g| linear_in(g, v).is_some_and(|(_, h)| h.is_zero())) {
            return Ok(MaximalContact { var: v, change: None });
        }
    }
    for v in 0..ring.arity() {
        for g in &linear {
            if let Some(u) = unit_multiple_of(g, v) {
                if stratum.sum(&Ideal::new(ring, vec![u])).is_unit() {
                    return Ok(MaximalContact { var: v, change: None });
                }
            }
        }
    }
    for v in (0..ring.arity()).filter(|v| !frozen.contains(v)) {
        for g in &linear {
            if let Some((c, h)) = linear_in(g, v) {
                let shift = h.scale(&ring.field.inv(&c));
                let image = &Polynomial::var(ring, v) - &shift;
                return Ok(MaximalContact {
                    var: v,
                    change: Some(CoordinateChange { var: v, image }),
                });
            }
        }
    }
    Err(Error::ChartSplitRequired(
        "no weight-one generator of Diff(J) defines a hypersurface of maximal contact on this chart".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::ideal::ClosedSet;
    use crate::parse::parse_polynomial;

    fn alg(ring: &Arc<Ring>, gens: &[(&str, &str)]) -> QReesAlgebra {
        QReesAlgebra::from_pairs(
            ring,
            gens.iter()
                .map(|(p, w)| (parse_polynomial(ring, p).unwrap(), w.parse().unwrap())),
        )
        .unwrap()
    }

    fn p(ring: &Arc<Ring>, s: &str) -> Polynomial {
        parse_polynomial(ring, s).unwrap()
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn ell_examples() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y", "z"]);
        assert_eq!(ell_value(&alg(&r, &[("x^2*y", "2")]), 0), Extended::Finite(w("1")));
        assert_eq!(
            ell_value(&alg(&r, &[("x^2*z^2+y^2*z^3", "2")]), 2),
            Extended::Finite(w("1"))
        );
        assert_eq!(ell_value(&alg(&r, &[("x^2+y", "2")]), 1), Extended::Finite(w("0")));
        assert_eq!(ell_value(&QReesAlgebra::zero(&r), 1), Extended::Infinity);
    }

    #[test]
    fn division_examples() {
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let j = alg(&f2, &[("x^2*z^2+y^2*z^3", "2")]);
        assert_eq!(
            divide_by_divisor(&j, 2, w("1")).unwrap(),
            alg(&f2, &[("x^2+y^2*z", "2")])
        );
        let j = alg(&f2, &[("y^2*z^2", "1")]);
        assert_eq!(divide_by_divisor(&j, 2, w("1")).unwrap(), alg(&f2, &[("y^2*z", "1")]));
        assert_eq!(divide_by_divisor(&j, 2, w("0")).unwrap(), j);
        assert!(divide_by_divisor(&j, 2, w("3")).is_err());
    }

    #[test]
    fn non_monomial_examples() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let (q, l) = non_monomial_part(&alg(&r, &[("x^2*y^2+y^3", "2")]), &[1]);
        assert_eq!((q, l), (alg(&r, &[("x^2+y", "2")]), vec![Extended::Finite(w("1"))]));
        let j = alg(&r, &[("x^2+y", "2")]);
        assert_eq!(non_monomial_part(&j, &[1]), (j, vec![Extended::Finite(w("0"))]));
        let (q, l) = non_monomial_part(&alg(&r, &[("x^2*y^3", "1")]), &[0, 1]);
        assert_eq!(q, alg(&r, &[("1", "1")]));
        assert_eq!(l, vec![Extended::Finite(w("2")), Extended::Finite(w("3"))]);
        let (q, l) = non_monomial_part(&alg(&r, &[("y*x", "2"), ("y", "1")]), &[1]);
        assert_eq!(q, alg(&r, &[("x", "2"), ("y", "2")]));
        assert_eq!(l, vec![Extended::Finite(w("1/2"))]);
    }

    #[test]
    fn blowup_examples() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let images = blowup_images(&r, &[0, 1], 1);
        assert_eq!(p(&r, "x^2+y^3").substitute(&r, &images), p(&r, "x^2*y^2+y^3"));
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let images = blowup_images(&f2, &[0, 1, 2], 2);
        assert_eq!(p(&f2, "x^2+y^2*z").substitute(&f2, &images), p(&f2, "x^2*z^2+y^2*z^3"));

        let root = Chart::root(&r, vec![DivisorRecord { var: 0, created: 0 }]).unwrap();
        let child = blowup_chart(&root, &[0, 1], 1, 1, &[]).unwrap();
        assert_eq!(
            child.divisors,
            vec![
                DivisorRecord { var: 0, created: 0 },
                DivisorRecord { var: 1, created: 1 }
            ]
        );
        assert_eq!(child.id, "0.y");
        let other = blowup_chart(&root, &[0, 1], 0, 1, &[]).unwrap();
        assert_eq!(other.divisors, vec![DivisorRecord { var: 0, created: 1 }]);
        assert!(blowup_chart(&root, &[1], 0, 1, &[]).is_err());
    }

    #[test]
    fn transform_examples() {
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let j = alg(&f2, &[("x^2+y^2*z", "2")]);
        assert_eq!(transform(&j, &[0, 1, 2], 2).unwrap(), j);
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let j = alg(&r, &[("x^2+y^3", "2")]);
        assert_eq!(transform(&j, &[0, 1], 1).unwrap(), alg(&r, &[("x^2+y", "2")]));
        assert_eq!(transform(&j, &[0, 1], 0).unwrap(), alg(&r, &[("1+x*y^3", "2")]));
        assert!(matches!(transform(&j, &[1], 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn coefficient_examples() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let sub = r.without(0);
        let c = coefficient_algebra(&alg(&r, &[("x^2+y^3", "2")]), 0);
        assert_eq!(c, alg(&sub, &[("y^3", "2"), ("3*y^2", "1")]));
        assert!(coefficient_algebra(&alg(&r, &[("x", "1")]), 0).is_zero());
        let r3 = Ring::new(FieldSpec::Rationals, ["x", "y", "z"]);
        let sub = r3.without(0);
        let c = coefficient_algebra(&alg(&r3, &[("x^2-y^2*z", "2")]), 0);
        assert_eq!(c, alg(&sub, &[("-y^2*z", "2"), ("-2*y*z", "1"), ("-y^2", "1")]));
    }

    #[test]
    fn elimination_examples() {
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let e = elimination_algebra(&diff_saturate(&alg(&f2, &[("x^2+y^2*z", "2")])), 0);
        assert_eq!(e, alg(&f2.without(0), &[("y^2", "1")]));
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let e = elimination_algebra(&diff_saturate(&alg(&r, &[("x^2+y^3", "2")])), 0);
        assert_eq!(e, alg(&r.without(0), &[("3*y^2", "1")]));
        assert!(elimination_algebra(&alg(&r, &[("x*y", "1")]), 0).is_zero());
    }

    #[test]
    fn char_two_elimination_is_unstable() {
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y", "z"]);
        let j = alg(&f2, &[("x^2+y^2*z", "2")]);
        let j1 = transform(&j, &[0, 1, 2], 2).unwrap();
        let a1 = transform(&elimination_algebra(&diff_saturate(&j), 0), &[0, 1], 1).unwrap();
        let sing_j1 = ClosedSet::from_ideal(j1.sing_ideal().eliminate(&[0]));
        let sing_a1 = a1.sing_locus();
        assert!(sing_j1.is_subset_of(&sing_a1));
        assert!(!sing_a1.is_subset_of(&sing_j1));
    }

    #[test]
    fn maximal_contact_examples() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let origin = Ideal::coordinate(&r, &[0, 1]);
        let m = find_maximal_contact(&alg(&r, &[("x^2+y^3", "2")]), &origin, &[]).unwrap();
        assert_eq!(m, MaximalContact { var: 0, change: None });
        let j = alg(&r, &[("(x+y^2)^2+y^5", "2")]);
        let m = find_maximal_contact(&j, &origin, &[]).unwrap();
        assert_eq!(m.var, 0);
        let ch = m.change.unwrap();
        assert_eq!(ch.image, p(&r, "x-y^2"));
        assert_eq!(ch.apply(&j), alg(&r, &[("x^2+y^5", "2")]));
        let f2 = Ring::new(FieldSpec::PrimeField(2), ["x", "y"]);
        let j = alg(&f2, &[("x^2+y^3", "2")]);
        assert!(matches!(
            find_maximal_contact(&j, &Ideal::coordinate(&f2, &[0, 1]), &[]),
            Err(Error::UnsupportedCharacteristic(2))
        ));
        let j = alg(&r, &[("x^2*y^2+y^3", "2")]);
        assert!(matches!(
            find_maximal_contact(&j, &origin, &[]),
            Err(Error::ChartSplitRequired(_))
        ));
    }
}
