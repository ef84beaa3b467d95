//! Sparse multivariate polynomials with exact coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{binomial, FieldSpec, Scalar};

pub type Exponent = Vec<u32>;

/// The coordinate ring of an affine chart: a field and an ordered list of
/// variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: FieldSpec,
    pub vars: Vec<String>,
}

impl Ring {
    pub fn new<S: Into<String>>(field: FieldSpec, vars: impl IntoIterator<Item = S>) -> Arc<Ring> {
        Arc::new(Ring {
            field,
            vars: vars.into_iter().map(Into::into).collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// The ring with variable `idx` removed.
    pub fn without(&self, idx: usize) -> Arc<Ring> {
        let mut vars = self.vars.clone();
        vars.remove(idx);
        Arc::new(Ring {
            field: self.field,
            vars,
        })
    }

    /// The ring with one fresh variable appended; the name avoids clashes.
    pub fn with_fresh_var(&self, hint: &str) -> Arc<Ring> {
        let mut name = hint.to_string();
        while self.vars.contains(&name) {
            name.push('_');
        }
        let mut vars = self.vars.clone();
        vars.push(name);
        Arc::new(Ring {
            field: self.field,
            vars,
        })
    }
}

/// Polynomial over a [`Ring`]. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Exponent, Scalar>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Polynomial {
        Self::monomial(ring, vec![0; ring.arity()], c)
    }

    pub fn one(ring: &Arc<Ring>) -> Polynomial {
        Self::constant(ring, Scalar::one())
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> Polynomial {
        Self::constant(ring, ring.field.from_int(n))
    }

    pub fn var(ring: &Arc<Ring>, idx: usize) -> Polynomial {
        let mut e = vec![0; ring.arity()];
        e[idx] = 1;
        Self::monomial(ring, e, Scalar::one())
    }

    pub fn monomial(ring: &Arc<Ring>, exp: Exponent, c: Scalar) -> Polynomial {
        assert_eq!(exp.len(), ring.arity(), "exponent arity");
        let c = ring.field.normalize(c);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.len(), ring.arity(), "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant term value (zero if absent).
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&vec![0; self.ring.arity()])
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn coefficient(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    fn add_term(&mut self, e: Exponent, c: Scalar) {
        let field = self.ring.field;
        let c = field.normalize(c);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = field.add(v, &c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(
            self.ring == other.ring,
            "polynomials from different rings: {:?} vs {:?}",
            self.ring.vars,
            other.ring.vars
        );
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let field = self.ring.field;
        Polynomial::from_terms(&self.ring, self.terms.iter().map(|(e, v)| (e.clone(), field.mul(v, c))))
    }

    /// Multiplies by the monomial `c·x^e`.
    pub fn mul_term(&self, e: &[u32], c: &Scalar) -> Polynomial {
        let field = self.ring.field;
        Polynomial::from_terms(
            &self.ring,
            self.terms.iter().map(|(f, v)| {
                let ex = f.iter().zip(e).map(|(a, b)| a + b).collect();
                (ex, field.mul(v, c))
            }),
        )
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divided-power (Hasse) derivative `D^(α)`:
    /// `x^β ↦ binom(β, α)·x^(β−α)`.
    pub fn hasse_derivative(&self, alpha: &[u32]) -> Result<Polynomial> {
        if alpha.len() != self.ring.arity() {
            return Err(Error::ArityMismatch {
                expected: self.ring.arity(),
                got: alpha.len(),
            });
        }
        let field = self.ring.field;
        let mut out = Polynomial::zero(&self.ring);
        for (beta, c) in &self.terms {
            if beta.iter().zip(alpha).any(|(b, a)| b < a) {
                continue;
            }
            let mut coeff = BigInt::one();
            for (b, a) in beta.iter().zip(alpha) {
                coeff *= binomial(*b, *a);
            }
            let c = field.mul(c, &field.from_int(coeff));
            let e = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Evaluates `self` after substituting `images[j]` for variable `j`.
    /// The images all live in `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.arity(), "substitution arity");
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = powers.entry((j, k)).or_insert_with(|| images[j].pow(k)).clone();
                term = &term * &p;
            }
            out = &out + &term;
        }
        out
    }

    /// Translates the origin to `point`: `x_j ↦ x_j + c_j`.
    pub fn taylor_shift(&self, point: &[Scalar]) -> Result<Polynomial> {
        if point.len() != self.ring.arity() {
            return Err(Error::ArityMismatch {
                expected: self.ring.arity(),
                got: point.len(),
            });
        }
        if point.iter().all(Zero::is_zero) {
            return Ok(self.clone());
        }
        let images: Vec<Polynomial> = (0..self.ring.arity())
            .map(|j| &Polynomial::var(&self.ring, j) + &Polynomial::constant(&self.ring, point[j].clone()))
            .collect();
        Ok(self.substitute(&self.ring, &images))
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        Ok(self.taylor_shift(point)?.constant_term())
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Order at a rational point (`None` means infinity, i.e. `self = 0`).
    pub fn order_at_point(&self, point: &[Scalar]) -> Result<Option<u32>> {
        Ok(self.taylor_shift(point)?.low_degree())
    }

    /// Largest `e` with `x_var^e | self` (`None` for zero).
    pub fn divisor_valuation(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// Exact quotient by `x_var^k`, if divisible.
    pub fn divide_by_var_power(&self, var: usize, k: u32) -> Option<Polynomial> {
        if k == 0 {
            return Some(self.clone());
        }
        if self.terms.keys().any(|e| e[var] < k) {
            return None;
        }
        Some(Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] -= k;
                    (e, c.clone())
                })
                .collect(),
        })
    }

    /// Sets `x_var = 0` and drops that variable: the image in `ring.without(var)`.
    pub fn restrict_to_zero(&self, var: usize, sub: &Arc<Ring>) -> Polynomial {
        Polynomial {
            ring: sub.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] == 0)
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.remove(var);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    /// Fails if a variable actually used is missing in the target.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ring.arity());
        for (j, name) in self.ring.vars.iter().enumerate() {
            let idx = target.index_of(name);
            if idx.is_none() && self.involves(j) {
                return Err(Error::UnknownVariable(name.clone()));
            }
            map.push(idx);
        }
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut f = vec![0; target.arity()];
            for (j, &k) in e.iter().enumerate() {
                if let Some(t) = map[j] {
                    f[t] = k;
                }
            }
            out.add_term(f, c.clone());
        }
        Ok(out)
    }

    /// Makes the coefficient of the display-leading term one (no-op for zero).
    pub fn monic(&self) -> Polynomial {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.ring.field.inv(c)),
        }
    }

    /// Terms in display order: ascending total degree, then descending
    /// lexicographic order within a degree.
    fn display_terms(&self) -> Vec<(&Exponent, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.ring.field;
        for (i, (e, c)) in self.display_terms().into_iter().enumerate() {
            let negative = field.is_negative(c);
            let mag = if negative { -c.clone() } else { c.clone() };
            if negative {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        self.ring.vars[j].clone()
                    } else {
                        format!("{}^{}", self.ring.vars[j], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", field.scalar_to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", field.scalar_to_string(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let field = self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), field.neg(c))).collect(),
        }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let field = self.ring.field;
        let mut acc: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let e: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter_map(|(e, c)| {
                let c = field.normalize(c);
                (!c.is_zero()).then_some((e, c))
            })
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }
}

/// All exponent vectors of `arity` entries with total degree `≤ max`,
/// ordered by degree and then lexicographically descending.
pub fn exponents_up_to(arity: usize, max: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=max {
        let mut level = Vec::new();
        exact_degree(arity, d, &mut vec![0; arity], 0, &mut level);
        level.sort_by(|a, b| b.cmp(a));
        out.extend(level);
    }
    out
}

fn exact_degree(arity: usize, remaining: u32, cur: &mut Exponent, pos: usize, out: &mut Vec<Exponent>) {
    if arity == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == arity - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for k in 0..=remaining {
        cur[pos] = k;
        exact_degree(arity, remaining - k, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn q(vars: &[&str]) -> Arc<Ring> {
        Ring::new(FieldSpec::Rationals, vars.iter().copied())
    }

    fn f2(vars: &[&str]) -> Arc<Ring> {
        Ring::new(FieldSpec::PrimeField(2), vars.iter().copied())
    }

    #[test]
    fn hasse_char_two_example() {
        let r = f2(&["x", "y", "z"]);
        let f = parse_polynomial(&r, "x^2 + y^2*z").unwrap();
        assert_eq!(f.hasse_derivative(&[0, 0, 1]).unwrap().to_string(), "y^2");
        assert!(f.hasse_derivative(&[1, 0, 0]).unwrap().is_zero());
        // the second Hasse derivative in x survives where ∂²/∂x² would not
        assert_eq!(f.hasse_derivative(&[2, 0, 0]).unwrap().to_string(), "1");
    }

    #[test]
    fn hasse_cubic() {
        let r = q(&["x"]);
        let f = parse_polynomial(&r, "x^3").unwrap();
        assert_eq!(f.hasse_derivative(&[2]).unwrap().to_string(), "3*x");
        assert!(f.hasse_derivative(&[1, 0]).is_err());
    }

    #[test]
    fn orders() {
        let r = q(&["x", "y"]);
        let f = parse_polynomial(&r, "x^2 + y^3").unwrap();
        let origin = vec![Scalar::zero(), Scalar::zero()];
        assert_eq!(f.order_at_point(&origin).unwrap(), Some(2));
        assert_eq!(Polynomial::zero(&r).order_at_point(&origin).unwrap(), None);

        let r3 = Ring::new(FieldSpec::PrimeField(3), ["x"]);
        let g = parse_polynomial(&r3, "x^3").unwrap();
        assert_eq!(g.order_at_point(&[r3.field.from_int(2)]).unwrap(), Some(0));
    }

    #[test]
    fn valuations() {
        let r = q(&["x", "y", "z"]);
        let f = parse_polynomial(&r, "x^2*z^2 + y^2*z^3").unwrap();
        assert_eq!(f.divisor_valuation(2), Some(2));
        let g = parse_polynomial(&r, "x^2 + y").unwrap();
        assert_eq!(g.divisor_valuation(1), Some(0));
        let h = parse_polynomial(&r, "y^2*z^2").unwrap();
        assert_eq!(h.divisor_valuation(1), Some(2));
        assert_eq!(Polynomial::zero(&r).divisor_valuation(0), None);
    }

    #[test]
    fn display_order() {
        let r = q(&["x", "y", "z"]);
        let f = parse_polynomial(&r, "y^2*z + x^2 - 3/2*x*y").unwrap();
        assert_eq!(f.to_string(), "x^2-3/2*x*y+y^2*z");
        let g = parse_polynomial(&r, "x*y^3 + 1").unwrap();
        assert_eq!(g.to_string(), "1+x*y^3");
    }

    #[test]
    fn exponent_enumeration() {
        let e = exponents_up_to(2, 1);
        assert_eq!(e, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(exponents_up_to(3, 2).len(), 10);
    }
}
