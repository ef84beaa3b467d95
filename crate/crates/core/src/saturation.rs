//! Differential saturation, the level functions ν and ν̄, and
//! semi-decisions for integral membership and equivalence.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{exponents_up_to, Polynomial};
use crate::rees::{Generator, QReesAlgebra};
use crate::weight::{Extended, Weight};

/// `Diff(J)`: Hasse derivatives `D^α f_i` at weight `a_i − |α|`, kept while
/// the weight stays positive. Zero derivatives are dropped.
pub fn diff_saturate(j: &QReesAlgebra) -> QReesAlgebra {
    let ring = j.ring();
    let mut gens = Vec::new();
    for g in j.generators() {
        let top = g.weight.ceil() - 1;
        for alpha in exponents_up_to(ring.arity(), top.max(0) as u32) {
            let order: u32 = alpha.iter().sum();
            let w = g.weight - Weight::int(order as i64);
            if w.is_zero() || w < Weight::ZERO {
                continue;
            }
            let d = g.poly.hasse_derivative(&alpha).expect("arity matches");
            if !d.is_zero() {
                gens.push(Generator::new(d, w));
            }
        }
    }
    QReesAlgebra::new(ring, gens).expect("weights are positive")
}

/// Result of evaluating ν on the weight grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuValue {
    Value(Weight),
    CapReached,
    Infinity,
}

impl fmt::Display for NuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NuValue::Value(w) => write!(f, "{w}"),
            NuValue::CapReached => f.write_str("cap reached"),
            NuValue::Infinity => f.write_str("inf"),
        }
    }
}

fn check_ring(j: &QReesAlgebra, f: &Polynomial) -> Result<()> {
    if j.ring() != f.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// `ν(f) = sup{a : f·T^a ∈ J}`, searched on the grid `m/N` up to `cap`.
pub fn nu(j: &QReesAlgebra, f: &Polynomial, cap: Weight) -> Result<NuValue> {
    check_ring(j, f)?;
    if cap.is_zero() {
        return Err(Error::NonPositiveWeight(cap.to_string()));
    }
    if f.is_zero() {
        return Ok(NuValue::Infinity);
    }
    let n = j.denominator();
    let top = (cap * Weight::int(n)).floor();
    let member = |m: i64| j.level_ideal(Weight::new(m, n)).contains(f);
    if member(top) {
        return Ok(NuValue::CapReached);
    }
    // member(0) holds since level 0 is the unit ideal
    let (mut lo, mut hi) = (0i64, top);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if member(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(NuValue::Value(Weight::new(lo, n)))
}

/// Lower bound `max_{n ≤ n_max} ν(f^n)/n` for ν̄(f). A capped probe
/// contributes the cap itself.
pub fn nu_bar_estimate(j: &QReesAlgebra, f: &Polynomial, n_max: u32, cap: Weight) -> Result<Extended> {
    check_ring(j, f)?;
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    if f.is_zero() {
        return Ok(Extended::Infinity);
    }
    let mut best = Weight::ZERO;
    for n in 1..=n_max {
        let scale = Weight::int(n as i64);
        let v = match nu(j, &f.pow(n), cap * scale)? {
            NuValue::Value(w) => w / scale,
            NuValue::CapReached => cap,
            NuValue::Infinity => unreachable!("f is nonzero"),
        };
        best = best.max(v);
    }
    Ok(Extended::Finite(best))
}

/// Outcome of an integral membership probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    /// `f ∈ J_a` directly.
    Member,
    /// `f^n ∈ J_{a·n}` for the recorded `n > 1`.
    MemberWitness { n: u32, a: Weight },
    /// No witness with `n ≤ n_max`; not a proof of non-membership.
    NonMemberAtCap,
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        !matches!(self, MembershipVerdict::NonMemberAtCap)
    }
}

impl fmt::Display for MembershipVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipVerdict::Member => f.write_str("member"),
            MembershipVerdict::MemberWitness { n, a } => write!(f, "member (witness n={n}, a={a})"),
            MembershipVerdict::NonMemberAtCap => f.write_str("no witness found"),
        }
    }
}

/// Looks for `n ≤ n_max` with `f^n ∈ J_{a·n}`. Probes whose level `a·n`
/// exceeds `cap` are skipped.
pub fn is_integral_member(
    j: &QReesAlgebra,
    f: &Polynomial,
    a: Weight,
    n_max: u32,
    cap: Weight,
) -> Result<MembershipVerdict> {
    check_ring(j, f)?;
    if a.is_zero() {
        return Err(Error::NonPositiveWeight(a.to_string()));
    }
    if f.is_zero() {
        return Ok(MembershipVerdict::Member);
    }
    for n in 1..=n_max.max(1) {
        let level = a * Weight::int(n as i64);
        if level > cap {
            break;
        }
        if j.level_ideal(level).contains(&f.pow(n)) {
            return Ok(if n == 1 {
                MembershipVerdict::Member
            } else {
                MembershipVerdict::MemberWitness { n, a }
            });
        }
    }
    Ok(MembershipVerdict::NonMemberAtCap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Inequivalent,
    Unknown,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equivalence::Equivalent => "equivalent",
            Equivalence::Inequivalent => "inequivalent",
            Equivalence::Unknown => "unknown",
        })
    }
}

/// Coordinates of the sample points used to refute equivalence.
const SAMPLE_COORDS: [i64; 4] = [-1, 0, 1, 2];

/// Rational points of `{-1,0,1,2}^d` (reduced mod p in positive
/// characteristic), deduplicated.
pub fn sample_points(j: &QReesAlgebra) -> Vec<Vec<Scalar>> {
    let ring = j.ring();
    let mut pts: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..ring.arity() {
        let mut next = Vec::new();
        for p in &pts {
            for &c in &SAMPLE_COORDS {
                let mut q = p.clone();
                q.push(ring.field.from_int(c));
                next.push(q);
            }
        }
        next.sort();
        next.dedup();
        pts = next;
    }
    pts
}

fn covers(j: &QReesAlgebra, other: &QReesAlgebra, n_max: u32, cap: Weight) -> Result<bool> {
    for g in other.generators() {
        let cap = cap.max(g.weight * Weight::int(n_max as i64));
        if !is_integral_member(j, &g.poly, g.weight, n_max, cap)?.is_member() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mutual integral membership on the common grid; on failure, looks for an
/// order mismatch at a sample point.
pub fn equivalence_check(j1: &QReesAlgebra, j2: &QReesAlgebra, n_max: u32, cap: Weight) -> Result<Equivalence> {
    if j1.ring() != j2.ring() {
        return Err(Error::RingMismatch);
    }
    let n = Weight::int(num_integer::lcm(j1.denominator(), j2.denominator()));
    let a = j1.scale(Weight::ONE / n)?;
    let b = j2.scale(Weight::ONE / n)?;
    let cap = cap * n;
    if covers(&a, &b, n_max, cap)? && covers(&b, &a, n_max, cap)? {
        return Ok(Equivalence::Equivalent);
    }
    for p in sample_points(j1) {
        if j1.ord_at_point(&p)? != j2.ord_at_point(&p)? {
            return Ok(Equivalence::Inequivalent);
        }
    }
    Ok(Equivalence::Unknown)
}
