//! Stratum-wise evaluation of the invariant through the dimension recursion.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{coefficient_algebra, find_maximal_contact, non_monomial_part, CoordinateChange, DivisorRecord};
use crate::ideal::Ideal;
use crate::poly::{Polynomial, Ring};
use crate::rees::QReesAlgebra;
use crate::resolution::invariant::{monomial_center, InvariantValue, Terminator};
use crate::weight::{Extended, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Maximize over the stratum and produce a center.
    Max,
    /// Evaluate at the single point cut out by the stratum.
    Point,
}

/// Lower-dimensional data kept across steps: the coefficient algebra built
/// at a level, carried along later blowups by controlled transforms.
#[derive(Clone, Debug)]
pub(crate) struct Persisted {
    /// Invariant prefix through this level's `(ω, n)`.
    pub key: Vec<(Weight, usize)>,
    pub j0: usize,
    /// Name of the contact variable chosen at this level.
    pub contact: String,
    /// The algebra one dimension down, in the ring without the contact
    /// variables of this and all upper levels.
    pub lower: QReesAlgebra,
}

/// Result of one (possibly recursive) evaluation.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub value: InvariantValue,
    /// Names of the center variables (`Max` mode only).
    pub center: Vec<String>,
    /// Coordinate changes with the level that found them, each written in
    /// that level's ring.
    pub changes: Vec<(usize, CoordinateChange)>,
    pub persisted: Vec<Persisted>,
}

pub(crate) struct Ctx<'a> {
    pub history: &'a [InvariantValue],
    pub persisted: &'a [Persisted],
    pub step: usize,
    /// Names of all divisor variables of the chart; never moved by a change.
    pub frozen: &'a [String],
    pub mode: Mode,
}

pub(crate) struct Level {
    pub j: QReesAlgebra,
    pub divisors: Vec<DivisorRecord>,
    pub stratum: Ideal,
    pub top: bool,
    pub start: usize,
    pub prefix: Vec<(Weight, usize)>,
}

fn names(ring: &Ring, vars: &[usize]) -> Vec<String> {
    vars.iter().map(|&v| ring.vars[v].clone()).collect()
}

fn coordinate_center(ctx: &Ctx, z: &Ideal) -> Result<Vec<String>> {
    if ctx.mode == Mode::Point {
        return Ok(Vec::new());
    }
    match z.as_coordinate_subspace() {
        Some(vars) => Ok(names(z.ring(), &vars)),
        None => Err(Error::ChartSplitRequired(format!(
            "maximal locus {} is not a coordinate subspace of this chart",
            crate::ideal::ClosedSet::from_ideal(z.clone())
        ))),
    }
}

/// Center for a stratum in a one-variable ring: a single rational point,
/// moved to the origin by a translation if necessary.
fn point_center(ctx: &Ctx, z: &Ideal) -> Result<(Vec<String>, Vec<CoordinateChange>)> {
    if ctx.mode == Mode::Point {
        return Ok((Vec::new(), Vec::new()));
    }
    let ring = z.ring();
    let basis = z.groebner();
    if basis.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let g = &basis[0];
    let m = g.total_degree().unwrap_or(0);
    let split = || Error::ChartSplitRequired(format!("maximal locus V({g}) is not a single rational point"));
    if basis.len() != 1 || m == 0 {
        return Err(split());
    }
    let field = ring.field;
    let lead = g.coefficient(&[m]);
    let next = g.coefficient(&[m - 1]);
    let r = field.neg(&field.div(&next, &field.mul(&lead, &field.from_int(m as i64))));
    let x = Polynomial::var(ring, 0);
    let shifted = &x - &Polynomial::constant(ring, r.clone());
    if &shifted.pow(m).scale(&lead) != g {
        return Err(split());
    }
    let name = ring.vars[0].clone();
    if num_traits::Zero::is_zero(&r) {
        return Ok((vec![name], Vec::new()));
    }
    if ctx.frozen.contains(&name) {
        return Err(Error::ChartSplitRequired(format!(
            "center {name} = {} lies off the divisor {name} = 0",
            field.scalar_to_string(&r)
        )));
    }
    let image = &x + &Polynomial::constant(ring, r);
    Ok((vec![name], vec![CoordinateChange { var: 0, image }]))
}

/// Subsets of `old` of the largest size whose divisors all meet `z`.
fn max_n_subsets(old: &[DivisorRecord], z: &Ideal) -> (usize, Vec<Vec<DivisorRecord>>) {
    let ring = z.ring();
    for k in (0..=old.len()).rev() {
        let mut found = Vec::new();
        for mask in 0u32..(1 << old.len()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let subset: Vec<DivisorRecord> = (0..old.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| old[i])
                .collect();
            let vars: Vec<usize> = subset.iter().map(|d| d.var).collect();
            if !z.sum(&Ideal::coordinate(ring, &vars)).is_unit() {
                found.push(subset);
            }
        }
        if !found.is_empty() {
            return (k, found);
        }
    }
    unreachable!("the empty subset meets a nonempty stratum")
}

pub(crate) fn evaluate(ctx: &Ctx, level: Level) -> Result<Outcome> {
    let ring = level.j.ring().clone();
    let d = ring.arity();
    let empty = || Error::Precondition("empty stratum".into());

    if level.top && d == 1 {
        let (omega, z) = level.j.max_order_within(&level.stratum).ok_or_else(empty)?;
        let (center, changes) = point_center(ctx, &z)?;
        return Ok(Outcome {
            value: InvariantValue {
                levels: vec![(omega, 0)],
                terminator: Terminator::Point,
            },
            center,
            changes: changes.into_iter().map(|c| (0, c)).collect(),
            persisted: Vec::new(),
        });
    }

    let divided: Vec<DivisorRecord> = level
        .divisors
        .iter()
        .copied()
        .filter(|h| !level.top || h.created > 0)
        .collect();
    let vars: Vec<usize> = divided.iter().map(|h| h.var).collect();
    let (i_alg, ells) = non_monomial_part(&level.j, &vars);
    let (omega, z_omega) = i_alg.max_order_within(&level.stratum).ok_or_else(empty)?;

    let j0 = ctx
        .history
        .iter()
        .position(|h| h.matches_prefix(&level.prefix, omega))
        .unwrap_or(ctx.step);
    let old: Vec<DivisorRecord> = level.divisors.iter().copied().filter(|h| h.created <= j0).collect();
    let (n, subsets) = max_n_subsets(&old, &z_omega);
    let mut prefix = level.prefix.clone();
    prefix.push((omega, n));

    if omega.is_zero() {
        return monomial_branch(ctx, &ring, &divided, &ells, z_omega, prefix);
    }

    let mut best: Option<Outcome> = None;
    for subset in subsets {
        let s_vars: Vec<usize> = subset.iter().map(|h| h.var).collect();
        let zn = z_omega.sum(&Ideal::coordinate(&ring, &s_vars));
        let outcome = if d == 1 {
            let (center, changes) = point_center(ctx, &zn)?;
            Outcome {
                value: InvariantValue {
                    levels: prefix.clone(),
                    terminator: Terminator::Point,
                },
                center,
                changes: changes.into_iter().map(|c| (level.prefix.len(), c)).collect(),
                persisted: Vec::new(),
            }
        } else {
            contact_branch(ctx, &level, &i_alg, omega, &s_vars, zn, j0, prefix.clone())?
        };
        best = match best {
            None => Some(outcome),
            Some(b) if outcome.value > b.value => Some(outcome),
            Some(b) if outcome.value == b.value && outcome.center != b.center && ctx.mode == Mode::Max => {
                return Err(Error::ChartSplitRequired(format!(
                    "maximal locus has several components with value {}",
                    b.value
                )));
            }
            Some(b) => Some(b),
        };
    }
    Ok(best.expect("at least one subset"))
}

fn monomial_branch(
    ctx: &Ctx,
    ring: &Arc<Ring>,
    divided: &[DivisorRecord],
    ells: &[Extended],
    zn: Ideal,
    prefix: Vec<(Weight, usize)>,
) -> Result<Outcome> {
    let candidates: Vec<(DivisorRecord, Weight)> = divided
        .iter()
        .zip(ells)
        .filter_map(|(h, l)| match l {
            Extended::Finite(w) if !w.is_zero() => Some((*h, *w)),
            _ => None,
        })
        .collect();
    let meets = |s: &[DivisorRecord]| {
        let vars: Vec<usize> = s.iter().map(|h| h.var).collect();
        !zn.sum(&Ideal::coordinate(ring, &vars)).is_unit()
    };
    let (gamma, chosen) = monomial_center(&candidates, meets)
        .ok_or_else(|| Error::Precondition("order-zero stratum meets no singular divisor combination".into()))?;
    let vars: Vec<usize> = chosen.iter().map(|h| h.var).collect();
    let center = coordinate_center(ctx, &zn.sum(&Ideal::coordinate(ring, &vars)))?;
    Ok(Outcome {
        value: InvariantValue {
            levels: prefix,
            terminator: Terminator::Monomial(gamma),
        },
        center,
        changes: Vec::new(),
        persisted: Vec::new(),
    })
}

#[allow(clippy::too_many_arguments)]
fn contact_branch(
    ctx: &Ctx,
    level: &Level,
    i_alg: &QReesAlgebra,
    omega: Weight,
    s_vars: &[usize],
    zn: Ideal,
    j0: usize,
    prefix: Vec<(Weight, usize)>,
) -> Result<Outcome> {
    let ring = level.j.ring();
    let depth = level.prefix.len();
    let mut zn = zn;
    let mut changes = Vec::new();
    let reuse = ctx
        .persisted
        .get(depth)
        .filter(|e| j0 < ctx.step && e.j0 == j0 && e.key == prefix)
        .and_then(|e| ring.index_of(&e.contact).map(|v| (v, e.lower.clone())));
    let (v, coeff) = match reuse {
        Some(found) => found,
        None => {
            let mut p = i_alg.scale(Weight::ONE / omega)?;
            if ctx.step != level.start {
                p = p.odot(&level.j)?;
            }
            let e = QReesAlgebra::from_pairs(ring, s_vars.iter().map(|&v| (Polynomial::var(ring, v), Weight::ONE)))?;
            let mut t = p.odot(&e)?;
            let frozen: Vec<usize> = ctx.frozen.iter().filter_map(|name| ring.index_of(name)).collect();
            let contact = find_maximal_contact(&t, &zn, &frozen)?;
            if let Some(change) = contact.change {
                t = change.apply(&t);
                zn = change.apply_ideal(&zn);
                changes.push((depth, change));
            }
            (contact.var, coefficient_algebra(&t, contact.var))
        }
    };
    if coeff.is_zero() {
        return Ok(Outcome {
            value: InvariantValue {
                levels: prefix,
                terminator: Terminator::ZeroCoeff,
            },
            center: coordinate_center(ctx, &zn)?,
            changes,
            persisted: Vec::new(),
        });
    }
    let divisors = level
        .divisors
        .iter()
        .filter(|h| h.created > j0 && h.var != v)
        .map(|h| DivisorRecord {
            var: if h.var > v { h.var - 1 } else { h.var },
            created: h.created,
        })
        .collect();
    let entry = Persisted {
        key: prefix.clone(),
        j0,
        contact: ring.vars[v].clone(),
        lower: coeff.clone(),
    };
    let lower = evaluate(
        ctx,
        Level {
            j: coeff,
            divisors,
            stratum: zn.restrict_to_zero(v),
            top: false,
            start: j0,
            prefix,
        },
    )?;
    let mut center = Vec::new();
    if ctx.mode == Mode::Max {
        center.push(ring.vars[v].clone());
        center.extend(lower.center);
    }
    changes.extend(lower.changes);
    let mut persisted = vec![entry];
    persisted.extend(lower.persisted);
    Ok(Outcome {
        value: lower.value,
        center,
        changes,
        persisted,
    })
}
