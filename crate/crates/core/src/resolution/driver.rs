use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::geometry::{blowup_chart, ell_value, transform, Chart, CoordinateChange, DivisorRecord};
use crate::ideal::{ClosedSet, Ideal};
use crate::poly::Polynomial;
use crate::rees::QReesAlgebra;
use crate::resolution::invariant::InvariantValue;
use crate::resolution::level::{evaluate, Ctx, Level, Mode, Persisted};
use crate::weight::{Extended, Weight};

/// Maximum of `Fc` on a chart and the center where it is attained, in the
/// coordinates reached after `changes`.
#[derive(Clone, Debug)]
pub struct MaxLocus {
    pub value: InvariantValue,
    pub center: Vec<usize>,
    pub changes: Vec<CoordinateChange>,
    /// Level at which each change was found.
    change_levels: Vec<usize>,
    persisted: Vec<Persisted>,
}

/// A chart of the resolution tree with its current transform and the
/// maxima of `Fc` on its ancestors at every earlier step.
#[derive(Clone, Debug)]
pub struct ResolutionState {
    pub chart: Chart,
    pub algebra: QReesAlgebra,
    pub history: Vec<InvariantValue>,
    persisted: Vec<Persisted>,
}

fn require_char_zero(j: &QReesAlgebra) -> Result<()> {
    match j.ring().field.characteristic() {
        0 => Ok(()),
        p => Err(Error::UnsupportedCharacteristic(p)),
    }
}

impl ResolutionState {
    pub fn initial(algebra: QReesAlgebra, divisors: Vec<DivisorRecord>) -> Result<ResolutionState> {
        let chart = Chart::root(algebra.ring(), divisors)?;
        Ok(ResolutionState {
            chart,
            algebra,
            history: Vec::new(),
            persisted: Vec::new(),
        })
    }

    pub fn step(&self) -> usize {
        self.history.len()
    }

    fn frozen(&self) -> Vec<String> {
        self.chart
            .divisors
            .iter()
            .map(|d| self.chart.ring.vars[d.var].clone())
            .collect()
    }

    fn run(&self, stratum: Ideal, mode: Mode) -> Result<crate::resolution::level::Outcome> {
        let frozen = self.frozen();
        let ctx = Ctx {
            history: &self.history,
            persisted: &self.persisted,
            step: self.step(),
            frozen: &frozen,
            mode,
        };
        evaluate(
            &ctx,
            Level {
                j: self.algebra.clone(),
                divisors: self.chart.divisors.clone(),
                stratum,
                top: true,
                start: 0,
                prefix: Vec::new(),
            },
        )
    }

    /// `Fc` at a rational point of the chart.
    pub fn fc_at_point(&self, point: &[Scalar]) -> Result<InvariantValue> {
        require_char_zero(&self.algebra)?;
        let ring = self.algebra.ring();
        if point.len() != ring.arity() {
            return Err(Error::ArityMismatch {
                expected: ring.arity(),
                got: point.len(),
            });
        }
        match self.algebra.ord_at_point(point)? {
            Extended::Finite(w) if w < Weight::ONE => return Ok(InvariantValue::non_singular()),
            _ => {}
        }
        let gens = (0..ring.arity())
            .map(|j| &Polynomial::var(ring, j) - &Polynomial::constant(ring, point[j].clone()))
            .collect();
        Ok(self.run(Ideal::new(ring, gens), Mode::Point)?.value)
    }

    /// Maximum of `Fc` and its center; `None` when `Sing` is empty.
    pub fn max_locus_fc(&self) -> Result<Option<MaxLocus>> {
        require_char_zero(&self.algebra)?;
        let sing = self.algebra.sing_ideal();
        if sing.is_unit() {
            return Ok(None);
        }
        let out = self.run(sing, Mode::Max)?;
        let ring = &self.chart.ring;
        let mut center: Vec<usize> = out
            .center
            .iter()
            .map(|name| ring.var_index(name))
            .collect::<Result<_>>()?;
        center.sort_unstable();
        if center.is_empty() {
            return Err(Error::Precondition("maximal locus is the whole chart".into()));
        }
        let change_levels = out.changes.iter().map(|(m, _)| *m).collect();
        let changes = out
            .changes
            .into_iter()
            .map(|(_, c)| {
                let name = &c.image.ring().vars[c.var];
                Ok(CoordinateChange {
                    var: ring.var_index(name)?,
                    image: c.image.embed(ring)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Some(MaxLocus {
            value: out.value,
            center,
            changes,
            change_levels,
            persisted: out.persisted,
        }))
    }

    /// Children of this chart after blowing up the center of `max`, one per
    /// center variable. The new divisor gets creation index `step + 1`.
    pub fn blow_up(&self, max: &MaxLocus) -> Result<Vec<ResolutionState>> {
        let mut moved = self.algebra.clone();
        for c in &max.changes {
            moved = c.apply(&moved);
        }
        let persisted = max.changed_persisted();
        let mut history = self.history.clone();
        history.push(max.value.clone());
        let mut children = Vec::new();
        for &c in &max.center {
            children.push(ResolutionState {
                chart: blowup_chart(&self.chart, &max.center, c, self.step() + 1, &max.changes)?,
                algebra: transform(&moved, &max.center, c)?,
                history: history.clone(),
                persisted: carry_persisted(&persisted, &self.chart, &max.center, c),
            });
        }
        Ok(children)
    }
}

/// Rewrites `change` (on a chart variable) into `ring`, if all its variables
/// live there.
fn change_into(change: &CoordinateChange, ring: &std::sync::Arc<crate::poly::Ring>) -> Option<CoordinateChange> {
    let name = &change.image.ring().vars[change.var];
    Some(CoordinateChange {
        var: ring.index_of(name)?,
        image: change.image.embed(ring).ok()?,
    })
}

/// Controlled transforms of the kept lower-level algebras into the
/// `chart_var` chart. Levels whose contact hypersurface has no strict
/// transform in this chart, or whose transform is not permissible, are
/// dropped together with everything below them.
fn carry_persisted(persisted: &[Persisted], parent: &Chart, center: &[usize], chart_var: usize) -> Vec<Persisted> {
    let names = &parent.ring.vars;
    let chart_name = &names[chart_var];
    let mut contacts: Vec<&str> = Vec::new();
    let mut out = Vec::new();
    for e in persisted {
        contacts.push(&e.contact);
        if contacts.contains(&chart_name.as_str()) {
            break;
        }
        let ring = e.lower.ring();
        let sub_center: Vec<usize> = center.iter().filter_map(|&v| ring.index_of(&names[v])).collect();
        let Some(c) = ring.index_of(chart_name) else { break };
        match transform(&e.lower, &sub_center, c) {
            Ok(lower) => out.push(Persisted { lower, ..e.clone() }),
            Err(_) => break,
        }
    }
    out
}

impl MaxLocus {
    /// Kept lower-level algebras rewritten in the coordinates reached after
    /// all coordinate changes of this step.
    fn changed_persisted(&self) -> Vec<Persisted> {
        let mut out = self.persisted.clone();
        for (k, e) in out.iter_mut().enumerate() {
            for (&m, ch) in self.change_levels.iter().zip(&self.changes) {
                if k < m {
                    if let Some(local) = change_into(ch, e.lower.ring()) {
                        e.lower = local.apply(&e.lower);
                    }
                }
            }
        }
        out
    }

    pub fn center_set(&self, state: &ResolutionState) -> ClosedSet {
        ClosedSet::from_ideal(Ideal::coordinate(&state.chart.ring, &self.center))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Resolved,
    NotTerminated,
}

/// Variable-to-polynomial map, serialized in variable order.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution(pub Vec<(String, String)>);

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorEntry {
    pub var: String,
    pub created: usize,
    pub ell: Extended,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub chart: String,
    pub parent: Option<String>,
    pub substitution: Substitution,
    pub changes: Vec<String>,
    pub center: Vec<String>,
    pub fc: InvariantValue,
    pub divisors: Vec<DivisorEntry>,
    pub children: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceLeaf {
    pub chart: String,
    pub parent: Option<String>,
    pub substitution: Substitution,
    pub divisors: Vec<DivisorEntry>,
    pub sing: String,
}

/// The full record of a resolution run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trace {
    pub status: Status,
    pub steps: Vec<TraceStep>,
    pub leaves: Vec<TraceLeaf>,
}

fn substitution_of(chart: &Chart) -> Substitution {
    let ring = &chart.ring;
    Substitution(match &chart.parent {
        None => Vec::new(),
        Some(link) => ring
            .vars
            .iter()
            .zip(&link.substitution)
            .map(|(v, p)| (v.clone(), p.to_string()))
            .collect(),
    })
}

fn divisor_entries(chart: &Chart, j: &QReesAlgebra) -> Vec<DivisorEntry> {
    chart
        .divisors
        .iter()
        .map(|d| DivisorEntry {
            var: chart.ring.vars[d.var].clone(),
            created: d.created,
            ell: ell_value(j, d.var),
        })
        .collect()
}

/// Runs the resolution loop: every step blows up, in every chart where it
/// is attained, the center of the global maximum of `Fc`.
pub fn resolve(algebra: &QReesAlgebra, divisors: Vec<DivisorRecord>, max_steps: usize) -> Result<Trace> {
    require_char_zero(algebra)?;
    let mut leaves = vec![ResolutionState::initial(algebra.clone(), divisors)?];
    let mut steps = Vec::new();
    let mut status = Status::Resolved;
    for step in 0.. {
        let maxima: Vec<Option<MaxLocus>> = leaves.iter().map(|l| l.max_locus_fc()).collect::<Result<_>>()?;
        let Some(top) = maxima.iter().flatten().map(|m| m.value.clone()).max() else {
            break;
        };
        if step == max_steps {
            status = Status::NotTerminated;
            break;
        }
        let mut next = Vec::new();
        for (leaf, max) in leaves.into_iter().zip(maxima) {
            let max = match max {
                Some(m) if m.value == top => m,
                other => {
                    let mut leaf = leaf;
                    match other {
                        Some(m) => {
                            leaf.history.push(m.value);
                            leaf.persisted = m.persisted;
                        }
                        None => leaf.history.push(InvariantValue::non_singular()),
                    }
                    next.push(leaf);
                    continue;
                }
            };
            let children_states = leaf.blow_up(&max)?;
            let children = children_states.iter().map(|c| c.chart.id.clone()).collect();
            next.extend(children_states);
            let ring = &leaf.chart.ring;
            steps.push(TraceStep {
                step,
                chart: leaf.chart.id.clone(),
                parent: leaf.chart.parent.as_ref().map(|p| p.id.clone()),
                substitution: substitution_of(&leaf.chart),
                changes: max.changes.iter().map(|c| c.to_string()).collect(),
                center: max.center.iter().map(|&v| ring.vars[v].clone()).collect(),
                fc: top.clone(),
                divisors: divisor_entries(&leaf.chart, &leaf.algebra),
                children,
            });
        }
        leaves = next;
    }
    let leaves = leaves
        .iter()
        .map(|l| TraceLeaf {
            chart: l.chart.id.clone(),
            parent: l.chart.parent.as_ref().map(|p| p.id.clone()),
            substitution: substitution_of(&l.chart),
            divisors: divisor_entries(&l.chart, &l.algebra),
            sing: {
                let s = l.algebra.sing_locus();
                if s.is_empty() {
                    "empty".to_string()
                } else {
                    s.to_string()
                }
            },
        })
        .collect();
    Ok(Trace { status, steps, leaves })
}

impl Trace {
    /// The maximum of `Fc` blown up at each step.
    pub fn max_values(&self) -> Vec<InvariantValue> {
        let mut out: Vec<InvariantValue> = Vec::new();
        let mut last = None;
        for s in &self.steps {
            if last != Some(s.step) {
                out.push(s.fc.clone());
                last = Some(s.step);
            }
        }
        out
    }

    pub fn blowups(&self) -> usize {
        self.steps.last().map_or(0, |s| s.step + 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph charts {\n  node [shape=box];\n");
        for s in &self.steps {
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\nstep {}: center {}\\n{}\"];",
                s.chart,
                s.chart,
                s.step,
                s.center.join(","),
                s.fc
            );
            for c in &s.children {
                let var = c.rsplit('.').next().unwrap_or(c);
                let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", s.chart, c, var);
            }
        }
        for l in &self.leaves {
            let _ = writeln!(out, "  \"{}\" [label=\"{}\\nsing: {}\"];", l.chart, l.chart, l.sing);
        }
        out.push_str("}\n");
        out
    }
}

impl std::fmt::Display for Trace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.steps {
            writeln!(f, "step {} chart {}: Fc = {}", s.step, s.chart, s.fc)?;
            for c in &s.changes {
                writeln!(f, "  change {c}")?;
            }
            writeln!(
                f,
                "  center V({}) -> charts {}",
                s.center.join(","),
                s.children.join(" ")
            )?;
        }
        for l in &self.leaves {
            writeln!(f, "leaf {}: sing: {}", l.chart, l.sing)?;
        }
        match self.status {
            Status::Resolved => writeln!(f, "resolved after {} blowup step(s)", self.blowups()),
            Status::NotTerminated => writeln!(f, "not terminated after {} step(s)", self.blowups()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::parse_polynomial;
    use crate::poly::Ring;
    use crate::resolution::invariant::{Gamma, Terminator};
    use std::sync::Arc;

    fn alg(ring: &Arc<Ring>, gens: &[(&str, &str)]) -> QReesAlgebra {
        QReesAlgebra::from_pairs(
            ring,
            gens.iter()
                .map(|(p, w)| (parse_polynomial(ring, p).unwrap(), w.parse().unwrap())),
        )
        .unwrap()
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn levels(v: &[(&str, usize)]) -> Vec<(Weight, usize)> {
        v.iter().map(|(a, n)| (w(a), *n)).collect()
    }

    fn zeros(n: usize) -> Vec<Scalar> {
        vec![Scalar::from_integer(0.into()); n]
    }

    #[test]
    fn cusp_fc_and_center() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let st = ResolutionState::initial(alg(&r, &[("x^2+y^3", "2")]), vec![]).unwrap();
        let v = st.fc_at_point(&zeros(2)).unwrap();
        assert_eq!(v.levels, levels(&[("1", 0), ("3/2", 0)]));
        assert_eq!(v.terminator, Terminator::Point);
        let m = st.max_locus_fc().unwrap().unwrap();
        assert_eq!(m.value, v);
        assert_eq!(m.center, vec![0, 1]);
        assert!(m.changes.is_empty());
    }

    #[test]
    fn smooth_hypersurface_has_zero_coefficients() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let st = ResolutionState::initial(alg(&r, &[("x", "1")]), vec![]).unwrap();
        let p = vec![Scalar::from_integer(0.into()), Scalar::from_integer(5.into())];
        let v = st.fc_at_point(&p).unwrap();
        assert_eq!(v.levels, levels(&[("1", 0)]));
        assert_eq!(v.terminator, Terminator::ZeroCoeff);
        let q = vec![Scalar::from_integer(1.into()), Scalar::from_integer(0.into())];
        assert_eq!(st.fc_at_point(&q).unwrap(), InvariantValue::non_singular());
    }

    #[test]
    fn monomial_case_value() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let mut st = ResolutionState::initial(alg(&r, &[("x^2", "1")]), vec![]).unwrap();
        st.chart.divisors = vec![DivisorRecord { var: 0, created: 1 }];
        st.history = vec![InvariantValue {
            levels: levels(&[("2", 0)]),
            terminator: Terminator::ZeroCoeff,
        }];
        let v = st.fc_at_point(&zeros(2)).unwrap();
        assert_eq!(v.levels, levels(&[("0", 1)]));
        assert_eq!(
            v.terminator,
            Terminator::Monomial(Gamma {
                p: 1,
                s: w("2"),
                indices: vec![1]
            })
        );
    }

    #[test]
    fn umbrella_center_is_origin() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y", "z"]);
        let st = ResolutionState::initial(alg(&r, &[("x^2-y^2*z", "2")]), vec![]).unwrap();
        let m = st.max_locus_fc().unwrap().unwrap();
        assert_eq!(m.center, vec![0, 1, 2]);
        assert_eq!(m.value.levels[..2], levels(&[("1", 0), ("3/2", 0)])[..]);
    }

    #[test]
    fn cusp_resolves_in_one_step() {
        let r = Ring::new(FieldSpec::Rationals, ["x", "y"]);
        let t = resolve(&alg(&r, &[("x^2+y^3", "2")]), vec![], 50).unwrap();
        assert_eq!(t.status, Status::Resolved);
        assert_eq!(t.blowups(), 1);
        assert_eq!(t.leaves.len(), 2);
        assert!(t.leaves.iter().all(|l| l.sing == "empty"));
    }

    #[test]
    fn line_orders_drop_by_one() {
        let r = Ring::new(FieldSpec::Rationals, ["x"]);
        let t = resolve(&alg(&r, &[("x^3", "1")]), vec![], 50).unwrap();
        let omegas: Vec<Weight> = t.max_values().iter().map(|v| v.levels[0].0).collect();
        assert_eq!(omegas, vec![w("3"), w("2"), w("1")]);
        assert_eq!(t.status, Status::Resolved);
    }

    #[test]
    fn char_p_rejected() {
        let r = Ring::new(FieldSpec::PrimeField(2), ["x", "y"]);
        assert!(matches!(
            resolve(&alg(&r, &[("x^2+y^3", "2")]), vec![], 5),
            Err(Error::UnsupportedCharacteristic(2))
        ));
    }

    #[test]
    fn corpus_terminates_with_decreasing_values() {
        type Case<'a> = (Vec<&'a str>, Vec<(&'a str, &'a str)>);
        let cases: Vec<Case> = vec![
            (vec!["x", "y", "z"], vec![("x^2-y^2*z", "2")]),
            (vec!["x", "y"], vec![("x^2+y^5", "2")]),
            (vec!["x", "y"], vec![("x^2*y^3", "2")]),
            (vec!["x", "y", "z"], vec![("x^2+y^2*z^3", "2"), ("y*z", "1")]),
        ];
        for (vars, gens) in cases {
            let r = Ring::new(FieldSpec::Rationals, vars);
            let t = resolve(&alg(&r, &gens), vec![], 50).unwrap();
            assert_eq!(t.status, Status::Resolved, "{gens:?}");
            let values = t.max_values();
            assert!(values.windows(2).all(|w| w[0] > w[1]), "{gens:?}\n{t}");
        }
    }
}
