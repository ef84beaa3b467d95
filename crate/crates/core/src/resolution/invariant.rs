//! Values of the resolution invariant and the combinatorial monomial rule.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::geometry::DivisorRecord;
use crate::weight::Weight;

/// The monomial block `Γ = (p, s, indices)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma {
    pub p: usize,
    pub s: Weight,
    pub indices: Vec<usize>,
}

impl Ord for Gamma {
    /// Larger is better: fewer divisors, then larger `s`, then the
    /// lexicographically smaller creation-index tuple.
    fn cmp(&self, other: &Gamma) -> Ordering {
        other
            .p
            .cmp(&self.p)
            .then(self.s.cmp(&other.s))
            .then_with(|| other.indices.cmp(&self.indices))
    }
}

impl PartialOrd for Gamma {
    fn partial_cmp(&self, other: &Gamma) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminator {
    /// Dimension one reached.
    Point,
    /// The non-monomial part has order zero.
    Monomial(Gamma),
    /// The coefficient algebra vanished: the lower invariant is infinite.
    ZeroCoeff,
    /// The point is not singular.
    NonSingular,
}

/// A value of `Fc`: pairs `(ω, n)` per dimension, then a terminator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantValue {
    pub levels: Vec<(Weight, usize)>,
    pub terminator: Terminator,
}

impl InvariantValue {
    pub fn non_singular() -> InvariantValue {
        InvariantValue {
            levels: Vec::new(),
            terminator: Terminator::NonSingular,
        }
    }

    /// True when the first `k` levels agree and level `k` has the same `ω`.
    pub fn matches_prefix(&self, prefix: &[(Weight, usize)], omega: Weight) -> bool {
        let k = prefix.len();
        self.levels.len() > k && self.levels[..k] == *prefix && self.levels[k].0 == omega
    }
}

/// Tokens in the lexicographic comparison, in increasing rank.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Token<'a> {
    NonSingular,
    Point,
    Monomial(&'a Gamma),
    Level(Weight, usize),
    ZeroCoeff,
}

impl InvariantValue {
    fn tokens(&self) -> impl Iterator<Item = Token<'_>> {
        let last = match &self.terminator {
            Terminator::NonSingular => Token::NonSingular,
            Terminator::Point => Token::Point,
            Terminator::Monomial(g) => Token::Monomial(g),
            Terminator::ZeroCoeff => Token::ZeroCoeff,
        };
        self.levels
            .iter()
            .map(|&(w, n)| Token::Level(w, n))
            .chain(std::iter::once(last))
    }
}

impl Ord for InvariantValue {
    fn cmp(&self, other: &InvariantValue) -> Ordering {
        self.tokens().cmp(other.tokens())
    }
}

impl PartialOrd for InvariantValue {
    fn partial_cmp(&self, other: &InvariantValue) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self.levels.iter().map(|(w, n)| format!("({w},{n})")).collect();
        write!(f, "[{}] ", levels.join(","))?;
        match &self.terminator {
            Terminator::Point => f.write_str("point"),
            Terminator::ZeroCoeff => f.write_str("zero-coeff"),
            Terminator::NonSingular => f.write_str("non-singular"),
            Terminator::Monomial(g) => {
                let idx: Vec<String> = g.indices.iter().map(|i| i.to_string()).collect();
                write!(f, "monomial(p={}, s={}, indices=({}))", g.p, g.s, idx.join(","))
            }
        }
    }
}

/// Chooses the subset `S` of `candidates` with `Σ ℓ ≥ 1` maximizing `Γ`
/// among those accepted by `meets`. Returns `Γ` and the chosen divisors.
pub fn monomial_center(
    candidates: &[(DivisorRecord, Weight)],
    mut meets: impl FnMut(&[DivisorRecord]) -> bool,
) -> Option<(Gamma, Vec<DivisorRecord>)> {
    let k = candidates.len();
    assert!(k < 32, "too many divisors for subset enumeration");
    let mut best: Option<(Gamma, Vec<DivisorRecord>)> = None;
    for mask in 1u32..(1 << k) {
        let chosen: Vec<&(DivisorRecord, Weight)> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &candidates[i])
            .collect();
        let s = chosen.iter().fold(Weight::ZERO, |acc, (_, l)| acc + *l);
        if s < Weight::ONE {
            continue;
        }
        let mut indices: Vec<usize> = chosen.iter().map(|(d, _)| d.created).collect();
        indices.sort_unstable();
        let gamma = Gamma {
            p: chosen.len(),
            s,
            indices,
        };
        if best.as_ref().is_some_and(|(b, _)| *b >= gamma) {
            continue;
        }
        let divs: Vec<DivisorRecord> = chosen.iter().map(|(d, _)| *d).collect();
        if meets(&divs) {
            best = Some((gamma, divs));
        }
    }
    best
}
