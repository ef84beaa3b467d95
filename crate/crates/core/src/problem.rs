//! Problem files: a chart, named algebras and divisor declarations.
//!
//! ```text
//! # comment
//! field Q                 | field F <p>
//! chart x y z
//! algebra J               # optional before the first `gen`, default name J
//! gen (x^2 + y^2*z) : 2
//! divisor z created 0     # `created <index>` may be omitted (index 0)
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::geometry::DivisorRecord;
use crate::parse::parse_polynomial;
use crate::poly::Ring;
use crate::rees::{Generator, QReesAlgebra};
use crate::weight::Weight;

pub const DEFAULT_ALGEBRA: &str = "J";

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub ring: Arc<Ring>,
    pub algebras: Vec<(String, QReesAlgebra)>,
    pub divisors: Vec<DivisorRecord>,
}

impl ProblemFile {
    pub fn algebra(&self, name: &str) -> Result<&QReesAlgebra> {
        self.algebras
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| a)
            .ok_or_else(|| Error::Precondition(format!("no algebra named `{name}`")))
    }

    /// The first declared algebra.
    pub fn primary(&self) -> &QReesAlgebra {
        &self.algebras[0].1
    }
}

fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a problem file; errors carry 1-based line numbers.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut field: Option<FieldSpec> = None;
    let mut ring: Option<Arc<Ring>> = None;
    let mut algebras: Vec<(String, Vec<Generator>)> = Vec::new();
    let mut divisors: Vec<DivisorRecord> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (directive, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match directive {
            "field" => {
                if field.is_some() {
                    return Err(syntax(line, "duplicate `field` directive"));
                }
                let words: Vec<&str> = rest.split_whitespace().collect();
                field = Some(match words.as_slice() {
                    ["Q"] => FieldSpec::Rationals,
                    ["F", p] => {
                        let p: u64 = p
                            .parse()
                            .map_err(|_| syntax(line, format!("invalid characteristic `{p}`")))?;
                        FieldSpec::prime(p)?
                    }
                    _ => {
                        return Err(syntax(
                            line,
                            format!("expected `field Q` or `field F <p>`, got `{content}`"),
                        ))
                    }
                });
            }
            "chart" => {
                if ring.is_some() {
                    return Err(syntax(line, "duplicate `chart` directive"));
                }
                let f = field.ok_or_else(|| syntax(line, "`chart` before `field`"))?;
                let vars: Vec<&str> = rest.split_whitespace().collect();
                if vars.is_empty() {
                    return Err(syntax(line, "`chart` needs at least one variable"));
                }
                for (i, v) in vars.iter().enumerate() {
                    let mut chars = v.chars();
                    let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && chars.all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        return Err(syntax(line, format!("invalid variable name `{v}`")));
                    }
                    if vars[..i].contains(v) {
                        return Err(syntax(line, format!("duplicate variable `{v}`")));
                    }
                }
                ring = Some(Ring::new(f, vars));
            }
            "algebra" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let [name] = words.as_slice() else {
                    return Err(syntax(line, "expected `algebra <name>`"));
                };
                if algebras.iter().any(|(n, _)| n == name) {
                    return Err(syntax(line, format!("duplicate algebra `{name}`")));
                }
                algebras.push((name.to_string(), Vec::new()));
            }
            "gen" => {
                let r = ring.as_ref().ok_or_else(|| syntax(line, "`gen` before `chart`"))?;
                let (poly, weight) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| syntax(line, "expected `gen <poly> : <weight>`"))?;
                let poly = parse_polynomial(r, poly).map_err(|e| at(line, e))?;
                let weight: Weight = weight.parse().map_err(|e| at(line, e))?;
                if weight.is_zero() {
                    return Err(Error::NonPositiveWeight(format!("{weight} (line {line})")));
                }
                if algebras.is_empty() {
                    algebras.push((DEFAULT_ALGEBRA.to_string(), Vec::new()));
                }
                algebras
                    .last_mut()
                    .expect("nonempty")
                    .1
                    .push(Generator::new(poly, weight));
            }
            "divisor" => {
                let r = ring.as_ref().ok_or_else(|| syntax(line, "`divisor` before `chart`"))?;
                let words: Vec<&str> = rest.split_whitespace().collect();
                let (name, created) = match words.as_slice() {
                    [name] => (*name, 0),
                    [name, "created", k] => {
                        let k: usize = k
                            .parse()
                            .map_err(|_| syntax(line, format!("invalid creation index `{k}`")))?;
                        (*name, k)
                    }
                    _ => return Err(syntax(line, "expected `divisor <var> created <index>`")),
                };
                let var = r.var_index(name)?;
                if divisors.iter().any(|d| d.var == var) {
                    return Err(syntax(line, format!("duplicate divisor `{name}`")));
                }
                divisors.push(DivisorRecord { var, created });
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }

    let ring = ring.ok_or_else(|| syntax(0, "missing `chart` directive"))?;
    if algebras.is_empty() {
        return Err(syntax(0, "no algebra declared"));
    }
    let algebras = algebras
        .into_iter()
        .map(|(name, gens)| Ok((name, QReesAlgebra::new(&ring, gens)?)))
        .collect::<Result<Vec<_>>>()?;
    divisors.sort_by_key(|d| d.var);
    Ok(ProblemFile {
        ring,
        algebras,
        divisors,
    })
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.ring.field)?;
        writeln!(f, "chart {}", self.ring.vars.join(" "))?;
        for (name, alg) in &self.algebras {
            writeln!(f, "algebra {name}")?;
            for g in alg.generators() {
                writeln!(f, "gen {g}")?;
            }
        }
        for d in &self.divisors {
            writeln!(f, "divisor {} created {}", self.ring.vars[d.var], d.created)?;
        }
        Ok(())
    }
}
