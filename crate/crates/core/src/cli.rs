//! Batch commands over a parsed problem file. Each command maps onto one
//! library operation and renders either text or JSON.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::geometry::{self, Chart};
use crate::ideal::ClosedSet;
use crate::parse::parse_polynomial;
use crate::poly::{Polynomial, Ring};
use crate::problem::ProblemFile;
use crate::rees::QReesAlgebra;
use crate::resolution::{resolve, Status};
use crate::saturation::{self, diff_saturate};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Diff,
    Sing,
    Ord,
    Coeff,
    Eliminate,
    Blowup,
    Transform,
    Nonmonomial,
    Nu,
    Nubar,
    Member,
    Equiv,
    Resolve,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Diff,
        Command::Sing,
        Command::Ord,
        Command::Coeff,
        Command::Eliminate,
        Command::Blowup,
        Command::Transform,
        Command::Nonmonomial,
        Command::Nu,
        Command::Nubar,
        Command::Member,
        Command::Equiv,
        Command::Resolve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Diff => "diff",
            Command::Sing => "sing",
            Command::Ord => "ord",
            Command::Coeff => "coeff",
            Command::Eliminate => "eliminate",
            Command::Blowup => "blowup",
            Command::Transform => "transform",
            Command::Nonmonomial => "nonmonomial",
            Command::Nu => "nu",
            Command::Nubar => "nubar",
            Command::Member => "member",
            Command::Equiv => "equiv",
            Command::Resolve => "resolve",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown command `{s}`")))
    }
}

/// Command flags. Unused flags are ignored by commands that do not need them.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub json: bool,
    pub dot: bool,
    pub n_max: u32,
    pub cap: Weight,
    pub max_steps: usize,
    /// Comma-separated field elements in variable order.
    pub point: Option<String>,
    pub var: Option<String>,
    /// Comma-separated variable names.
    pub center: Option<String>,
    pub chart_var: Option<String>,
    /// Algebra to operate on; the first declared one by default.
    pub algebra: Option<String>,
    /// Polynomial argument of `nu`, `nubar` and `member`.
    pub poly: Option<String>,
    /// Weight argument of `member`.
    pub weight: Option<String>,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            json: false,
            dot: false,
            n_max: 4,
            cap: Weight::int(16),
            max_steps: 50,
            point: None,
            var: None,
            center: None,
            chart_var: None,
            algebra: None,
            poly: None,
            weight: None,
        }
    }
}

/// Rendered command output with its process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

fn required<'a>(value: &'a Option<String>, flag: &str, command: Command) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Error::Precondition(format!("`{command}` needs --{flag}")))
}

fn parse_var(ring: &Ring, name: &str) -> Result<usize> {
    ring.var_index(name.trim())
}

fn parse_vars(ring: &Ring, list: &str) -> Result<Vec<usize>> {
    let mut vars: Vec<usize> = list
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_var(ring, s))
        .collect::<Result<_>>()?;
    vars.sort_unstable();
    vars.dedup();
    Ok(vars)
}

fn parse_point(ring: &Ring, text: &str) -> Result<Vec<Scalar>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != ring.arity() {
        return Err(Error::ArityMismatch {
            expected: ring.arity(),
            got: parts.len(),
        });
    }
    parts
        .iter()
        .map(|p| {
            ring.field.parse_scalar(p).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("invalid field element `{p}`"),
            })
        })
        .collect()
}

fn algebra_json(j: &QReesAlgebra) -> Value {
    json!({
        "chart": j.ring().vars,
        "generators": j.generators().iter().map(|g| json!({
            "poly": g.poly.to_string(),
            "weight": g.weight.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn closed_set_json(c: &ClosedSet) -> Value {
    json!(c
        .components()
        .iter()
        .filter(|i| !i.is_unit())
        .map(|i| i.groebner().iter().map(|g| g.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn render(opts: &Options, value: Value, text: String) -> Output {
    if opts.json {
        Output::ok(serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n")
    } else {
        Output::ok(text)
    }
}

fn subring_text(j: &QReesAlgebra) -> String {
    format!("chart {}\n{}", j.ring().vars.join(" "), j)
}

/// Runs `command` on `problem`. `eliminate` saturates by Diff before
/// selecting the generators free of the projected variable.
pub fn run_command(command: Command, problem: &ProblemFile, opts: &Options) -> Result<Output> {
    let j = match &opts.algebra {
        Some(name) => problem.algebra(name)?,
        None => problem.primary(),
    };
    let ring = &problem.ring;
    let poly_arg = || -> Result<Polynomial> { parse_polynomial(ring, required(&opts.poly, "poly", command)?) };
    match command {
        Command::Diff => {
            let d = diff_saturate(j);
            Ok(render(opts, algebra_json(&d), d.to_string()))
        }
        Command::Sing => {
            let s = j.sing_locus();
            Ok(render(opts, json!({ "sing": closed_set_json(&s) }), format!("{s}\n")))
        }
        Command::Ord => {
            let point = parse_point(ring, required(&opts.point, "point", command)?)?;
            let ord = j.ord_at_point(&point)?;
            Ok(render(opts, json!({ "ord": ord.to_string() }), format!("{ord}\n")))
        }
        Command::Coeff | Command::Eliminate => {
            let var = parse_var(ring, required(&opts.var, "var", command)?)?;
            let out = if command == Command::Coeff {
                geometry::coefficient_algebra(j, var)
            } else {
                geometry::elimination_algebra(&diff_saturate(j), var)
            };
            Ok(render(opts, algebra_json(&out), subring_text(&out)))
        }
        Command::Blowup | Command::Transform => {
            let center = parse_vars(ring, required(&opts.center, "center", command)?)?;
            let chart_var = parse_var(ring, required(&opts.chart_var, "chart-var", command)?)?;
            let transformed = geometry::transform(j, &center, chart_var)?;
            if command == Command::Transform {
                return Ok(render(opts, algebra_json(&transformed), transformed.to_string()));
            }
            let root = Chart::root(ring, problem.divisors.clone())?;
            let created = root.divisors.iter().map(|d| d.created + 1).max().unwrap_or(1);
            let chart = geometry::blowup_chart(&root, &center, chart_var, created, &[])?;
            let substitution: Vec<(String, String)> = ring
                .vars
                .iter()
                .zip(&chart.parent.as_ref().expect("blowup charts have a parent").substitution)
                .map(|(v, p)| (v.clone(), p.to_string()))
                .collect();
            let divisors: Vec<Value> = chart
                .divisors
                .iter()
                .map(|d| json!({ "var": ring.vars[d.var], "created": d.created }))
                .collect();
            let mut text = format!("chart {}\n", chart.id);
            for (v, p) in &substitution {
                text += &format!("  {v} = {p}\n");
            }
            for d in &chart.divisors {
                text += &format!("divisor {} created {}\n", ring.vars[d.var], d.created);
            }
            text += &transformed.to_string();
            let value = json!({
                "chart": chart.id,
                "substitution": substitution.iter().map(|(v, p)| json!([v, p])).collect::<Vec<_>>(),
                "divisors": divisors,
                "transform": algebra_json(&transformed),
            });
            Ok(render(opts, value, text))
        }
        Command::Nonmonomial => {
            let vars: Vec<usize> = problem.divisors.iter().map(|d| d.var).collect();
            let (i, ells) = geometry::non_monomial_part(j, &vars);
            let mut text = String::new();
            for (v, l) in vars.iter().zip(&ells) {
                text += &format!("ell {} = {l}\n", ring.vars[*v]);
            }
            text += &i.to_string();
            let value = json!({
                "ell": vars.iter().zip(&ells).map(|(v, l)| json!({ "var": ring.vars[*v], "ell": l.to_string() })).collect::<Vec<_>>(),
                "algebra": algebra_json(&i),
            });
            Ok(render(opts, value, text))
        }
        Command::Nu => {
            let v = saturation::nu(j, &poly_arg()?, opts.cap)?;
            Ok(render(opts, json!({ "nu": v.to_string() }), format!("{v}\n")))
        }
        Command::Nubar => {
            let v = saturation::nu_bar_estimate(j, &poly_arg()?, opts.n_max, opts.cap)?;
            Ok(render(
                opts,
                json!({ "nu_bar_lower_bound": v.to_string() }),
                format!("{v}\n"),
            ))
        }
        Command::Member => {
            let a: Weight = required(&opts.weight, "weight", command)?.parse()?;
            let v = saturation::is_integral_member(j, &poly_arg()?, a, opts.n_max, opts.cap)?;
            Ok(render(opts, json!({ "verdict": v.to_string() }), format!("{v}\n")))
        }
        Command::Equiv => {
            if problem.algebras.len() < 2 {
                return Err(Error::Precondition(
                    "`equiv` needs two algebras in the problem file".into(),
                ));
            }
            let (a, b) = (&problem.algebras[0].1, &problem.algebras[1].1);
            let v = saturation::equivalence_check(a, b, opts.n_max, opts.cap)?;
            Ok(render(opts, json!({ "equivalence": v.to_string() }), format!("{v}\n")))
        }
        Command::Resolve => {
            let trace = resolve(j, problem.divisors.clone(), opts.max_steps)?;
            let text = if opts.dot {
                trace.to_dot()
            } else if opts.json {
                trace.to_json() + "\n"
            } else {
                trace.to_string()
            };
            let code = match trace.status {
                Status::Resolved => 0,
                Status::NotTerminated => Error::NotTerminated(opts.max_steps).code(),
            };
            Ok(Output { text, code })
        }
    }
}
