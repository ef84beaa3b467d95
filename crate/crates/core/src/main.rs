use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qrees::cli::{run_command, Command, Options};
use qrees::problem::parse_problem;
use qrees::{Error, Weight};

/// Operations on Q-Rees algebras and a characteristic-zero resolution driver.
///
/// Exit codes: 0 success, 2 parse error, 3 unsupported characteristic,
/// 4 chart split required, 5 not terminated, 6 precondition violation.
#[derive(Parser, Debug)]
#[command(name = "qrees", version)]
struct Args {
    /// One of: diff, sing, ord, coeff, eliminate, blowup, transform,
    /// nonmonomial, nu, nubar, member, equiv, resolve.
    command: Command,
    /// Problem file, or `-` for standard input.
    file: PathBuf,
    /// Emit structured JSON.
    #[arg(long)]
    json: bool,
    /// Emit the chart tree as Graphviz DOT (`resolve` only).
    #[arg(long)]
    dot: bool,
    /// Largest power tried by integral-closure probes.
    #[arg(long, default_value_t = 4)]
    nmax: u32,
    /// Largest level searched by `nu`, `nubar` and `member`.
    #[arg(long, default_value = "16")]
    cap: Weight,
    /// Blowup budget for `resolve`.
    #[arg(long, default_value_t = 50)]
    max_steps: usize,
    /// Point as comma-separated field elements, e.g. `0,1/2,0`.
    #[arg(long)]
    point: Option<String>,
    /// Variable for `coeff` and `eliminate`.
    #[arg(long)]
    var: Option<String>,
    /// Center variables as a comma-separated list.
    #[arg(long)]
    center: Option<String>,
    /// Chart variable of the blowup.
    #[arg(long)]
    chart_var: Option<String>,
    /// Named algebra from the file (default: the first).
    #[arg(long)]
    algebra: Option<String>,
    /// Polynomial argument of `nu`, `nubar` and `member`.
    #[arg(long)]
    poly: Option<String>,
    /// Weight argument of `member`.
    #[arg(long)]
    weight: Option<String>,
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn run(args: Args) -> Result<i32, Error> {
    let text = read_input(&args.file).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", args.file.display()),
    })?;
    let problem = parse_problem(&text)?;
    let opts = Options {
        json: args.json,
        dot: args.dot,
        n_max: args.nmax,
        cap: args.cap,
        max_steps: args.max_steps,
        point: args.point,
        var: args.var,
        center: args.center,
        chart_var: args.chart_var,
        algebra: args.algebra,
        poly: args.poly,
        weight: args.weight,
    };
    let out = run_command(args.command, &problem, &opts)?;
    print!("{}", out.text);
    if out.code != 0 {
        eprintln!("{}", Error::NotTerminated(opts.max_steps));
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let code = match run(Args::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    };
    ExitCode::from(code as u8)
}
