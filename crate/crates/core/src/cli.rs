//! The `bohr` command line.
//!
//! ```text
//! bohr solve  --theorem T2_2 --K 9 --m 5 --lambda 0.8
//! bohr table  --id 4
//! bohr table  --closed-forms
//! bohr verify --theorem T3_1 --K 5 --m 3 --p 0.9 --t 0.2 --seeds 1,2,3
//! bohr sweep  --theorem T2_1 --t 0 --m 1 --K 1:100:1 --format csv
//! ```
//!
//! Exit status: 0 on success, 2 for invalid configuration, 3 when no root
//! is bracketed, 4 for a non-finite evaluation. `BOHR_TOL` overrides the
//! default tolerance; `--tol` overrides both.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bohr::{self, Theorem, TheoremId};
use crate::radius_equations::{Equation, Family, Params};
use crate::report::{self, SolveParams, SolveRecord, VerifyRecord, SCHEMA_VERSION};
use crate::rootfind;
use crate::tables;
use crate::{Error, BOHR_CAP, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_ROOT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "bohr", version, about = "Bohr-type radii for K-quasiconformal harmonic mappings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Absolute width of root enclosures [env: BOHR_TOL]
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root enclosure and capped radius for one parameter set.
    Solve(Target),
    /// Recompute the published tables.
    Table {
        /// Table number 1..7; all tables when omitted.
        #[arg(long)]
        id: Option<u8>,
        /// Report the closed-form constants instead.
        #[arg(long)]
        closed_forms: bool,
    },
    /// Sharpness and seeded Monte-Carlo checks of one theorem.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        /// Base seeds, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "42")]
        seeds: Vec<u64>,
        /// Samples per seed.
        #[arg(long, default_value_t = 200)]
        samples: u64,
        /// Radii per sample.
        #[arg(long, default_value_t = 20)]
        radii: usize,
    },
    /// Radii over a parameter grid; any parameter may be `start:stop:step`.
    Sweep(Target),
}

#[derive(Debug, Clone, Args)]
pub struct Target {
    /// T2_1, T2_2, T2_3, T3_1, T3_2, T4_1, T4_2 or T4_3.
    #[arg(long)]
    pub theorem: Option<String>,
    /// Radius family D, E, F, G, H, FA, GA, HA or RU (instead of --theorem).
    #[arg(long, conflicts_with = "theorem")]
    pub family: Option<String>,
    #[arg(long = "K", default_value = "1")]
    pub big_k: String,
    #[arg(long, default_value = "1")]
    pub m: String,
    #[arg(long, default_value = "0")]
    pub t: String,
    #[arg(long, default_value = "1")]
    pub lambda: String,
    #[arg(long, default_value = "0.5")]
    pub p: String,
    #[arg(long, default_value = "1")]
    pub alpha: String,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoRoot { .. } => EXIT_NO_ROOT,
            Error::Numerical { .. } => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: msg.into(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(text) => match &cli.output {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome {
                    code: EXIT_OK,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => Outcome {
                    code: EXIT_CONFIG,
                    stdout: String::new(),
                    stderr: format!("error: cannot write {}: {e}\n", path.display()),
                },
            },
            None => Outcome {
                code: EXIT_OK,
                stdout: text,
                stderr: String::new(),
            },
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn tolerance(cli: &Cli) -> Result<f64, Failure> {
    let tol = match cli.tol {
        Some(t) => t,
        None => match std::env::var("BOHR_TOL") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| config(format!("BOHR_TOL = {s:?} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(config(format!("tol = {tol} is outside (0, inf)")));
    }
    Ok(tol)
}

/// Inclusive `start:stop:step` grid or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| format!("{x:?} is not a number"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, b, c] => {
            let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
            if !(step > 0.0) || stop < start {
                return Err(format!("grid {s:?} needs step > 0 and stop >= start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(format!("grid {s:?} has too many points"));
            }
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(format!("{s:?} is neither a number nor start:stop:step")),
    }
}

#[derive(Debug, Clone, Copy)]
enum Selector {
    Theorem(TheoremId),
    Family(Family),
}

impl Selector {
    fn family(self) -> Family {
        match self {
            Selector::Theorem(t) => t.family(),
            Selector::Family(f) => f,
        }
    }

    fn theorem(self) -> Option<TheoremId> {
        match self {
            Selector::Theorem(t) => Some(t),
            Selector::Family(_) => None,
        }
    }
}

fn selector(t: &Target) -> Result<Selector, Failure> {
    match (&t.theorem, &t.family) {
        (Some(s), _) => Ok(Selector::Theorem(s.parse().map_err(Failure::from)?)),
        (None, Some(s)) => Ok(Selector::Family(s.parse().map_err(Failure::from)?)),
        (None, None) => Err(config("one of --theorem or --family is required")),
    }
}

struct Grid {
    /// Names of the parameters that take more than one value.
    varying: Vec<&'static str>,
    points: Vec<Params>,
}

fn grid(t: &Target) -> Result<Grid, Failure> {
    let axes: [(&'static str, &String); 6] = [
        ("K", &t.big_k),
        ("m", &t.m),
        ("t", &t.t),
        ("lambda", &t.lambda),
        ("p", &t.p),
        ("alpha", &t.alpha),
    ];
    let mut values = Vec::new();
    for (name, raw) in axes {
        let v = parse_grid(raw).map_err(|e| config(format!("--{name}: {e}")))?;
        if name == "m" {
            for &x in &v {
                if !(x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64) {
                    return Err(config(format!("--m: {x} is outside {{1, 2, ...}}")));
                }
            }
        }
        values.push((name, v));
    }
    let varying = values
        .iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(n, _)| *n)
        .collect();
    let mut points = vec![Params::default()];
    for (name, vs) in &values {
        points = points
            .into_iter()
            .flat_map(|p| {
                vs.iter().map(move |&x| {
                    let mut q = p;
                    match *name {
                        "K" => q.big_k = x,
                        "m" => q.m = x as u32,
                        "t" => q.t = x,
                        "lambda" => q.lambda = x,
                        "p" => q.p = x,
                        _ => q.alpha = x,
                    }
                    q
                })
            })
            .collect();
    }
    Ok(Grid { varying, points })
}

fn solve_one(sel: Selector, params: Params, tol: f64) -> Result<SolveRecord, Failure> {
    let family = sel.family();
    let eq = Equation::new(family, params)?;
    let enclosure = rootfind::solve(&eq, tol)?;
    let mid = enclosure.midpoint();
    let residual = eq.evaluate(mid).map(f64::abs).unwrap_or(f64::NAN);
    Ok(SolveRecord {
        params: SolveParams {
            theorem: sel.theorem(),
            family,
            params,
        },
        root_lo: enclosure.lo,
        root_hi: enclosure.hi,
        capped: mid.min(BOHR_CAP),
        residual,
        enclosure,
    })
}

fn target_json(t: &Target, tol: f64) -> Value {
    json!({
        "theorem": t.theorem,
        "family": t.family,
        "K": t.big_k,
        "m": t.m,
        "t": t.t,
        "lambda": t.lambda,
        "p": t.p,
        "alpha": t.alpha,
        "tol": tol,
    })
}

fn envelope(command: &str, params: Value, results: impl Serialize, extra: Value) -> String {
    let mut doc = json!({
        "command": command,
        "params": params,
        "results": results,
        "version": SCHEMA_VERSION,
    });
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let tol = tolerance(cli)?;
    match &cli.command {
        Command::Solve(target) | Command::Sweep(target) => {
            let sweep = matches!(cli.command, Command::Sweep(_));
            let sel = selector(target)?;
            let g = grid(target)?;
            if !sweep && g.points.len() > 1 {
                return Err(config("solve takes scalar parameters; use sweep for grids"));
            }
            let records = g
                .points
                .par_iter()
                .map(|&p| solve_one(sel, p, tol))
                .collect::<Result<Vec<_>, _>>()?;
            let name = if sweep { "sweep" } else { "solve" };
            Ok(match cli.format {
                Format::Json => envelope(name, target_json(target, tol), &records, json!({})),
                Format::Csv if sweep => report::sweep_csv(&g.varying, &records),
                Format::Csv => report::solve_csv(&records),
                Format::Text => report::solve_text(&records),
            })
        }
        Command::Table { id, closed_forms } => {
            if *closed_forms {
                let checks = tables::closed_form_checks()?;
                return Ok(match cli.format {
                    Format::Json => envelope(
                        "table",
                        json!({ "closed_forms": true }),
                        &checks,
                        json!({}),
                    ),
                    Format::Csv => report::closed_form_csv(&checks),
                    Format::Text => report::closed_form_text(&checks),
                });
            }
            let rows = match id {
                Some(id) => tables::reproduce_table(*id)?,
                None => tables::reproduce_all()?,
            };
            let summary = tables::summarize(&rows);
            let findings = tables::table1_findings(&rows);
            Ok(match cli.format {
                Format::Json => envelope(
                    "table",
                    json!({ "id": id }),
                    &rows,
                    json!({ "summary": summary, "findings": findings }),
                ),
                Format::Csv => report::table_csv(&rows),
                Format::Text => report::table_text(&rows, &summary, &findings),
            })
        }
        Command::Verify {
            target,
            eps,
            seeds,
            samples,
            radii,
        } => {
            let sel = selector(target)?;
            let Selector::Theorem(id) = sel else {
                return Err(config("verify needs --theorem"));
            };
            let g = grid(target)?;
            if g.points.len() != 1 {
                return Err(config("verify takes scalar parameters"));
            }
            if *radii == 0 {
                return Err(config("--radii must be positive"));
            }
            let params = g.points[0];
            let thm = Theorem::new(id, params)?;
            let solve = solve_one(sel, params, tol)?;
            let sharpness = bohr::check_sharpness(&thm, *eps)?;
            let monte_carlo = seeds
                .iter()
                .map(|&s| bohr::monte_carlo(&thm, s, *samples, *radii))
                .collect::<Result<Vec<_>, _>>()?;
            let v = VerifyRecord {
                solve,
                eps: *eps,
                sharpness,
                monte_carlo,
            };
            Ok(match cli.format {
                Format::Json => {
                    let mut p = target_json(target, tol);
                    p["eps"] = json!(eps);
                    p["seeds"] = json!(seeds);
                    p["samples"] = json!(samples);
                    p["radii"] = json!(radii);
                    envelope(
                        "verify",
                        p,
                        [&v.solve],
                        json!({ "sharpness": v.sharpness, "monte_carlo": v.monte_carlo }),
                    )
                }
                Format::Csv => report::verify_csv(&v),
                Format::Text => report::verify_text(&v),
            })
        }
    }
}
