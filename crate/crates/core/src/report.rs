//! Output records and their CSV/JSON/text renderings.

use serde::Serialize;

use crate::bohr::{MonteCarloReport, Sharpness, TheoremId};
use crate::radius_equations::{Family, Params};
use crate::rootfind::RootEnclosure;
use crate::tables::{ClosedFormCheck, TableRow, TableSummary};

/// Output schema version.
pub const SCHEMA_VERSION: &str = "1";

/// 17 significant digits, so that every value parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..17).contains(&e) {
        let s = format!("{:.*}", (16 - e) as usize, x);
        trim_zeros(s)
    } else {
        format!("{x:.16e}")
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Parameters of one solve, flattened for output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveParams {
    pub theorem: Option<TheoremId>,
    pub family: Family,
    #[serde(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveRecord {
    pub params: SolveParams,
    pub root_lo: f64,
    pub root_hi: f64,
    pub capped: f64,
    pub residual: f64,
    #[serde(skip)]
    pub enclosure: RootEnclosure,
}

impl SolveRecord {
    pub fn root(&self) -> f64 {
        0.5 * (self.root_lo + self.root_hi)
    }
}

const PARAM_COLUMNS: [&str; 6] = ["K", "m", "t", "lambda", "p", "alpha"];

fn param_value(p: &Params, name: &str) -> String {
    match name {
        "K" => fmt_num(p.big_k),
        "m" => p.m.to_string(),
        "t" => fmt_num(p.t),
        "lambda" => fmt_num(p.lambda),
        "p" => fmt_num(p.p),
        "alpha" => fmt_num(p.alpha),
        _ => unreachable!(),
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// Full solve table: label columns, every parameter, then the results.
pub fn solve_csv(records: &[SolveRecord]) -> String {
    let mut header = vec!["theorem", "family"];
    header.extend(PARAM_COLUMNS);
    header.extend(["root", "root_lo", "root_hi", "capped", "residual"]);
    csv_string(
        &header,
        records.iter().map(|r| {
            let mut row = vec![
                r.params.theorem.map(|t| t.to_string()).unwrap_or_default(),
                r.params.family.to_string(),
            ];
            row.extend(PARAM_COLUMNS.iter().map(|c| param_value(&r.params.params, c)));
            row.extend(result_cells(r));
            row
        }),
    )
}

fn result_cells(r: &SolveRecord) -> [String; 5] {
    [
        fmt_num(r.root()),
        fmt_num(r.root_lo),
        fmt_num(r.root_hi),
        fmt_num(r.capped),
        fmt_num(r.residual),
    ]
}

/// Sweep table: the varying parameters first, then the results.
pub fn sweep_csv(varying: &[&str], records: &[SolveRecord]) -> String {
    let mut header: Vec<&str> = varying.to_vec();
    header.extend(["root", "root_lo", "root_hi", "capped", "residual"]);
    csv_string(
        &header,
        records.iter().map(|r| {
            let mut row: Vec<String> = varying
                .iter()
                .map(|c| param_value(&r.params.params, c))
                .collect();
            row.extend(result_cells(r));
            row
        }),
    )
}

pub fn solve_text(records: &[SolveRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let p = &r.params.params;
        let label = r
            .params
            .theorem
            .map(|t| format!("{t} ({})", r.params.family))
            .unwrap_or_else(|| r.params.family.to_string());
        out += &format!(
            "{label} K={} m={} t={} lambda={} p={} alpha={}\n  root    {}  in [{}, {}]\n  capped  {}\n  residual {}\n",
            p.big_k,
            p.m,
            p.t,
            p.lambda,
            p.p,
            p.alpha,
            fmt_num(r.root()),
            fmt_num(r.root_lo),
            fmt_num(r.root_hi),
            fmt_num(r.capped),
            fmt_num(r.residual),
        );
    }
    out
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut header = vec!["table", "family"];
    header.extend(PARAM_COLUMNS);
    header.extend([
        "printed",
        "paper_value",
        "computed",
        "abs_diff",
        "status",
        "residual",
        "alternative_root",
        "alternative_residual",
        "note",
    ]);
    csv_string(
        &header,
        rows.iter().map(|r| {
            let mut row = vec![r.table_id.to_string(), r.family.to_string()];
            row.extend(PARAM_COLUMNS.iter().map(|c| param_value(&r.params, c)));
            row.extend([
                r.printed.to_string(),
                fmt_num(r.paper_value),
                fmt_num(r.computed),
                fmt_num(r.abs_diff),
                r.status.as_str().to_string(),
                opt(r.residual),
                opt(r.alternative_root),
                opt(r.alternative_residual),
                r.note.clone().unwrap_or_default(),
            ]);
            row
        }),
    )
}

pub fn table_text(rows: &[TableRow], summary: &[TableSummary], findings: &[String]) -> String {
    let mut out = String::new();
    for r in rows {
        let p = &r.params;
        out += &format!(
            "T{} {:<2} K={:<4} m={:<3} t={:<5} lambda={:<5} p={:<4} alpha={:<4} printed={:<7} computed={:.6} diff={:.1e} {}\n",
            r.table_id,
            r.family.name(),
            p.big_k,
            p.m,
            p.t,
            p.lambda,
            p.p,
            p.alpha,
            r.printed,
            r.computed,
            r.abs_diff,
            r.status.as_str()
        );
    }
    for s in summary {
        out += &format!(
            "table {}: {}/{} match, {} mismatch, {} erratum-suspected\n",
            s.table_id, s.matches, s.rows, s.mismatches, s.erratum_suspected
        );
    }
    for f in findings {
        out += &format!("note: {f}\n");
    }
    out
}

pub fn closed_form_csv(checks: &[ClosedFormCheck]) -> String {
    csv_string(
        &["name", "family", "expected", "computed", "diff", "tol", "pass"],
        checks.iter().map(|c| {
            vec![
                c.name.clone(),
                c.family.to_string(),
                fmt_num(c.expected),
                fmt_num(c.computed),
                fmt_num(c.diff),
                fmt_num(c.tol),
                c.pass.to_string(),
            ]
        }),
    )
}

pub fn closed_form_text(checks: &[ClosedFormCheck]) -> String {
    checks
        .iter()
        .map(|c| {
            format!(
                "{:<32} expected {:.15} computed {:.15} diff {:.1e} {}\n",
                c.name,
                c.expected,
                c.computed,
                c.diff,
                if c.pass { "pass" } else { "FAIL" }
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub solve: SolveRecord,
    pub eps: f64,
    pub sharpness: Sharpness,
    pub monte_carlo: Vec<MonteCarloReport>,
}

pub fn verify_csv(v: &VerifyRecord) -> String {
    let (applicable, below, above) = match v.sharpness {
        Sharpness::Checked {
            below_ok,
            above_violates,
        } => ("true", below_ok.to_string(), above_violates.to_string()),
        Sharpness::NotApplicable { .. } => ("false", String::new(), String::new()),
    };
    csv_string(
        &[
            "theorem",
            "seed",
            "samples",
            "radius",
            "inequality_checks",
            "lemma_checks",
            "violations",
            "sharpness_applicable",
            "below_ok",
            "above_violates",
        ],
        v.monte_carlo.iter().map(|m| {
            vec![
                m.theorem.to_string(),
                m.base_seed.to_string(),
                m.samples.to_string(),
                fmt_num(m.radius),
                m.inequality_checks.to_string(),
                m.lemma_checks.to_string(),
                m.violations.len().to_string(),
                applicable.to_string(),
                below.clone(),
                above.clone(),
            ]
        }),
    )
}

pub fn verify_text(v: &VerifyRecord) -> String {
    let mut out = solve_text(std::slice::from_ref(&v.solve));
    out += &match v.sharpness {
        Sharpness::Checked {
            below_ok,
            above_violates,
        } => format!(
            "  sharpness (eps={}): below_ok={below_ok} above_violates={above_violates}\n",
            v.eps
        ),
        Sharpness::NotApplicable { root } => {
            format!("  sharpness: not applicable, root {} exceeds 1/3\n", fmt_num(root))
        }
    };
    for m in &v.monte_carlo {
        out += &format!(
            "  seed {}: {} samples, {} inequality checks, {} lemma checks, {} violations\n",
            m.base_seed,
            m.samples,
            m.inequality_checks,
            m.lemma_checks,
            m.violations.len()
        );
        for x in &m.violations {
            out += &format!(
                "    sample {} (schwarz seed {}, dilatation seed {}): {} at r = {}\n",
                x.sample,
                x.schwarz_seed,
                x.dilatation_seed,
                x.check,
                fmt_num(x.r)
            );
        }
    }
    out
}
