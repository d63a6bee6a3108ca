//! Rendering of engine reports into json (canonical), csv and table views.

use clap::ValueEnum;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use negafib_core::report::{
    to_canonical_json, CascadeReport, Status, VerificationReport, ZeroReport, SCHEMA,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A result rendered in all three views; json is canonical (sorted keys,
/// no timestamps), csv and table are lossy.
pub struct Rendered {
    json: String,
    csv: String,
    table: String,
}

impl Rendered {
    pub fn in_format(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Csv => &self.csv,
            Format::Table => &self.table,
        }
    }
}

fn json_view<T: Serialize>(value: &T) -> String {
    let mut s = to_canonical_json(value);
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub k: u32,
    pub n: u64,
    pub h: String,
}

pub fn render_eval(rows: &[EvalRow], cross_check: bool, mismatches: u64) -> Rendered {
    let payload = json!({
        "schema": SCHEMA,
        "kind": "eval",
        "cross_check": cross_check,
        "mismatches": mismatches,
        "values": rows,
    });
    let mut csv = String::from("k,n,h\n");
    for r in rows {
        csv.push_str(&format!("{},{},{}\n", r.k, r.n, r.h));
    }
    let width = rows.iter().map(|r| r.h.len()).max().unwrap_or(1);
    let mut table = format!("{:>4} {:>8} {:>width$}\n", "k", "n", "H_n");
    for r in rows {
        table.push_str(&format!("{:>4} {:>8} {:>width$}\n", r.k, r.n, r.h));
    }
    if cross_check {
        table.push_str(&format!(
            "cross-check: {}\n",
            if mismatches == 0 {
                "all routes agree".to_string()
            } else {
                format!("{mismatches} MISMATCHES")
            }
        ));
    }
    Rendered {
        json: json_view(&payload),
        csv,
        table,
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

pub fn render_zero_reports(reports: &[ZeroReport]) -> Rendered {
    let json = if reports.len() == 1 {
        json_view(&reports[0])
    } else {
        json_view(&json!({
            "schema": SCHEMA,
            "kind": "zero_sweep",
            "reports": reports,
        }))
    };
    let mut csv =
        String::from("k,window_end,multiplicity,zeros_found,status,tail_certified,zeros\n");
    for r in reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k,
            r.window_end,
            r.multiplicity,
            r.zeros.len(),
            status_str(r.status),
            r.tail_certified,
            r.zeros
                .iter()
                .map(|z| z.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        ));
    }
    let mut table = String::new();
    for r in reports {
        table.push_str(&format!(
            "k={:<4} window={:<9} zeros={:<5} multiplicity={:<5} status={:<4} tail={}\n",
            r.k,
            r.window_end,
            r.zeros.len(),
            r.multiplicity,
            status_str(r.status),
            if r.tail_certified {
                "certified"
            } else {
                "open beyond window"
            }
        ));
        if reports.len() == 1 {
            table.push_str(&format!(
                "zeros: {}\n",
                r.zeros
                    .iter()
                    .map(|z| z.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
        for v in &r.violations {
            table.push_str(&format!("  violation: {} {:?}\n", v.message, v.data));
        }
    }
    Rendered {
        json,
        csv,
        table,
    }
}

pub fn render_verifications(reports: &[VerificationReport]) -> Rendered {
    let json = if reports.len() == 1 {
        json_view(&reports[0])
    } else {
        json_view(&json!({
            "schema": SCHEMA,
            "kind": "verification_set",
            "reports": reports,
        }))
    };
    let mut csv = String::from("suite,cases,status,violations\n");
    for r in reports {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.suite,
            r.cases,
            status_str(r.status),
            r.violations.len()
        ));
    }
    let mut table = String::new();
    for r in reports {
        table.push_str(&format!(
            "{:<10} cases={:<9} status={}\n",
            r.suite,
            r.cases,
            status_str(r.status)
        ));
        for v in &r.violations {
            table.push_str(&format!("  violation: {} {:?}\n", v.message, v.data));
        }
    }
    Rendered {
        json,
        csv,
        table,
    }
}

pub fn render_cascade(report: &CascadeReport) -> Rendered {
    let mut csv = String::from("step,k_solved,k_bound,n_solved,n_bound,valid\n");
    for s in &report.steps {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.step,
            s.k_solved.map_or(String::new(), |v| v.to_string()),
            s.k_bound.map_or(String::new(), |v| v.to_string()),
            s.n_solved.clone().unwrap_or_default(),
            s.n_bound.clone().unwrap_or_default(),
            s.bound_valid
        ));
    }
    let mut table = String::new();
    for s in &report.steps {
        table.push_str(&format!("step {}: {}\n", s.step, s.description));
        if let (Some(n), Some(cap)) = (&s.n_solved, &s.n_bound) {
            table.push_str(&format!(
                "  n-ceiling {} (certified bound {}){}\n",
                sci(n),
                sci(cap),
                s.n_solved_at_k
                    .map_or(String::new(), |k| format!(" at k = {k}"))
            ));
        }
        match (s.k_solved, s.k_bound) {
            (Some(ks), Some(kb)) => {
                table.push_str(&format!("  solved k = {ks} (certified bound k <= {kb})\n"))
            }
            (Some(ks), None) => table.push_str(&format!("  solved k = {ks}\n")),
            _ => {}
        }
        table.push_str(&format!(
            "  {}\n",
            if s.bound_valid { "ok" } else { "NOT VALID" }
        ));
    }
    table.push_str(&format!(
        "contradiction for odd k > 500: {}\n",
        if report.contradiction { "yes" } else { "NO" }
    ));
    Rendered {
        json: json_view(report),
        csv,
        table,
    }
}

/// Decimal string in compact scientific shape for tables: 2482... -> 2.482e45.
fn sci(decimal: &str) -> String {
    let (sign, digits) = decimal.strip_prefix('-').map_or(("", decimal), |d| ("-", d));
    if digits.len() <= 6 {
        return decimal.to_string();
    }
    let exp = digits.len() - 1;
    format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..4])
}

pub fn render_n_bound(k: u32, n: &BigInt) -> Rendered {
    let decimal = n.to_string();
    let payload = json!({
        "schema": SCHEMA,
        "kind": "n_bound",
        "k": k,
        "n_bound": decimal,
        "n_bound_sci": sci(&decimal),
    });
    Rendered {
        json: json_view(&payload),
        csv: format!("k,n_bound\n{k},{decimal}\n"),
        table: format!("k = {k}: any zero index satisfies n < {} ({decimal})\n", sci(&decimal)),
    }
}

pub fn render_lower_bound(k: u32, bound: &BigInt) -> Rendered {
    let decimal = bound.to_string();
    let payload = json!({
        "schema": SCHEMA,
        "kind": "lower_bound",
        "k": k,
        "exponent": (k - 1) / 2,
        "value": decimal,
    });
    Rendered {
        json: json_view(&payload),
        csv: format!("k,exponent,value\n{k},{},{decimal}\n", (k - 1) / 2),
        table: format!(
            "k = {k}: extra zeros need n >= 2^{} = {decimal}\n",
            (k - 1) / 2
        ),
    }
}
