use std::io::{self, Write};

use falsetheta::congruence::Density;
use falsetheta::{CongruenceClaim, IdentityEntry, VerificationReport};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;

/// Everything a command prints, independent of format.
pub struct Outcome {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub body: Body,
}

pub enum Body {
    Reports(Vec<VerificationReport>),
    Coefficients { expr: String, modulus: u64, values: Vec<String> },
    Density { series: String, modulus: u64, density: Density },
    Catalog { identities: Vec<IdentityEntry>, claims: Vec<CongruenceClaim> },
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match &self.body {
            Body::Reports(rs) => rs.iter().all(|r| r.passed()),
            _ => true,
        }
    }
}

/// Violations listed per report in text output.
const TEXT_VIOLATION_LIMIT: usize = 20;

#[derive(Serialize)]
struct JsonReport<'a> {
    name: &'a str,
    status: &'static str,
    n_checked: u64,
    n_skipped: u64,
    violations: &'a [falsetheta::Violation],
    elapsed_ms: u128,
}

pub fn render(outcome: &Outcome, format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Text => text(outcome, out),
        Format::Json => {
            let v = json!({
                "command": outcome.command,
                "params": outcome.params,
                "results": json_results(&outcome.body),
            });
            serde_json::to_writer_pretty(&mut *out, &v)?;
            writeln!(out)
        }
        Format::Csv => csv_out(&outcome.body, out),
    }
}

fn json_results(body: &Body) -> Value {
    match body {
        Body::Reports(rs) => Value::Array(
            rs.iter()
                .map(|r| {
                    json!(JsonReport {
                        name: &r.name,
                        status: r.status().as_str(),
                        n_checked: r.n_checked,
                        n_skipped: r.n_skipped,
                        violations: &r.violations,
                        elapsed_ms: r.elapsed.as_millis(),
                    })
                })
                .collect(),
        ),
        Body::Coefficients { expr, modulus, values } => {
            json!([{ "name": expr, "modulus": modulus, "coefficients": values }])
        }
        Body::Density { series, modulus, density } => json!([{
            "name": series,
            "modulus": modulus,
            "count": density.count,
            "total": density.total,
            "fraction": density.fraction,
        }]),
        Body::Catalog { identities, claims } => {
            let ids = identities.iter().map(|e| json!({ "kind": "identity", "entry": e }));
            let cs = claims.iter().map(|c| {
                json!({
                    "kind": "congruence",
                    "name": c.to_string(),
                    "claim": c,
                    "recommended_nmax": c.recommended_n_max(),
                })
            });
            Value::Array(ids.chain(cs).collect())
        }
    }
}

fn text(outcome: &Outcome, out: &mut impl Write) -> io::Result<()> {
    match &outcome.body {
        Body::Reports(rs) => {
            for r in rs {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                write!(out, "{tag}  {}  n_checked={}", r.name, r.n_checked)?;
                if r.n_skipped > 0 {
                    write!(out, " n_skipped={}", r.n_skipped)?;
                }
                if !r.passed() {
                    write!(out, " violations={}", r.violations.len())?;
                }
                writeln!(out, "  [{} ms]", r.elapsed.as_millis())?;
                for v in r.violations.iter().take(TEXT_VIOLATION_LIMIT) {
                    match &v.expected {
                        Some(e) => writeln!(out, "    n={} lhs={} rhs={}", v.n, v.value, e)?,
                        None => writeln!(out, "    n={} value={}", v.n, v.value)?,
                    }
                }
                if r.violations.len() > TEXT_VIOLATION_LIMIT {
                    writeln!(out, "    ... {} more", r.violations.len() - TEXT_VIOLATION_LIMIT)?;
                }
                if !r.window.is_empty() {
                    writeln!(out, "    window:")?;
                    for w in &r.window {
                        writeln!(out, "      {:>6}  {}  {}", w.n, w.lhs, w.rhs)?;
                    }
                }
            }
            let failed = rs.iter().filter(|r| !r.passed()).count();
            writeln!(out, "{} passed, {} failed", rs.len() - failed, failed)
        }
        Body::Coefficients { values, .. } => {
            for (n, c) in values.iter().enumerate() {
                writeln!(out, "{n} {c}")?;
            }
            Ok(())
        }
        Body::Density { series, modulus, density } => writeln!(
            out,
            "{series} mod {modulus}: {} of {} coefficients vanish ({:.6})",
            density.count, density.total, density.fraction
        ),
        Body::Catalog { identities, claims } => {
            writeln!(out, "identities:")?;
            for e in identities {
                let m = if e.is_exact() { String::new() } else { format!(" (mod {})", e.modulus) };
                writeln!(out, "  {:<22} {} = {}{}  [N={}]", e.name, e.lhs, e.rhs, m, e.default_order)?;
            }
            writeln!(out, "congruences:")?;
            for c in claims {
                writeln!(out, "  {c}  [nmax={}]", c.recommended_n_max())?;
            }
            Ok(())
        }
    }
}

fn csv_out(body: &Body, out: &mut impl Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match body {
        Body::Reports(rs) => {
            w.write_record(["name", "status", "n_checked", "n_skipped", "violations", "elapsed_ms"])?;
            for r in rs {
                w.write_record([
                    r.name.clone(),
                    r.status().as_str().to_string(),
                    r.n_checked.to_string(),
                    r.n_skipped.to_string(),
                    r.violations.len().to_string(),
                    r.elapsed.as_millis().to_string(),
                ])?;
            }
        }
        Body::Coefficients { values, .. } => {
            w.write_record(["n", "coefficient"])?;
            for (n, c) in values.iter().enumerate() {
                w.write_record([n.to_string(), c.clone()])?;
            }
        }
        Body::Density { series, modulus, density } => {
            w.write_record(["series", "modulus", "count", "total", "fraction"])?;
            w.write_record([
                series.clone(),
                modulus.to_string(),
                density.count.to_string(),
                density.total.to_string(),
                density.fraction.to_string(),
            ])?;
        }
        Body::Catalog { identities, claims } => {
            w.write_record(["kind", "name", "lhs", "rhs", "modulus"])?;
            for e in identities {
                w.write_record(["identity", &e.name, &e.lhs, &e.rhs, &e.modulus.to_string()])?;
            }
            for c in claims {
                let rhs = format!("{}n+{}", c.step, c.offset);
                w.write_record(["congruence", &c.to_string(), &c.series, &rhs, &c.modulus.to_string()])?;
            }
        }
    }
    w.flush()
}
