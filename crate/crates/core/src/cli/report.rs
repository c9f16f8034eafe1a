use clap::ValueEnum;
use rug::Rational;
use serde_json::{json, Value};

use super::EvalRow;
use crate::numerics::{format_real, Real};
use crate::registry::IdentityRecord;
use crate::verifier::{Summary, VerificationReport};
use crate::{Error, Result};

/// Digits shown per number in Markdown.
pub const MD_DIGITS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
    Csv,
}

const CSV_COLUMNS: [&str; 6] = ["id", "status", "matched_digits", "terms_used", "tail", "elapsed_ms"];

fn decimal(x: &Real, sig: usize) -> String {
    format_real(x, sig)
}

fn opt_decimal(x: &Option<Real>, sig: usize) -> String {
    x.as_ref().map_or_else(String::new, |v| decimal(v, sig))
}

/// At most [`MD_DIGITS`] significant digits, with `…` when cut.
fn short(x: &Real, sig: usize) -> String {
    if !x.is_normal() || sig <= MD_DIGITS {
        return decimal(x, sig);
    }
    let cut = decimal(x, MD_DIGITS);
    match cut.find('e') {
        Some(i) => format!("{}…{}", &cut[..i], &cut[i..]),
        None => format!("{cut}…"),
    }
}

fn pretty(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn elapsed_ms(r: &VerificationReport) -> u64 {
    r.elapsed.as_millis() as u64
}

fn report_json(r: &VerificationReport, digits: usize) -> Value {
    json!({
        "id": r.identity_id,
        "status": r.status.name(),
        "matched_digits": r.matched_digits,
        "lhs": decimal(&r.lhs_value, digits),
        "rhs": decimal(&r.rhs_value, digits),
        "terms_used": r.terms_used,
        "tail": decimal(&r.tail, 6),
        "elapsed_ms": elapsed_ms(r),
    })
}

/// Renders verification results.
///
/// JSON keys are sorted and every high-precision number is a decimal
/// string, so parsing and re-emitting the output reproduces it exactly.
pub fn render_reports(summary: &Summary, digits: u32, format: Format) -> Result<String> {
    let sig = digits as usize;
    match format {
        Format::Json => pretty(&json!({
            "suite": {
                "digits": digits,
                "pass": summary.pass,
                "fail": summary.fail,
                "skipped": summary.skipped,
            },
            "reports": summary.reports.iter().map(|r| report_json(r, sig)).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_text(
            &CSV_COLUMNS,
            summary.reports.iter().map(|r| {
                vec![
                    r.identity_id.clone(),
                    r.status.name().to_owned(),
                    r.matched_digits.to_string(),
                    r.terms_used.to_string(),
                    decimal(&r.tail, 6),
                    elapsed_ms(r).to_string(),
                ]
            }),
        ),
        Format::Md => {
            let mut out = format!(
                "digits {digits}: {} pass, {} fail, {} skipped\n\n",
                summary.pass, summary.fail, summary.skipped
            );
            out.push_str("| id | status | matched | lhs | rhs | terms | tail | ms |\n");
            out.push_str("|---|---|---:|---|---|---:|---|---:|\n");
            for r in &summary.reports {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                    r.identity_id,
                    r.status,
                    r.matched_digits,
                    short(&r.lhs_value, sig),
                    short(&r.rhs_value, sig),
                    r.terms_used,
                    decimal(&r.tail, 3),
                    elapsed_ms(r),
                ));
            }
            let notes: Vec<_> = summary
                .reports
                .iter()
                .filter(|r| !r.status.is_pass())
                .map(|r| format!("- {}: {}\n", r.identity_id, r.diagnostic))
                .collect();
            if !notes.is_empty() {
                out.push('\n');
                out.extend(notes);
            }
            Ok(out)
        }
    }
}

/// Renders catalog records.
pub fn render_list(records: &[&IdentityRecord], format: Format) -> Result<String> {
    match format {
        Format::Json => pretty(&Value::Array(
            records
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "lhs": r.lhs.to_json(),
                        "rhs": r.rhs.to_json(),
                        "convergence": r.convergence.name(),
                        "source": r.source,
                        "tags": r.tags,
                    })
                })
                .collect(),
        )),
        Format::Csv => csv_text(
            &["id", "z", "a", "weight", "convergence"],
            records.iter().map(|r| {
                vec![
                    r.id.clone(),
                    r.lhs.z.to_string(),
                    r.lhs.a.to_string(),
                    r.lhs.weight.to_string(),
                    r.convergence.name().to_owned(),
                ]
            }),
        ),
        Format::Md => {
            let mut out = String::from("| id | series | convergence | tags |\n|---|---|---|---|\n");
            for r in records {
                out.push_str(&format!(
                    "| {} | {} | {} | {} |\n",
                    r.id,
                    r.lhs,
                    r.convergence.name(),
                    r.tags.join(", ")
                ));
            }
            Ok(out)
        }
    }
}

/// Renders scanned arguments.
pub fn render_scan(values: &[Rational], format: Format) -> Result<String> {
    let text: Vec<String> = values.iter().map(Rational::to_string).collect();
    match format {
        Format::Json => pretty(&json!(text)),
        Format::Csv => csv_text(&["z"], text.into_iter().map(|z| vec![z])),
        Format::Md => Ok(text.into_iter().map(|z| z + "\n").collect()),
    }
}

/// Renders `eval` rows.
pub fn render_eval(rows: &[EvalRow], digits: u32, format: Format) -> Result<String> {
    let sig = digits as usize;
    match format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "convergence": r.class,
                        "lhs": opt_decimal(&r.lhs, sig),
                        "rhs": opt_decimal(&r.rhs, sig),
                        "terms_used": r.terms_used,
                        "note": r.note,
                    })
                })
                .collect(),
        )),
        Format::Csv => csv_text(
            &["id", "convergence", "lhs", "rhs", "terms_used"],
            rows.iter().map(|r| {
                vec![
                    r.id.clone(),
                    r.class.clone(),
                    opt_decimal(&r.lhs, sig),
                    opt_decimal(&r.rhs, sig),
                    r.terms_used.to_string(),
                ]
            }),
        ),
        Format::Md => {
            let mut out = String::from("| id | convergence | lhs | rhs | terms | note |\n|---|---|---|---|---:|---|\n");
            for r in rows {
                let cell = |v: &Option<Real>| v.as_ref().map_or_else(String::new, |x| short(x, sig));
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} |\n",
                    r.id,
                    r.class,
                    cell(&r.lhs),
                    cell(&r.rhs),
                    r.terms_used,
                    r.note
                ));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;

    #[test]
    fn markdown_truncation() {
        let ctx = make_context(40, 100).unwrap();
        let pi = ctx.pi();
        assert_eq!(short(&pi, 40), "3.141592653589793238462643…");
        assert_eq!(short(&pi, 10), "3.141592654");
    }
}
