// Verify one catalog identity and print the report.

use tribinom::numerics::{format_real, make_context};
use tribinom::registry::builtin_catalog;
use tribinom::verifier::{verify, Status, VerificationReport};

pub fn run_example() -> tribinom::Result<VerificationReport> {
    let ctx = make_context(50, 1_000_000)?;
    let catalog = builtin_catalog();
    let record = catalog.get("eq-italy").expect("eq-italy is in the builtin catalog");
    let report = verify(record, 50, &ctx)?;
    println!("{}: {}", record.id, record.lhs);
    println!("  rhs    {}", record.rhs);
    println!("  lhs  = {}", format_real(&report.lhs_value, 50));
    println!("  rhs  = {}", format_real(&report.rhs_value, 50));
    println!("  {} with {} matched digits after {} terms", report.status, report.matched_digits, report.terms_used);
    assert_eq!(report.status, Status::Pass);
    Ok(report)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
