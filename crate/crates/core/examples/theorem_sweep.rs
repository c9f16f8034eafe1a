// Sweep two theorem families over their default grids.

use tribinom::closed_forms::{Family, Kind};
use tribinom::numerics::make_context;
use tribinom::verifier::{standard_grid, sweep, Summary};

pub fn run_example() -> tribinom::Result<Summary> {
    let ctx = make_context(30, 1_000_000)?;
    let mut reports = Vec::new();
    for family in [Family::Thm1(Kind::Fib), Family::Thm3(1), Family::Thm9(Kind::Luc)] {
        let grid = standard_grid(family);
        let batch = sweep(family, &grid, 30, &ctx)?;
        println!("{family}: {} points", batch.len());
        reports.extend(batch);
    }
    let summary = Summary::from_reports(reports);
    println!("pass {} fail {}", summary.pass, summary.fail);
    Ok(summary)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
