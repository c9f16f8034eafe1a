// Horadam sequences: the Fibonacci case reproduces the Fibonacci family,
// and the Pell case is checked against direct summation.

use tribinom::closed_forms::{theorem_lhs_spec, theorem_rhs, Family, Kind, TheoremParams};
use tribinom::numerics::{make_context, matched_digits};
use tribinom::sequences::HoradamParams;
use tribinom::series::sum_to_digits;

/// Smallest number of matched digits seen.
pub fn run_example() -> tribinom::Result<u32> {
    let ctx = make_context(30, 1_000_000)?;
    let mut worst = u32::MAX;
    for r in 1..=5 {
        let h = theorem_rhs(&TheoremParams::horadam(Family::HoradamA2, r, HoradamParams::fibonacci()), &ctx)?;
        let f = theorem_rhs(&TheoremParams::r(Family::Thm1(Kind::Fib), r), &ctx)?;
        let d = matched_digits(&h, &f, 30);
        println!("r = {r}: Horadam(1,1,0,1) vs Fibonacci family, {d} digits");
        worst = worst.min(d);
    }
    for r in 1..=3 {
        let params = TheoremParams::horadam(Family::HoradamA2, r, HoradamParams::pell());
        let spec = theorem_lhs_spec(&params)?;
        let lhs = sum_to_digits(&spec, 25, &ctx)?.value;
        let d = matched_digits(&lhs, &theorem_rhs(&params, &ctx)?, 25);
        println!("{params}: {spec}, {d} digits");
        worst = worst.min(d);
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
