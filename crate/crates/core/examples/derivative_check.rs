// Differentiating level A gives level B, and level B gives level C.

use tribinom::closed_forms::XYPair;
use tribinom::numerics::make_context;
use tribinom::verifier::{differential_check, Transition, VerificationReport};

pub fn run_example() -> tribinom::Result<Vec<VerificationReport>> {
    let ctx = make_context(40, 1_000_000)?;
    let mut out = Vec::new();
    for (x, y) in [(9, 1), (27, 8)] {
        for t in [Transition::AToB, Transition::BToC] {
            let pair = XYPair::new(ctx.real(x), ctx.real(y));
            let r = differential_check(t, &pair, 40, &ctx)?;
            println!("{t} at ({x}, {y}): {} digits, {}", r.matched_digits, r.status);
            out.push(r);
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
