// Trigonometric parametrizations checked against the catalog literals.

use tribinom::closed_forms::{trig_argument, trig_rhs, TrigVariant};
use tribinom::numerics::{make_context, matched_digits};
use tribinom::registry::builtin_catalog;

pub fn run_example() -> tribinom::Result<Vec<(String, u32)>> {
    let ctx = make_context(30, 1000)?;
    let catalog = builtin_catalog();
    let mut out = Vec::new();
    for record in catalog.with_tag("trig") {
        let mut parts = record.id.split('-').skip(1);
        let variant: TrigVariant = parts.next().unwrap_or_default().parse()?;
        let den: u32 = parts.next().unwrap_or_default().trim_start_matches("pi").parse().unwrap_or(1);
        let x = ctx.pi() / den;
        let z = trig_argument(variant, &x, &ctx)?;
        let d = matched_digits(&trig_rhs(variant, &x, &ctx)?, &record.rhs.eval(&ctx)?, 30);
        println!("{:<13} z = {:<8.5} {d} digits", record.id, z.to_f64());
        out.push((record.id.clone(), d));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
