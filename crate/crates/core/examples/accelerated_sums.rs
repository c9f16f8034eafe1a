// Slowly converging series summed through the asymptotic tail expansion.

use tribinom::numerics::{format_real, make_context, matched_digits};
use tribinom::series::{predicted_terms, sum_accelerated, sum_to_digits, SeriesSpec, Weight};

/// Digits on which the two routes agree, per series.
pub fn run_example() -> tribinom::Result<Vec<u32>> {
    let ctx = make_context(40, 1_000_000)?;
    let specs = [
        SeriesSpec::unit(67, 10, 0)?,
        SeriesSpec::unit(-67, 10, 1)?,
        SeriesSpec::new(rug::Rational::from((41, 10)), 1, Weight::Fib(1))?,
    ];
    let mut agree = Vec::new();
    for spec in &specs {
        let fast = sum_accelerated(spec, 40, &ctx)?;
        let slow = sum_to_digits(spec, 40, &ctx)?;
        let d = matched_digits(&fast.value, &slow.value, 40);
        println!(
            "{spec}: {} ({} terms, direct needs ~{}), {d} digits agree",
            format_real(&fast.value, 25),
            fast.terms_used,
            predicted_terms(spec, 40, &ctx)?.unwrap_or(0)
        );
        agree.push(d);
    }
    Ok(agree)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
