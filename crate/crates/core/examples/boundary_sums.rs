// Series on the circle of convergence, z = 27/4 and z = -27/4.

use tribinom::numerics::{format_real, make_context};
use tribinom::series::{classify, sum_boundary, SeriesSpec};

pub fn run_example() -> tribinom::Result<Vec<(String, String)>> {
    let ctx = make_context(30, 1_000_000)?;
    let mut out = Vec::new();
    for (num, a) in [(27, 2), (-27, 2), (-27, 1)] {
        let spec = SeriesSpec::unit(num, 4, a)?;
        let class = classify(&spec, &ctx)?;
        let sum = sum_boundary(&spec, 12, &ctx)?;
        let value = format_real(&sum.value, 12);
        println!(
            "{spec}: {class}, {} terms via {}, value {value} (+- {:.1e})",
            sum.terms_used,
            sum.method.name(),
            sum.tail.to_f64()
        );
        out.push((spec.to_string(), value));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
