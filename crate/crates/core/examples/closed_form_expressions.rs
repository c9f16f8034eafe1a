// Parse, evaluate and serialize a closed-form expression.

use tribinom::numerics::{format_real, make_context, parse_expr, ClosedFormExpr};

pub fn run_example() -> tribinom::Result<String> {
    let expr = parse_expr("6*atan(sqrt(3)/(2*cbrt(2) - 1))^2 - log(3/(cbrt(2) + 1)^3)^2/2")?;
    let json = expr.to_json();
    assert_eq!(ClosedFormExpr::from_json(&json)?, expr);
    let mut last = String::new();
    for digits in [20, 60] {
        let ctx = make_context(digits, 1000)?;
        last = format_real(&expr.eval(&ctx)?, digits as usize);
        println!("{digits:>3} digits: {last}");
    }
    println!("tree: {json}");
    Ok(last)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
