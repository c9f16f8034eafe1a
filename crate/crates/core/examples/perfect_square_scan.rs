// Arguments where 81 - 12z is a perfect square, with their catalog records.

use rug::Rational;
use tribinom::registry::{builtin_catalog, scan_perfect_square};

pub fn run_example() -> Vec<(Rational, String)> {
    let catalog = builtin_catalog();
    let mut rows = Vec::new();
    for z in scan_perfect_square(8) {
        let id = catalog
            .with_tag("positive-special")
            .find(|r| r.lhs.z.as_rational() == Some(&z))
            .map(|r| r.id.clone())
            .unwrap_or_default();
        println!("z = {z:>6}  81 - 12z = {:>2}  {id}", Rational::from(81 - Rational::from(&z * 12)));
        rows.push((z, id));
    }
    rows
}

#[allow(dead_code)]
fn main() {
    run_example();
}
