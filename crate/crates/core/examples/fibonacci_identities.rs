// Exact Fibonacci and Lucas numbers and the auxiliary identities between them.

use tribinom::numerics::make_context;
use tribinom::sequences::{check_fl_identity, fib, lucas, FlIdentity};

/// Number of `(identity, n, m)` cases checked.
pub fn run_example() -> tribinom::Result<usize> {
    let ctx = make_context(40, 1000)?;
    println!("F(100) = {}", fib(100));
    println!("L(-7)  = {}", lucas(-7));
    let mut checked = 0;
    for id in FlIdentity::ALL {
        for n in -12..=12 {
            for m in -12..=12 {
                assert!(check_fl_identity(id, n, m, &ctx), "{} at ({n}, {m})", id.name());
                checked += 1;
            }
        }
    }
    println!("{checked} cases hold");
    Ok(checked)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
