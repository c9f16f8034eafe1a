// Load a user catalog and verify it.

use tribinom::numerics::make_context;
use tribinom::registry::load_catalog;
use tribinom::verifier::{verify_all, Summary};

const CATALOG: &str = r#"{
  "version": 1,
  "records": [
    {"id": "thm1-fib-r4", "source": "Fibonacci family at r = 4", "validity": "r = 4",
     "lhs": {"z": "-27/45", "a": 2}, "rhs": {"family": "THM1_FIB", "r": 4}, "tags": ["mine"]},
    {"id": "pell-r1", "source": "Horadam family, Pell numbers, r = 1", "validity": "r = 1",
     "lhs": {"z": "27/8", "a": 1},
     "rhs": {"family": "HORADAM_A1", "r": 1, "sequence": {"p": "2", "q": "1", "a": "0", "b": "1"}}, "tags": ["mine"]},
    {"id": "mismatched", "source": "r = 5 closed form against the r = 4 series", "validity": "",
     "lhs": {"z": "-27/45", "a": 2}, "rhs": {"family": "THM1_FIB", "r": 5}, "tags": []}
  ]
}"#;

pub fn run_example() -> tribinom::Result<Summary> {
    let catalog = load_catalog(CATALOG)?;
    let ctx = make_context(25, 1_000_000)?;
    let summary = verify_all(&catalog, 25, &ctx);
    for r in &summary.reports {
        println!("{:<14} {:<5} {:>2} digits  {}", r.identity_id, r.status.name(), r.matched_digits, r.diagnostic);
    }
    Ok(summary)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
