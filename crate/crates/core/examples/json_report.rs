// Machine-readable reports for a tagged slice of the catalog.

use tribinom::cli::{render_reports, Format};
use tribinom::numerics::make_context;
use tribinom::registry::{builtin_catalog, Catalog};
use tribinom::verifier::verify_all;

pub fn run_example() -> tribinom::Result<String> {
    let ctx = make_context(30, 1_000_000)?;
    let trig = Catalog::new(builtin_catalog().with_tag("trig").cloned().collect())?;
    let summary = verify_all(&trig, 30, &ctx);
    print!("{}", render_reports(&summary, 30, Format::Csv)?);
    let json = render_reports(&summary, 30, Format::Json)?;
    print!("{json}");
    Ok(json)
}

#[allow(dead_code)]
fn main() -> tribinom::Result<()> {
    run_example().map(|_| ())
}
