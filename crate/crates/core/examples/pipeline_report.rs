//! Runs the full chain on a catalog instance and prints the JSON report.
//! Usage: `cargo run --example pipeline_report [instance] [template] [eps] [delta]`.

use grouplin::rational::parse;
use grouplin::{catalog, io, selftest};

fn main() -> grouplin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let lc = catalog::lc_instance(&arg(0, "one-edge"))?;
    let t = catalog::template(&arg(1, "id-Z2"))?;
    let report = selftest::run_pipeline(&lc, &t, &parse(&arg(2, "1/4"))?, &parse(&arg(3, "1/4"))?, None, 0)?;
    print!("{}", io::canonical(&report)?);
    Ok(())
}
