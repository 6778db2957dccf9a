//! Random-assignment expectation, its derandomization, exhaustive search and
//! the non-cubic accept/reject rule.

use grouplin::catalog;
use grouplin::rational::format;
use grouplin::reduction::Side;
use grouplin::selftest::non_cubic_z3;
use grouplin::solvers::{brute_force_opt, derandomize, random_expectation, random_system, BRUTE_FORCE_CAP};

fn main() -> grouplin::Result<()> {
    for name in ["id-Z2", "id-S3", "sign-S3-Z2"] {
        let t = catalog::template(name)?;
        let system = random_system(&t, 4, 10, 11);
        let expect = random_expectation(&system, Side::G2);
        let (_, derand) = derandomize(&system, Side::G2);
        let (opt, _) = brute_force_opt(&system, Side::G1, BRUTE_FORCE_CAP)?;
        println!(
            "{name:11} random {:>9}  derandomized {:>9}  optimum over G1 {:>9}",
            format(&expect),
            format(&derand),
            format(&opt)
        );
    }
    println!("non-cubic Z3 decisions correct: {}", non_cubic_z3()?);
    Ok(())
}
