//! Builds the exact 3-LIN system of the one-edge instance over `Z2` and checks
//! the planted dictator family against it.

use grouplin::catalog;
use grouplin::rational::{format, ratio};
use grouplin::reduction::{build_system, evaluate, evaluate_family, projection_family, ReductionParams, Side};

fn main() -> grouplin::Result<()> {
    let lc = catalog::lc_one_edge();
    let t = catalog::template("id-Z2")?;
    let eps = ratio(1, 4);
    let params = ReductionParams::exact(eps.clone());

    let system = build_system(&lc, &t, &params)?;
    println!("{} variables, {} merged equations", system.variables.len(), system.equations.len());
    for eq in system.equations.iter().take(3) {
        let terms: Vec<String> =
            eq.terms.iter().map(|&(x, s)| format!("{}^{}", system.variables[x], s)).collect();
        println!("  {} = {}   weight {}", terms.join(" "), eq.rhs, format(&eq.weight));
    }

    let family = projection_family(&lc, &t, &[0], &[0], Side::G1);
    let direct = evaluate_family(&lc, &t, &params, &family)?;
    let through_system = evaluate(&system, &family.to_assignment(&lc, &t), Side::G1)?;
    println!("planted value {} (system says {})", format(&direct), format(&through_system));

    let sampled = build_system(&lc, &t, &ReductionParams::sampled(eps, 64, 7))?;
    println!("sampled system with {} equations", sampled.equations.len());
    Ok(())
}
