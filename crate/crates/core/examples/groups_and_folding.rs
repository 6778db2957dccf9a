//! Lists the catalog templates with their cube-root status, then folds a
//! table over a subgroup.

use std::sync::Arc;

use grouplin::catalog;
use grouplin::group::{fold, is_folded, PowerGroup};

fn main() -> grouplin::Result<()> {
    for g in catalog::groups(false) {
        println!(
            "{:6} order {:2}  abelian {:5}  classes {}",
            g.name(),
            g.order(),
            g.is_abelian(),
            g.conjugacy_classes().len()
        );
    }

    for name in catalog::TEMPLATE_NAMES {
        let t = catalog::template(name)?;
        println!(
            "{:11} |H1| = {}  |H2| = {}  cubic = {}",
            name,
            t.h1.order(),
            t.h2.order(),
            t.is_cubic()
        );
    }

    let t = catalog::template("sign-S3-Z2")?;
    let power = PowerGroup::new(Arc::clone(&t.g1), 2);
    let table: Vec<usize> = (0..power.size()).map(|i| (i * 7 + 3) % t.g2.order()).collect();
    let folded = fold(&table, &t.phi, 2);
    println!("raw table folded? {}", is_folded(&table, &t.phi, 2));
    println!("after folding?    {}", is_folded(&folded, &t.phi, 2));
    Ok(())
}
