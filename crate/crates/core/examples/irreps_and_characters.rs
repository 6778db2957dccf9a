//! Decomposes the regular representation of each catalog group, then prints
//! the S3 character table and the penalties `η` for subgroup pairs.

use grouplin::catalog;
use grouplin::rep::{self, DEFAULT_TOL};

fn main() -> grouplin::Result<()> {
    for g in catalog::groups(false) {
        let set = rep::irreps(&g, 0, DEFAULT_TOL)?;
        println!(
            "{:6} dims {:?}  sum of squares {}  unitarity residual {:.1e}",
            g.name(),
            set.dims(),
            set.sum_dim_squared(),
            set.unitarity_residual()
        );
    }

    let s3 = catalog::group("S3")?;
    let set = rep::irreps(&std::sync::Arc::new(s3), 0, DEFAULT_TOL)?;
    println!("\nS3 character table (rows: irreps, columns: elements)");
    for r in set.irreps() {
        let row: Vec<String> = r.character().iter().map(|c| format!("{:5.2}", c.re)).collect();
        println!("  {}", row.join(" "));
    }

    for (name, h) in catalog::subgroup_pairs() {
        let set = rep::irreps(h.parent(), 0, DEFAULT_TOL)?;
        let etas: Vec<usize> = set.irreps().iter().map(|w| rep::eta(w, &h)).collect::<grouplin::Result<_>>()?;
        let total: usize = set.irreps().iter().zip(&etas).map(|(w, e)| w.dim() * e).sum();
        println!("{name:14} eta {etas:?}  sum dim*eta = {total}");
    }
    Ok(())
}
