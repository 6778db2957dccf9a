//! Fourier transform over `S3²`, with the noise operator damping each degree.

use std::sync::Arc;

use grouplin::catalog;
use grouplin::fourier::{inverse, noise_apply, plancherel_gap, product_irreps, transform, ScalarFn};
use grouplin::rational::ratio;
use grouplin::rep::{self, C64, DEFAULT_TOL};
use grouplin::selftest::{fourier_residuals, noise_residual};
use grouplin::PowerGroup;

fn main() -> grouplin::Result<()> {
    let set = Arc::new(rep::irreps(&Arc::new(catalog::symmetric3()), 0, DEFAULT_TOL)?);
    let power = PowerGroup::new(set.group().clone(), 2);
    println!("S3^2 has {} product irreducibles", product_irreps(&set, 2).len());

    // Indicator of the pair (e, (123)).
    let target = vec![0, 4];
    let f = ScalarFn::from_fn(power.clone(), |g| C64::new(if g == target.as_slice() { 1.0 } else { 0.0 }, 0.0))?;
    let m = f.to_matrix_fn();
    let table = transform(&m, &set)?;
    println!("inversion residual {:.1e}", inverse(&table)?.max_diff(&m));
    println!("plancherel gap     {:.1e}", plancherel_gap(&f, &set)?);

    let smoothed = noise_apply(&m, &ratio(1, 4))?;
    println!("noise keeps mass {:.4} at the point", smoothed.values[power.encode(&target)][(0, 0)].re);

    let r = fourier_residuals(0, 10)?;
    println!("random suite: {r:?}");
    println!("noise identity over Z2^3: {:.1e}", noise_residual(0, &ratio(1, 2))?);
    Ok(())
}
