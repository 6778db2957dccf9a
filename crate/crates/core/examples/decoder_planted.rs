//! Decodes a Label Cover labeling from the planted dictator family over `Z2`
//! and from a majority family whose strategy is genuinely fractional.

use grouplin::catalog;
use grouplin::decoder::{
    decode, derandomize_strategy, high_degree_mass, select_omega, simulate_strategy, trivial_term_bound,
    DecoderContext, Leftover,
};
use grouplin::rational::{format, ratio};
use grouplin::reduction::{AssignmentFamily, Side};
use grouplin::selftest::planted_context;
use grouplin::PowerGroup;

fn main() -> grouplin::Result<()> {
    let ctx = planted_context(ratio(1, 8), ratio(1, 4), 0)?;
    let omega = select_omega(&ctx)?;
    println!("planted: value {}  omega {}  margin {:.4}", format(&ctx.value()), omega.index, omega.margin);
    println!("  trivial term {:?}", trivial_term_bound(&ctx, omega.index)?);
    println!("  high degree  {:?}", high_degree_mass(&ctx, omega.index, 2)?);
    let d = decode(&ctx, Leftover::GiveUp)?;
    let (h_d, h_e, value) = derandomize_strategy(&ctx.lc, &d.strategy);
    println!("  expected {:.4}  alpha {}  rounded {h_d:?} {h_e:?} -> {}", d.expected_value, format(&d.alpha), format(&value));

    let lc = catalog::lc_matching();
    let t = catalog::template("id-Z2")?;
    let p = PowerGroup::new(t.g1.clone(), 3);
    let majority: Vec<usize> = (0..p.size()).map(|i| usize::from(p.decode(i).iter().sum::<usize>() >= 2)).collect();
    let family = AssignmentFamily { side: Side::G2, a: vec![majority.clone()], b: vec![majority] };
    let ctx = DecoderContext::new(lc, t, ratio(1, 8), ratio(1, 16), family, 0)?;
    let d = decode(&ctx, Leftover::GiveUp)?;
    let (mean, stderr) = simulate_strategy(&ctx.lc, &d.strategy, 20_000, 1);
    println!("majority: value {}  v-probs {:?}", format(&ctx.value()), d.strategy.v_probs[0]);
    println!("  analytic {:.4}  simulated {:.4} ± {:.4}", d.expected_value, mean, stderr);
    Ok(())
}
