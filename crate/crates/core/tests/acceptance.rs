//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use grouplin::catalog;
use grouplin::decoder::{self, DecoderContext, Leftover};
use grouplin::rational::{self, ratio};
use grouplin::reduction::{build_system, evaluate, evaluate_family, projection_family, AssignmentFamily, ReductionParams, Side};
use grouplin::rep::{self, DEFAULT_TOL};
use grouplin::selftest::{self, fourier_residuals, frobenius_sum, irrep_residual, noise_residual, non_cubic_z3};
use grouplin::solvers;
use grouplin::PowerGroup;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn representation_completeness() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for name in ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8"] {
        let g = Arc::new(catalog::group(name).map_err(|e| e.to_string())?);
        let set = rep::irreps(&g, 0, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure(set.sum_dim_squared() == g.order(), format!("{name}: sum of squares {}", set.sum_dim_squared()))?;
        let r = irrep_residual(&set);
        ensure(r < 1e-9, format!("{name}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("max residual {worst:.1e}"))
}

fn character_sums() -> Outcome {
    let mut worst: f64 = 0.0;
    for g in catalog::groups(false) {
        let set = rep::irreps(&g, 0, DEFAULT_TOL).map_err(|e| e.to_string())?;
        worst = worst.max(set.character_sum_residual());
    }
    ensure(worst < 1e-9, format!("residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn frobenius() -> Outcome {
    let expected = [2, 3, 2, 4];
    let mut got = Vec::new();
    for ((name, h), want) in catalog::subgroup_pairs().into_iter().zip(expected) {
        let (sum, index) = frobenius_sum(&h, 0).map_err(|e| e.to_string())?;
        ensure(sum == want && index == want, format!("{name}: sum {sum}, index {index}, expected {want}"))?;
        got.push(sum);
    }
    Ok(format!("sums {got:?}"))
}

fn fourier_round_trip() -> Outcome {
    let r = fourier_residuals(0, 100).map_err(|e| e.to_string())?;
    ensure(r.inversion < 1e-9 && r.plancherel < 1e-9 && r.convolution < 1e-9, format!("{r:?}"))?;
    Ok(format!("inversion {:.1e}, plancherel {:.1e}, convolution {:.1e}", r.inversion, r.plancherel, r.convolution))
}

fn noise_damping() -> Outcome {
    let r = noise_residual(0, &ratio(1, 2)).map_err(|e| e.to_string())?;
    ensure(r < 1e-12, format!("residual {r:e}"))?;
    Ok(format!("residual {r:.1e} over 8 product irreps"))
}

fn reduction_exactness() -> Outcome {
    let start = Instant::now();
    let lc = catalog::lc_one_edge();
    let t = catalog::template("id-Z2").map_err(|e| e.to_string())?;
    let params = ReductionParams::exact(ratio(1, 4));
    let system = build_system(&lc, &t, &params).map_err(|e| e.to_string())?;
    let total: grouplin::Rational = system.equations.iter().map(|e| e.weight.clone()).sum();
    ensure(total == ratio(1, 1), format!("weights sum to {}", rational::format(&total)))?;
    let family = projection_family(&lc, &t, &[0], &[0], Side::G1);
    let direct = evaluate_family(&lc, &t, &params, &family).map_err(|e| e.to_string())?;
    let via = evaluate(&system, &family.to_assignment(&lc, &t), Side::G1).map_err(|e| e.to_string())?;
    ensure(direct == ratio(7, 8), format!("planted value {}", rational::format(&direct)))?;
    ensure(direct >= ratio(3, 4), "below 1 - eps")?;
    ensure(direct == via, "family and system evaluations differ")?;
    within(Duration::from_secs(1), start)?;
    Ok("weights sum to 1, planted value 7/8 both ways".into())
}

fn solver_properties() -> Outcome {
    let templates = ["id-Z2", "id-Z3", "id-S3", "sign-S3-Z2", "Z4-Z2"];
    for k in 0..50u64 {
        let t = catalog::template(templates[k as usize % templates.len()]).map_err(|e| e.to_string())?;
        let s = solvers::random_system(&t, 2 + (k as usize % 5), 3 + (k as usize % 9), k);
        let (_, derand) = solvers::derandomize(&s, Side::G2);
        let expect = solvers::random_expectation(&s, Side::G2);
        ensure(derand >= expect, format!("system {k}: {} < {}", rational::format(&derand), rational::format(&expect)))?;
    }
    ensure(non_cubic_z3().map_err(|e| e.to_string())?, "non-cubic Z3 decisions wrong")?;
    Ok("50 systems, non-cubic reject/accept correct".into())
}

fn decoder_bounds() -> Outcome {
    let contexts = [
        ("one-edge", "id-Z2"),
        ("two-edge", "id-Z2"),
        ("one-edge", "id-Z3"),
        ("one-edge", "sign-S3-Z2"),
        ("one-edge", "Z4-Z2"),
    ];
    let mut worst_trivial: f64 = 0.0;
    let mut worst_high: f64 = 0.0;
    for (lc_name, t_name) in contexts {
        let lc = catalog::lc_instance(lc_name).map_err(|e| e.to_string())?;
        let t = catalog::template(t_name).map_err(|e| e.to_string())?;
        let (h_d, h_e, _) = selftest::best_labeling(&lc).map_err(|e| e.to_string())?;
        let family = projection_family(&lc, &t, &h_d, &h_e, Side::G2);
        let ctx = DecoderContext::new(lc, t, ratio(1, 8), ratio(1, 8), family, 0).map_err(|e| e.to_string())?;
        let omega = decoder::select_omega(&ctx).map_err(|e| format!("{lc_name}/{t_name}: {e}"))?;
        let trivial = decoder::trivial_term_bound(&ctx, omega.index).map_err(|e| e.to_string())?;
        ensure(trivial.holds(), format!("{lc_name}/{t_name}: {trivial:?}"))?;
        let k = decoder::kappa(&ctx.delta, &ctx.eps).map_err(|e| e.to_string())?;
        let high = decoder::high_degree_mass(&ctx, omega.index, decoder::effective_kappa(k, ctx.lc.num_d()))
            .map_err(|e| e.to_string())?;
        ensure(high.holds(true), format!("{lc_name}/{t_name}: {high:?}"))?;
        worst_trivial = worst_trivial.max(trivial.measured);
        worst_high = worst_high.max(high.measured);
    }
    Ok(format!(
        "{} contexts, largest trivial term {worst_trivial:.2e}, largest high-degree mass {worst_high:.2e}",
        contexts.len()
    ))
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let ctx = selftest::planted_context(ratio(1, 8), ratio(1, 4), 0).map_err(|e| e.to_string())?;
    let omega = decoder::select_omega(&ctx).map_err(|e| e.to_string())?;
    ensure(omega.index == 1 && (omega.margin - 0.625).abs() < 1e-9, format!("{omega:?}"))?;
    let d = decoder::decode(&ctx, Leftover::GiveUp).map_err(|e| e.to_string())?;
    ensure(d.expected_value >= rational::to_f64(&d.alpha), "expected value below alpha")?;
    let (h_d, h_e, value) = decoder::derandomize_strategy(&ctx.lc, &d.strategy);
    ensure(h_d == [0] && h_e == [0] && value == ratio(1, 1), format!("rounded to {h_d:?} {h_e:?}"))?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("margin {:.6}, expected {:.6} >= alpha {}", omega.margin, d.expected_value, rational::format(&d.alpha)))
}

fn simulation() -> Outcome {
    let lc = catalog::lc_matching();
    let t = catalog::template("id-Z2").map_err(|e| e.to_string())?;
    let p = PowerGroup::new(t.g1.clone(), 3);
    let majority: Vec<usize> = (0..p.size()).map(|i| usize::from(p.decode(i).iter().sum::<usize>() >= 2)).collect();
    let family = AssignmentFamily { side: Side::G2, a: vec![majority.clone()], b: vec![majority] };
    let ctx = DecoderContext::new(lc, t, ratio(1, 8), ratio(1, 16), family, 0).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for leftover in [Leftover::GiveUp, Leftover::Normalize] {
        let d = decoder::decode(&ctx, leftover).map_err(|e| e.to_string())?;
        let (mean, stderr) = decoder::simulate_strategy(&ctx.lc, &d.strategy, 100_000, 42);
        ensure(
            decoder::simulation_agrees(d.expected_value, mean, stderr),
            format!("{leftover:?}: analytic {} vs {mean} ± {stderr}", d.expected_value),
        )?;
        lines.push(format!("{leftover:?} {:.4} vs {mean:.4}±{stderr:.4}", d.expected_value));
    }
    let planted = selftest::planted_context(ratio(1, 8), ratio(1, 4), 0).map_err(|e| e.to_string())?;
    let d = decoder::decode(&planted, Leftover::GiveUp).map_err(|e| e.to_string())?;
    let (mean, stderr) = decoder::simulate_strategy(&planted.lc, &d.strategy, 100_000, 42);
    ensure(decoder::simulation_agrees(d.expected_value, mean, stderr), "planted simulation disagrees")?;
    Ok(lines.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("representation completeness", representation_completeness),
        ("character sums", character_sums),
        ("frobenius suite", frobenius),
        ("fourier round trip and plancherel", fourier_round_trip),
        ("noise damping", noise_damping),
        ("reduction exactness", reduction_exactness),
        ("solver properties", solver_properties),
        ("decoder bound measurements", decoder_bounds),
        ("end-to-end soundness sanity", end_to_end),
        ("strategy expectation vs simulation", simulation),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name} ({elapsed:.2?}): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name} ({elapsed:.2?}): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
