//! The built-in check suite and the end-to-end pipeline report.
//!
//! Every check records its residual next to a pass flag. Floating checks
//! compare their residual against the caller's tolerance; exact checks report
//! a residual of zero on success. A check that errors is recorded as failed
//! with the error text, so the suite always completes.

use std::sync::Arc;

use num::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::decoder::{self, DecoderContext, Leftover};
use crate::error::{Error, Result};
use crate::fourier::{self, convolve, noise_apply, plancherel_gap, transform, MatrixFn, ScalarFn};
use crate::group::{fold, is_folded, FiniteGroup, PowerGroup, Template};
use crate::io::{self, LcFile, TemplateFile};
use crate::rational::{self, ratio, Rational};
use crate::reduction::{
    build_system, evaluate, evaluate_family, planted_value, projection_family, AssignmentFamily,
    LabelCoverInstance, ReductionParams, Side,
};
use crate::rep::{self, IrrepSet, CMatrix, C64, DEFAULT_TOL};
use crate::solvers::{self, NonCubicOutcome};

pub const SUITES: &[&str] = &["groups", "reps", "fourier", "reduction", "solvers", "decoder"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub tol: f64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

struct Recorder {
    suite: &'static str,
    tol: f64,
    checks: Vec<Check>,
}

impl Recorder {
    fn exact(&mut self, name: impl Into<String>, outcome: Result<bool>) {
        let (pass, detail) = match outcome {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.push(name.into(), pass, if pass { 0.0 } else { 1.0 }, detail);
    }

    fn residual(&mut self, name: impl Into<String>, outcome: Result<f64>) {
        match outcome {
            Ok(r) => {
                let pass = r.is_finite() && r < self.tol;
                self.push(name.into(), pass, r, None)
            }
            Err(e) => self.push(name.into(), false, f64::INFINITY, Some(e.to_string())),
        }
    }

    fn push(&mut self, name: String, pass: bool, residual: f64, detail: Option<String>) {
        self.checks.push(Check { suite: self.suite.to_string(), name, pass, residual, detail });
    }
}

/// Runs the named suite, or all of them.
pub fn selftest(seed: u64, tol: f64, suite: Option<&str>) -> Result<SelftestReport> {
    if let Some(s) = suite {
        if !SUITES.contains(&s) {
            return Err(Error::InvalidParams(format!("unknown suite {s:?}; expected one of {SUITES:?}")));
        }
    }
    let mut checks = Vec::new();
    for &name in SUITES {
        if suite.is_some_and(|s| s != name) {
            continue;
        }
        let mut rec = Recorder { suite: name, tol, checks: Vec::new() };
        match name {
            "groups" => groups_suite(&mut rec, seed),
            "reps" => reps_suite(&mut rec, seed),
            "fourier" => fourier_suite(&mut rec, seed),
            "reduction" => reduction_suite(&mut rec),
            "solvers" => solvers_suite(&mut rec, seed),
            _ => decoder_suite(&mut rec, seed),
        }
        checks.extend(rec.checks);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(SelftestReport { seed, tol, passed, failed: checks.len() - passed, checks })
}

fn groups_suite(rec: &mut Recorder, seed: u64) {
    for g in catalog::groups(false) {
        let rebuilt = FiniteGroup::new(g.name(), g.labels().to_vec(), g.table_rows()).map(|h| h == *g);
        rec.exact(format!("group axioms {}", g.name()), rebuilt);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for name in catalog::TEMPLATE_NAMES {
        let outcome = catalog::template(name).map(|t| {
            let p = PowerGroup::new(t.g1.clone(), 2);
            let f: Vec<usize> = (0..p.size()).map(|_| rng.random_range(0..t.g2.order())).collect();
            let folded = fold(&f, &t.phi, 2);
            is_folded(&folded, &t.phi, 2) && fold(&folded, &t.phi, 2) == folded
        });
        rec.exact(format!("folding is idempotent on {name}"), outcome);
    }
}

fn reps_suite(rec: &mut Recorder, seed: u64) {
    for g in catalog::groups(false) {
        match rep::irreps(&g, seed, DEFAULT_TOL) {
            Ok(set) => {
                rec.exact(format!("sum of squared dimensions {}", g.name()), Ok(set.sum_dim_squared() == g.order()));
                rec.residual(format!("irreps unitary and orthogonal {}", g.name()), Ok(irrep_residual(&set)));
                rec.residual(format!("character sums {}", g.name()), Ok(set.character_sum_residual()));
            }
            Err(e) => rec.exact(format!("irreps {}", g.name()), Err(e)),
        }
    }
    for (name, h) in catalog::subgroup_pairs() {
        rec.exact(format!("frobenius {name}"), frobenius_sum(&h, seed).map(|(sum, index)| sum == index));
    }
}

/// Worst residual over the unitarity, homomorphism and orthogonality checks.
pub fn irrep_residual(set: &IrrepSet) -> f64 {
    set.unitarity_residual().max(set.homomorphism_residual()).max(set.orthogonality_residual())
}

/// `(Σ_ρ dim_ρ η_ρ, |G|/|H|)`.
pub fn frobenius_sum(h: &crate::group::Subgroup, seed: u64) -> Result<(usize, usize)> {
    let set = rep::irreps(h.parent(), seed, DEFAULT_TOL)?;
    let mut sum = 0;
    for w in set.irreps() {
        sum += w.dim() * rep::eta(w, h)?;
    }
    Ok((sum, h.parent().order() / h.order()))
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct FourierResiduals {
    pub inversion: f64,
    pub plancherel: f64,
    pub convolution: f64,
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Inversion and Plancherel on `count` random scalar functions over `S3²`,
/// and the convolution identity `(F*H)^(ρ_ij) = Σ_l F̂(ρ_il) Ĥ(ρ_lj)` on
/// `count` pairs of random `2×2` functions over `S3`.
pub fn fourier_residuals(seed: u64, count: usize) -> Result<FourierResiduals> {
    let set = Arc::new(rep::irreps(&Arc::new(catalog::symmetric3()), seed, DEFAULT_TOL)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FourierResiduals::default();
    let square = PowerGroup::new(set.group().clone(), 2);
    for _ in 0..count {
        let f = ScalarFn::from_fn(square.clone(), |_| random_c64(&mut rng))?;
        let m = f.to_matrix_fn();
        out.inversion = out.inversion.max(fourier::inverse(&transform(&m, &set)?)?.max_diff(&m));
        out.plancherel = out.plancherel.max(plancherel_gap(&f, &set)?);
    }
    let single = PowerGroup::new(set.group().clone(), 1);
    for _ in 0..count {
        let mut random_matrix = |_: &[usize]| CMatrix::from_fn(2, 2, |_, _| random_c64(&mut rng));
        let f = MatrixFn::from_fn(single.clone(), &mut random_matrix)?;
        let h = MatrixFn::from_fn(single.clone(), &mut random_matrix)?;
        let (tf, th, tc) = (transform(&f, &set)?, transform(&h, &set)?, transform(&convolve(&f, &h)?, &set)?);
        for (k, rho) in tc.irreps.iter().enumerate() {
            let d = rho.dim();
            for i in 0..d {
                for j in 0..d {
                    let mut expected = CMatrix::zeros(2, 2);
                    for l in 0..d {
                        expected += tf.get(k, i, l) * th.get(k, l, j);
                    }
                    out.convolution = out.convolution.max(rep::max_abs(&(tc.get(k, i, j) - expected)));
                }
            }
        }
    }
    Ok(out)
}

/// `max |Ĥ(ρ_ij) − (1−ε)^{|ρ|} F̂(ρ_ij)|` for a random `F` over `Z2³`, where
/// `H` is `F` under noise at rate `eps`.
pub fn noise_residual(seed: u64, eps: &Rational) -> Result<f64> {
    let set = Arc::new(rep::irreps(&Arc::new(catalog::cyclic(2)), seed, DEFAULT_TOL)?);
    let power = PowerGroup::new(set.group().clone(), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = ScalarFn::from_fn(power, |_| random_c64(&mut rng))?.to_matrix_fn();
    let (tf, th) = (transform(&f, &set)?, transform(&noise_apply(&f, eps)?, &set)?);
    let keep = 1.0 - rational::to_f64(eps);
    let mut worst: f64 = 0.0;
    for (k, rho) in tf.irreps.iter().enumerate() {
        let scale = keep.powi(rho.degree() as i32);
        let diff = th.get(k, 0, 0) - tf.get(k, 0, 0) * C64::new(scale, 0.0);
        worst = worst.max(rep::max_abs(&diff));
    }
    Ok(worst)
}

fn fourier_suite(rec: &mut Recorder, seed: u64) {
    match fourier_residuals(seed, 20) {
        Ok(r) => {
            rec.residual("fourier inversion over S3^2", Ok(r.inversion));
            rec.residual("plancherel over S3^2", Ok(r.plancherel));
            rec.residual("convolution identity over S3", Ok(r.convolution));
        }
        Err(e) => rec.residual("fourier round trip", Err(e)),
    }
    rec.residual("noise scaling over Z2^3", noise_residual(seed, &ratio(1, 2)));
}

/// `(value, weight sum, family value, system value)` for the planted family
/// of the first best labeling, on side `G1`.
pub fn reduction_exactness(lc: &LabelCoverInstance, t: &Template, eps: &Rational) -> Result<[Rational; 4]> {
    let params = ReductionParams::exact(eps.clone());
    let system = build_system(lc, t, &params)?;
    let total: Rational = system.equations.iter().map(|e| e.weight.clone()).sum();
    let (h_d, h_e, _) = best_labeling(lc)?;
    let family = projection_family(lc, t, &h_d, &h_e, Side::G1);
    let by_family = evaluate_family(lc, t, &params, &family)?;
    let by_system = evaluate(&system, &family.to_assignment(lc, t), Side::G1)?;
    Ok([planted_value(t, eps, Side::G1), total, by_family, by_system])
}

fn reduction_suite(rec: &mut Recorder) {
    let lc = catalog::lc_one_edge();
    let outcome = catalog::template("id-Z2").and_then(|t| reduction_exactness(&lc, &t, &ratio(1, 4)));
    match outcome {
        Ok([planted, total, by_family, by_system]) => {
            rec.exact("weights sum to one", Ok(total.is_one()));
            rec.exact("planted family value 7/8", Ok(by_family == ratio(7, 8) && planted == by_family));
            rec.exact("family evaluation matches the system", Ok(by_family == by_system));
        }
        Err(e) => rec.exact("reduction exactness", Err(e)),
    }
    let sampled = catalog::template("id-Z2").and_then(|t| {
        let a = build_system(&lc, &t, &ReductionParams::sampled(ratio(1, 4), 200, 5))?;
        let b = build_system(&lc, &t, &ReductionParams::sampled(ratio(1, 4), 200, 5))?;
        Ok(a.equations == b.equations)
    });
    rec.exact("sampled systems are reproducible", sampled);
}

fn solvers_suite(rec: &mut Recorder, seed: u64) {
    for name in ["id-Z2", "id-S3", "sign-S3-Z2"] {
        let outcome = catalog::template(name).map(|t| {
            (0..10).all(|k| {
                let s = solvers::random_system(&t, 5, 8, seed.wrapping_add(k));
                solvers::derandomize(&s, Side::G2).1 >= solvers::random_expectation(&s, Side::G2)
            })
        });
        rec.exact(format!("derandomization keeps the expectation on {name}"), outcome);
    }
    rec.exact("non-cubic Z3 decisions", non_cubic_z3());
}

/// Rejects an all-unsatisfiable `Z3` system and accepts a half-satisfiable
/// one with value at least `c/3`.
pub fn non_cubic_z3() -> Result<bool> {
    let t = catalog::template("id-Z3")?;
    let c = ratio(1, 2);
    let eq = |terms, rhs, weight| crate::reduction::LinEquation { terms, rhs, weight };
    let cube = [(0, 1), (0, 1), (0, 1)];
    let bad = crate::reduction::LinSystem::new(t.clone(), vec!["x".into()], vec![eq(cube, 1, ratio(1, 1))])?;
    let rejects = matches!(solvers::non_cubic_solve(&bad, &c)?, NonCubicOutcome::Reject { .. });
    let names = (0..4).map(|i| format!("x{i}")).collect();
    let mixed = crate::reduction::LinSystem::new(
        t,
        names,
        vec![eq(cube, 1, ratio(1, 2)), eq([(1, 1), (2, 1), (3, -1)], 2, ratio(1, 2))],
    )?;
    let accepts = match solvers::non_cubic_solve(&mixed, &c)? {
        NonCubicOutcome::Accept { value, .. } => value >= &c / rational::from_int(3),
        NonCubicOutcome::Reject { .. } => false,
    };
    Ok(rejects && accepts)
}

/// The planted dictator context over `Z2` on the one-edge instance.
pub fn planted_context(eps: Rational, delta: Rational, seed: u64) -> Result<DecoderContext> {
    let lc = catalog::lc_one_edge();
    let t = catalog::template("id-Z2")?;
    let family = projection_family(&lc, &t, &[0], &[0], Side::G2);
    DecoderContext::new(lc, t, eps, delta, family, seed)
}

fn decoder_suite(rec: &mut Recorder, seed: u64) {
    let ctx = match planted_context(ratio(1, 8), ratio(1, 4), seed) {
        Ok(c) => c,
        Err(e) => return rec.exact("planted decoder context", Err(e)),
    };
    rec.residual("character averaging identity", Ok(decoder::averaging_residual(&ctx)));
    let omega = match decoder::select_omega(&ctx) {
        Ok(o) => o,
        Err(e) => return rec.exact("omega selection", Err(e)),
    };
    rec.residual("planted margin 5/8", Ok((omega.margin - 5.0 / 8.0).abs()));
    rec.exact(
        "trivial term within eta",
        decoder::trivial_term_bound(&ctx, omega.index).map(|r| r.holds()),
    );
    let k = decoder::kappa(&ctx.delta, &ctx.eps).map(|k| decoder::effective_kappa(k, ctx.lc.num_d()));
    rec.exact(
        "high-degree mass within half the margin",
        k.and_then(|k| decoder::high_degree_mass(&ctx, omega.index, k)).map(|r| r.holds(true)),
    );
    rec.exact(
        "decoding recovers the planted labeling",
        decoder::decode(&ctx, Leftover::GiveUp).map(|d| {
            let (h_d, h_e, value) = decoder::derandomize_strategy(&ctx.lc, &d.strategy);
            h_d == [0] && h_e == [0] && value.is_one() && d.expected_value >= rational::to_f64(&d.alpha)
        }),
    );
}

/// The first labeling of maximum value, enumerating `|D|^|U| · |E|^|V|`
/// labelings (capped).
pub fn best_labeling(lc: &LabelCoverInstance) -> Result<(Vec<usize>, Vec<usize>, Rational)> {
    let (nu, nv) = (lc.u_names().len(), lc.v_names().len());
    let (nd, ne) = (lc.num_d() as u128, lc.num_e() as u128);
    let required = nd
        .checked_pow(nu as u32)
        .and_then(|a| ne.checked_pow(nv as u32).and_then(|b| a.checked_mul(b)))
        .unwrap_or(u128::MAX);
    let cap = crate::cap(solvers::BRUTE_FORCE_CAP);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let mut best: Option<(Vec<usize>, Vec<usize>, Rational)> = None;
    for idx in 0..required {
        let mut rest = idx;
        let mut digits = |n: usize, base: usize| -> Vec<usize> {
            let mut out = vec![0; n];
            for slot in out.iter_mut().rev() {
                *slot = (rest % base as u128) as usize;
                rest /= base as u128;
            }
            out
        };
        let h_e = digits(nv, lc.num_e());
        let h_d = digits(nu, lc.num_d());
        let value = lc.value(&h_d, &h_e);
        if best.as_ref().is_none_or(|b| value > b.2) {
            best = Some((h_d, h_e, value));
        }
    }
    Ok(best.expect("at least one labeling"))
}

/// Builds the system, evaluates the planted family, runs the solvers, and
/// decodes `family` (or the planted family over `G2`), as one JSON report.
pub fn run_pipeline(
    lc: &LabelCoverInstance,
    t: &Template,
    eps: &Rational,
    delta: &Rational,
    family: Option<AssignmentFamily>,
    seed: u64,
) -> Result<Value> {
    rational::check_open_unit("eps", eps)?;
    if !delta.is_positive() {
        return Err(Error::InvalidParams("delta must be positive".into()));
    }
    let params = ReductionParams::exact(eps.clone());
    let system = build_system(lc, t, &params)?;
    let weight_sum: Rational = system.equations.iter().map(|e| e.weight.clone()).sum();
    let (h_d, h_e, lc_value) = best_labeling(lc)?;
    let planted_g1 = projection_family(lc, t, &h_d, &h_e, Side::G1);
    let completeness = evaluate_family(lc, t, &params, &planted_g1)?;

    let brute = match solvers::brute_force_opt(&system, Side::G1, solvers::BRUTE_FORCE_CAP) {
        Ok((value, _)) => io::rat(&value),
        Err(Error::CapExceeded { required, cap }) => json!({ "skipped": "cap", "required": required.to_string(), "cap": cap.to_string() }),
        Err(e) => return Err(e),
    };
    let (_, derandomized) = solvers::derandomize(&system, Side::G2);
    let solver_report = json!({
        "brute_force_g1": brute,
        "random_expectation_g2": io::rat(&solvers::random_expectation(&system, Side::G2)),
        "derandomized_g2": io::rat(&derandomized),
        "unsatisfiable_weight": io::rat(&solvers::unsatisfiable_weight(&system)),
    });

    let family = match family {
        Some(f) => f,
        None => projection_family(lc, t, &h_d, &h_e, Side::G2),
    };
    let ctx = DecoderContext::new(lc.clone(), t.clone(), eps.clone(), delta.clone(), family, seed)?;
    let decoded = decoder::decode(&ctx, Leftover::GiveUp)?;
    let (dd, de, dvalue) = decoder::derandomize_strategy(lc, &decoded.strategy);

    Ok(json!({
        "instance": LcFile::from_instance(lc),
        "template": TemplateFile::from_template(t),
        "eps": io::rat(eps),
        "delta": io::rat(delta),
        "system": {
            "variables": system.variables.len(),
            "equations": system.equations.len(),
            "weight_sum": io::rat(&weight_sum),
        },
        "labeling": { "hD": h_d, "hE": h_e, "value": io::rat(&lc_value) },
        "completeness": io::rat(&completeness),
        "soundness_threshold": io::rat(&(ratio(1, t.h2.order() as i64) + delta)),
        "solvers": solver_report,
        "decoder": {
            "family_value": io::rat(&ctx.value()),
            "promise_holds": ctx.promise_holds(),
            "omega": decoded.omega,
            "kappa": decoded.kappa,
            "kappa_formula": decoded.kappa_formula,
            "alpha": io::rat(&decoded.alpha),
            "alpha_effective": io::rat(&decoded.alpha_effective),
            "expected_value": decoded.expected_value,
            "derandomized": { "hD": dd, "hE": de, "value": io::rat(&dvalue) },
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = selftest(0, 1e-9, None).unwrap();
        let failures: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.checks.len() > 30);
    }

    #[test]
    fn tiny_tolerance_reports_failures() {
        let report = selftest(0, 1e-15, Some("fourier")).unwrap();
        assert!(!report.all_pass());
        assert!(selftest(0, 1e-9, Some("nope")).is_err());
    }

    #[test]
    fn pipeline_on_the_one_edge_fixture() {
        let lc = catalog::lc_one_edge();
        let t = catalog::template("id-Z2").unwrap();
        let r = run_pipeline(&lc, &t, &ratio(1, 4), &ratio(1, 4), None, 0).unwrap();
        assert_eq!(r["completeness"], "7/8");
        assert_eq!(r["system"]["weight_sum"], "1");
        assert_eq!(r["decoder"]["derandomized"]["value"], "1");
        let zero = run_pipeline(&lc, &t, &ratio(0, 1), &ratio(1, 4), None, 0);
        assert!(matches!(zero, Err(Error::InvalidParams(_))));
    }
}
