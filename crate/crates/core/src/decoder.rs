//! The soundness decoder. Given an assignment family over `G2` that beats the
//! random threshold `1/|H2| + δ`, it picks a representation `ω` with a
//! positive penalized margin. The low-degree Fourier influences of
//! `𝒜 = ω∘(A_v)_φ` and `ℬ(b) = E_s[ω(B_u(b^s))^s]` then give a randomized
//! Label Cover labeling.
//!
//! Every expectation over the sampling law is an exact enumeration; the
//! decoder refuses with `CapExceeded` instead of sampling.

use std::str::FromStr;
use std::sync::Arc;

use log::warn;
use num::{BigInt, One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{convolve, noise_weights, product_irreps, transform_on, MatrixFn, ScalarFn};
use crate::group::{fold, PowerGroup, Template};
use crate::rational::{self, Rational};
use crate::reduction::{payoff_distribution, AssignmentFamily, LabelCoverInstance, Side};
use crate::rep::{self, max_abs, CMatrix, IrrepSet, C64, DEFAULT_TOL};

/// Slack allowed when comparing a measured quantity with its bound.
pub const CONTRACT_TOL: f64 = 1e-9;

/// Everything the decoder reads: the instance, the template, the noise rate,
/// the advantage `δ`, a family over `G2`, and canonical irrep sets.
#[derive(Clone, Debug)]
pub struct DecoderContext {
    pub lc: LabelCoverInstance,
    pub template: Template,
    pub eps: Rational,
    pub delta: Rational,
    pub family: AssignmentFamily,
    pub seed: u64,
    pub g1_irreps: Arc<IrrepSet>,
    pub g2_irreps: Arc<IrrepSet>,
    distribution: Vec<Rational>,
}

impl DecoderContext {
    pub fn new(
        lc: LabelCoverInstance,
        template: Template,
        eps: Rational,
        delta: Rational,
        family: AssignmentFamily,
        seed: u64,
    ) -> Result<Self> {
        rational::check_open_unit("eps", &eps)?;
        if !delta.is_positive() {
            return Err(Error::InvalidParams("delta must be positive".into()));
        }
        if family.side != Side::G2 {
            return Err(Error::InvalidParams("the decoder reads families over G2".into()));
        }
        let threshold = rational::ratio(1, template.h2.order() as i64) + &delta;
        if threshold > Rational::one() - &eps {
            return Err(Error::InvalidParams(format!(
                "1/|H2| + delta = {} exceeds 1 - eps = {}",
                rational::format(&threshold),
                rational::format(&(Rational::one() - &eps))
            )));
        }
        let distribution = payoff_distribution(&lc, &template, &eps, &family)?;
        let value = &distribution[template.g2.identity()];
        if value < &threshold {
            warn!(
                "family value {} is below the promise 1/|H2| + delta = {}",
                rational::format(value),
                rational::format(&threshold)
            );
        }
        let g1_irreps = Arc::new(rep::irreps(&template.g1, seed, DEFAULT_TOL)?);
        let g2_irreps = Arc::new(rep::irreps(&template.g2, seed, DEFAULT_TOL)?);
        Ok(DecoderContext { lc, template, eps, delta, family, seed, g1_irreps, g2_irreps, distribution })
    }

    /// Exact law of `z` over `G2`.
    pub fn distribution(&self) -> &[Rational] {
        &self.distribution
    }

    /// `Φ^{G2}(A, B) = Pr[z = 1]`.
    pub fn value(&self) -> Rational {
        self.distribution[self.template.g2.identity()].clone()
    }

    pub fn threshold(&self) -> Rational {
        rational::ratio(1, self.template.h2.order() as i64) + &self.delta
    }

    pub fn promise_holds(&self) -> bool {
        self.value() >= self.threshold()
    }

    pub fn d_power(&self) -> PowerGroup {
        PowerGroup::new(self.template.g1.clone(), self.lc.num_d())
    }

    pub fn e_power(&self) -> PowerGroup {
        PowerGroup::new(self.template.g1.clone(), self.lc.num_e())
    }

    fn delta_f64(&self) -> f64 {
        rational::to_f64(&self.delta)
    }

    fn eps_f64(&self) -> f64 {
        rational::to_f64(&self.eps)
    }
}

/// Least `k ≥ 1` with `(1−ε)^k ≤ δ/4`, which is the ceiling of
/// `(log₂δ − 2)/log₂(1−ε)`, computed exactly.
pub fn kappa(delta: &Rational, eps: &Rational) -> Result<usize> {
    rational::check_open_unit("eps", eps)?;
    let four = rational::ratio(4, 1);
    if !delta.is_positive() || delta >= &four {
        return Err(Error::InvalidParams(format!("delta must lie in (0, 4), got {}", rational::format(delta))));
    }
    let target = delta / four;
    let base = Rational::one() - eps;
    let mut power = base.clone();
    let mut k = 1;
    while power > target {
        power *= &base;
        k += 1;
    }
    Ok(k)
}

/// Degrees never exceed `|D|`, so any `κ > |D|` keeps every term; larger
/// values are clamped to `|D| + 1`.
pub fn effective_kappa(k: usize, num_d: usize) -> usize {
    if k > num_d + 1 {
        warn!("kappa {k} exceeds |D| + 1 = {}; clamping (the truncation keeps every degree)", num_d + 1);
        num_d + 1
    } else {
        k
    }
}

/// `α = δ² / (4κ |G1|^κ |G2|⁴)`.
pub fn alpha(delta: &Rational, kappa: usize, g1_order: usize, g2_order: usize) -> Rational {
    let den = BigInt::from(4 * kappa) * BigInt::from(g1_order).pow(kappa as u32) * BigInt::from(g2_order).pow(4);
    delta * delta / Rational::from_integer(den)
}

/// `E[χ_ω(z)]` under the payoff law.
pub fn character_expectation(ctx: &DecoderContext, omega: usize) -> C64 {
    let chi = ctx.g2_irreps.get(omega).character();
    ctx.distribution.iter().zip(&chi).map(|(p, c)| c * rational::to_f64(p)).sum()
}

/// `|E[χ_ω(z)]| − dim_ω·δ − η_ω`.
pub fn penalized_margin(ctx: &DecoderContext, omega: usize) -> Result<f64> {
    let w = ctx.g2_irreps.get(omega);
    let eta = rep::eta(w, &ctx.template.h2)?;
    Ok(character_expectation(ctx, omega).norm() - w.dim() as f64 * ctx.delta_f64() - eta as f64)
}

/// `|Σ_ω dim_ω E[χ_ω(z)] − |G2|·Pr[z = 1]|`.
pub fn averaging_residual(ctx: &DecoderContext) -> f64 {
    let total: C64 = (0..ctx.g2_irreps.len())
        .map(|k| character_expectation(ctx, k) * ctx.g2_irreps.get(k).dim() as f64)
        .sum();
    let expected = ctx.template.g2.order() as f64 * rational::to_f64(&ctx.value());
    (total - C64::new(expected, 0.0)).norm()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaChoice {
    /// Index into the canonical irrep set of `G2`.
    pub index: usize,
    pub dim: usize,
    pub eta: usize,
    pub margin: f64,
    pub expectation: [f64; 2],
    /// `(x, y, z)`, filled by [`decode`].
    pub xyz: Option<[usize; 3]>,
}

/// The non-trivial `ω` with the largest penalized margin; ties keep the
/// earlier irrep.
pub fn select_omega(ctx: &DecoderContext) -> Result<OmegaChoice> {
    let mut best: Option<OmegaChoice> = None;
    for k in 1..ctx.g2_irreps.len() {
        let margin = penalized_margin(ctx, k)?;
        if best.as_ref().is_none_or(|b| margin > b.margin + 1e-12) {
            let w = ctx.g2_irreps.get(k);
            let e = character_expectation(ctx, k);
            best = Some(OmegaChoice {
                index: k,
                dim: w.dim(),
                eta: rep::eta(w, &ctx.template.h2)?,
                margin,
                expectation: [e.re, e.im],
                xyz: None,
            });
        }
    }
    match best {
        Some(b) if b.margin >= -1e-12 => Ok(b),
        _ => Err(Error::NoOmega),
    }
}

/// `𝒜(a) = ω((A_v)_φ(a))` over `G1^E`.
pub fn build_a(ctx: &DecoderContext, omega: usize, v: usize) -> Result<MatrixFn> {
    let w = ctx.g2_irreps.get(omega);
    let folded = fold(&ctx.family.a[v], &ctx.template.phi, ctx.lc.num_e());
    MatrixFn::new(ctx.e_power(), folded.iter().map(|&x| w.matrix(x).clone()).collect())
}

/// `ℬ(b) = ½(ω(B_u(b)) + ω(B_u(b⁻¹))*)` over `G1^D`.
pub fn build_b(ctx: &DecoderContext, omega: usize, u: usize) -> Result<MatrixFn> {
    let w = ctx.g2_irreps.get(omega);
    let power = ctx.d_power();
    let table = &ctx.family.b[u];
    MatrixFn::from_fn(power.clone(), |b| {
        let direct = w.matrix(table[power.encode(b)]);
        let flipped = w.matrix(table[power.encode(&power.inv(b))]).adjoint();
        (direct + flipped) * C64::new(0.5, 0.0)
    })
}

pub fn build_fns(ctx: &DecoderContext, omega: usize, v: usize, u: usize) -> Result<(MatrixFn, MatrixFn)> {
    Ok((build_a(ctx, omega, v)?, build_b(ctx, omega, u)?))
}

/// `max_g ‖ℬ(g⁻¹) − ℬ(g)*‖`.
pub fn skew_residual(b: &MatrixFn) -> f64 {
    let p = &b.power;
    (0..p.size())
        .map(|i| {
            let inv = p.encode(&p.inv(&p.decode(i)));
            max_abs(&(&b.values[inv] - b.values[i].adjoint()))
        })
        .fold(0.0, f64::max)
}

/// `(a∘π)⁻¹` as a `G1^D` index.
fn a_pi_inverse(ctx: &DecoderContext, pi: &[usize], a: &[usize]) -> Vec<usize> {
    pi.iter().map(|&e| ctx.template.g1.inv(a[e])).collect()
}

fn mean(f: &MatrixFn) -> CMatrix {
    let mut acc = CMatrix::zeros(f.n, f.n);
    for m in &f.values {
        acc += m;
    }
    acc / C64::new(f.values.len() as f64, 0.0)
}

fn noise_table(ctx: &DecoderContext) -> Vec<f64> {
    let g1 = &ctx.template.g1;
    let w: Vec<f64> = noise_weights(g1.order(), g1.identity(), &ctx.eps).iter().map(rational::to_f64).collect();
    let p = ctx.d_power();
    (0..p.size()).map(|i| p.decode(i).iter().map(|&x| w[x]).product()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TrivialTermReport {
    /// `|E_{uv,a,ν} tr(𝒜̂(1)·(ℬ*ℬ)((a∘π)⁻¹ν))|`.
    pub measured: f64,
    pub eta: usize,
    /// Largest deviation of `F = (1/|H2|) Σ_{h∈H2} ω(h)` from a Hermitian
    /// projection of trace `η`.
    pub projection_residual: f64,
}

impl TrivialTermReport {
    pub fn holds(&self) -> bool {
        self.measured <= self.eta as f64 + CONTRACT_TOL && self.projection_residual <= CONTRACT_TOL
    }
}

fn projection_residual(ctx: &DecoderContext, omega: usize, eta: usize) -> f64 {
    let w = ctx.g2_irreps.get(omega);
    let h2 = ctx.template.h2.members();
    let mut f = CMatrix::zeros(w.dim(), w.dim());
    for &h in h2 {
        f += w.matrix(h);
    }
    f /= C64::new(h2.len() as f64, 0.0);
    let hermitian = max_abs(&(&f - f.adjoint()));
    let eig = ((&f + f.adjoint()) * C64::new(0.5, 0.0)).symmetric_eigen();
    let spectral = eig.eigenvalues.iter().map(|l| l.abs().min((l - 1.0).abs())).fold(0.0, f64::max);
    let trace = (f.trace() - C64::new(eta as f64, 0.0)).norm();
    hermitian.max(spectral).max(trace)
}

pub fn trivial_term_bound(ctx: &DecoderContext, omega: usize) -> Result<TrivialTermReport> {
    let eta = rep::eta(ctx.g2_irreps.get(omega), &ctx.template.h2)?;
    let noise = noise_table(ctx);
    let (ep, dp) = (ctx.e_power(), ctx.d_power());
    let mut total = C64::new(0.0, 0.0);
    for edge in ctx.lc.edges() {
        let a0 = mean(&build_a(ctx, omega, edge.v)?);
        let b = build_b(ctx, omega, edge.u)?;
        let bb = convolve(&b, &b)?;
        let mut acc = C64::new(0.0, 0.0);
        for ai in 0..ep.size() {
            let x = a_pi_inverse(ctx, &edge.pi, &ep.decode(ai));
            for (ni, &wn) in noise.iter().enumerate() {
                let arg = dp.encode(&dp.mul(&x, &dp.decode(ni)));
                acc += (&a0 * &bb.values[arg]).trace() * wn;
            }
        }
        total += acc / ep.size() as f64;
    }
    let measured = (total / ctx.lc.edges().len() as f64).norm();
    Ok(TrivialTermReport { measured, eta, projection_residual: projection_residual(ctx, omega, eta) })
}

#[derive(Clone, Debug, Serialize)]
pub struct HighDegreeReport {
    pub kappa: usize,
    pub measured: f64,
    /// `dim_ω·δ/2`, the contract once `κ` meets the threshold.
    pub half_margin: f64,
    /// `2(1−ε)^κ dim_ω`, valid for every `κ`.
    pub smoothing_bound: f64,
    /// Smallest real part of `tr Σ_i (ℬ*ℬ)^(ρ_{i,i})` over all `ρ` and `u`.
    pub min_diagonal_trace: f64,
}

impl HighDegreeReport {
    pub fn holds(&self, at_threshold: bool) -> bool {
        let smooth = self.measured <= self.smoothing_bound + CONTRACT_TOL;
        let half = !at_threshold || self.measured <= self.half_margin + CONTRACT_TOL;
        smooth && half && self.min_diagonal_trace >= -CONTRACT_TOL
    }
}

/// The degree-`≥ κ` part of the smoothed expansion, paired with the
/// non-constant part of `𝒜`, averaged over edges and `a`.
pub fn high_degree_mass(ctx: &DecoderContext, omega: usize, kappa: usize) -> Result<HighDegreeReport> {
    let dim = ctx.g2_irreps.get(omega).dim();
    let (ep, dp) = (ctx.e_power(), ctx.d_power());
    let all = product_irreps(&ctx.g1_irreps, ctx.lc.num_d());
    let one_minus = 1.0 - ctx.eps_f64();
    let mut total = C64::new(0.0, 0.0);
    let mut min_diag = f64::INFINITY;
    for edge in ctx.lc.edges() {
        let a = build_a(ctx, omega, edge.v)?;
        let a0 = mean(&a);
        let b = build_b(ctx, omega, edge.u)?;
        let bb = convolve(&b, &b)?;
        let table = transform_on(&bb, all.clone())?;
        for (k, rho) in table.irreps.iter().enumerate() {
            let d = rho.dim();
            let diag: C64 = (0..d).map(|i| table.get(k, i, i).trace()).sum();
            min_diag = min_diag.min(diag.re);
        }
        let high: Vec<usize> = (0..table.irreps.len()).filter(|&k| table.irreps[k].degree() >= kappa).collect();
        let smoothed = MatrixFn::from_fn(dp.clone(), |x| {
            let mut acc = CMatrix::zeros(dim, dim);
            for &k in &high {
                let rho = &table.irreps[k];
                let scale = rho.dim() as f64 * one_minus.powi(rho.degree() as i32);
                for i in 0..rho.dim() {
                    for j in 0..rho.dim() {
                        acc += table.get(k, i, j) * (rho.entry(x, i, j) * scale);
                    }
                }
            }
            acc
        })?;
        let mut acc = C64::new(0.0, 0.0);
        for ai in 0..ep.size() {
            let x = a_pi_inverse(ctx, &edge.pi, &ep.decode(ai));
            acc += ((&a.values[ai] - &a0) * &smoothed.values[dp.encode(&x)]).trace();
        }
        total += acc / ep.size() as f64;
    }
    let measured = (total / ctx.lc.edges().len() as f64).norm();
    Ok(HighDegreeReport {
        kappa,
        measured,
        half_margin: dim as f64 * ctx.delta_f64() / 2.0,
        smoothing_bound: 2.0 * one_minus.powi(kappa as i32) * dim as f64,
        min_diagonal_trace: min_diag,
    })
}

/// Low-degree influence of every coordinate of `f`:
/// `Σ_{ρ: ρ^k ≠ 1, 0 < |ρ| < κ} Σ_{i,j} dim_ρ |f̂(ρ_{i,j})|² / |ρ|`.
pub fn influence_probs(f: &ScalarFn, set: &Arc<IrrepSet>, kappa: usize) -> Result<Vec<f64>> {
    let arity = f.power.arity();
    let low: Vec<_> = product_irreps(set, arity)
        .into_iter()
        .filter(|r| r.degree() > 0 && r.degree() < kappa)
        .collect();
    let table = transform_on(&f.to_matrix_fn(), low)?;
    let mut out = vec![0.0; arity];
    for (k, rho) in table.irreps.iter().enumerate() {
        let mass: f64 = table.coeffs[k].iter().map(|c| c[(0, 0)].norm_sqr()).sum::<f64>() * rho.dim() as f64
            / rho.degree() as f64;
        for (coord, &c) in rho.components().iter().enumerate() {
            if c != 0 {
                out[coord] += mass;
            }
        }
    }
    Ok(out)
}

/// What happens to probability mass a vertex does not place on any label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Leftover {
    /// The vertex stays unlabeled with the leftover probability.
    #[default]
    GiveUp,
    /// The map is rescaled to sum to one, or made uniform when it is zero.
    Normalize,
}

impl FromStr for Leftover {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "giveup" => Ok(Leftover::GiveUp),
            "normalize" => Ok(Leftover::Normalize),
            _ => Err(Error::InvalidParams(format!("unknown leftover rule {s:?}"))),
        }
    }
}

impl Leftover {
    fn apply(self, probs: &mut [f64]) {
        if self == Leftover::Normalize {
            let total: f64 = probs.iter().sum();
            if total > 0.0 {
                probs.iter_mut().for_each(|p| *p /= total);
            } else {
                let uniform = 1.0 / probs.len() as f64;
                probs.iter_mut().for_each(|p| *p = uniform);
            }
        }
    }
}

/// A randomized labeling: per-vertex sub-probability maps over labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Strategy {
    /// `Pr(v ↦ e)` for each right vertex.
    pub v_probs: Vec<Vec<f64>>,
    /// `Pr(u ↦ d)` for each left vertex.
    pub u_probs: Vec<Vec<f64>>,
    pub kappa: usize,
    pub leftover: Leftover,
}

impl Strategy {
    /// Largest per-vertex total, which must not exceed one.
    pub fn max_mass(&self) -> f64 {
        self.v_probs.iter().chain(&self.u_probs).map(|p| p.iter().sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_valid(&self) -> bool {
        self.v_probs.iter().chain(&self.u_probs).all(|p| p.iter().all(|&x| x >= 0.0))
            && self.max_mass() <= 1.0 + 1e-9
    }
}

/// `E_{uv}[Σ_d Pr(v ↦ π(d))·Pr(u ↦ d)]`.
pub fn expected_value(lc: &LabelCoverInstance, s: &Strategy) -> f64 {
    let total: f64 = lc
        .edges()
        .iter()
        .map(|e| (0..lc.num_d()).map(|d| s.v_probs[e.v][e.pi[d]] * s.u_probs[e.u][d]).sum::<f64>())
        .sum();
    total / lc.edges().len() as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct Decoded {
    pub omega: OmegaChoice,
    pub strategy: Strategy,
    pub expected_value: f64,
    /// `κ` from the formula, before clamping.
    pub kappa_formula: usize,
    pub kappa: usize,
    /// `α` at the formula's `κ`.
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    /// `α` at the clamped `κ`.
    #[serde(with = "rational::serde_str")]
    pub alpha_effective: Rational,
}

/// Runs the decoder, searching every `(x, y, z) ∈ N_ω³` for the best
/// truncated strategy.
pub fn decode(ctx: &DecoderContext, leftover: Leftover) -> Result<Decoded> {
    let mut omega = select_omega(ctx)?;
    let kappa_formula = kappa(&ctx.delta, &ctx.eps)?;
    let k = effective_kappa(kappa_formula, ctx.lc.num_d());
    let n = omega.dim;
    let set = &ctx.g1_irreps;

    let mut pv = Vec::with_capacity(ctx.lc.v_names().len());
    for v in 0..ctx.lc.v_names().len() {
        let a = build_a(ctx, omega.index, v)?;
        let mut per = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                per.push(influence_probs(&a.entry_fn(x, y), set, k)?);
            }
        }
        pv.push(per);
    }
    let mut pu = Vec::with_capacity(ctx.lc.u_names().len());
    for u in 0..ctx.lc.u_names().len() {
        let b = build_b(ctx, omega.index, u)?;
        let mut per = Vec::with_capacity(n * n);
        for y in 0..n {
            for z in 0..n {
                per.push(influence_probs(&b.entry_fn(y, z), set, k)?);
            }
        }
        pu.push(per);
    }

    let mut best: Option<(f64, [usize; 3], Strategy)> = None;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut strategy = Strategy {
                    v_probs: pv.iter().map(|per| per[x * n + y].clone()).collect(),
                    u_probs: pu.iter().map(|per| per[y * n + z].clone()).collect(),
                    kappa: k,
                    leftover,
                };
                strategy.v_probs.iter_mut().chain(strategy.u_probs.iter_mut()).for_each(|p| leftover.apply(p));
                let value = expected_value(&ctx.lc, &strategy);
                if best.as_ref().is_none_or(|(b, _, _)| value > *b + 1e-15) {
                    best = Some((value, [x, y, z], strategy));
                }
            }
        }
    }
    let (expected_value, xyz, strategy) = best.expect("omega has positive dimension");
    omega.xyz = Some(xyz);
    let (g1, g2) = (ctx.template.g1.order(), ctx.template.g2.order());
    Ok(Decoded {
        omega,
        strategy,
        expected_value,
        kappa_formula,
        kappa: k,
        alpha: alpha(&ctx.delta, kappa_formula, g1, g2),
        alpha_effective: alpha(&ctx.delta, k, g1, g2),
    })
}

/// Greedy rounding by conditional expectations: right vertices first, then
/// left vertices, each fixed to its best label (ties to the first label).
pub fn derandomize_strategy(lc: &LabelCoverInstance, s: &Strategy) -> (Vec<usize>, Vec<usize>, Rational) {
    let mut current = s.clone();
    let point = |len: usize, k: usize| (0..len).map(|i| if i == k { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
    let mut h_e = Vec::with_capacity(lc.v_names().len());
    for v in 0..lc.v_names().len() {
        let mut best = (f64::NEG_INFINITY, 0);
        for e in 0..lc.num_e() {
            current.v_probs[v] = point(lc.num_e(), e);
            let value = expected_value(lc, &current);
            if value > best.0 + 1e-15 {
                best = (value, e);
            }
        }
        current.v_probs[v] = point(lc.num_e(), best.1);
        h_e.push(best.1);
    }
    let mut h_d = Vec::with_capacity(lc.u_names().len());
    for u in 0..lc.u_names().len() {
        let mut best = (f64::NEG_INFINITY, 0);
        for d in 0..lc.num_d() {
            current.u_probs[u] = point(lc.num_d(), d);
            let value = expected_value(lc, &current);
            if value > best.0 + 1e-15 {
                best = (value, d);
            }
        }
        current.u_probs[u] = point(lc.num_d(), best.1);
        h_d.push(best.1);
    }
    let value = lc.value(&h_d, &h_e);
    (h_d, h_e, value)
}

fn draw(probs: &[f64], rng: &mut ChaCha8Rng) -> Option<usize> {
    let mut r: f64 = rng.random();
    for (k, &p) in probs.iter().enumerate() {
        if r < p {
            return Some(k);
        }
        r -= p;
    }
    None
}

/// Monte Carlo estimate of the strategy's value: each sample draws a full
/// labeling (unlabeled vertices fail their edges) and scores the fraction of
/// satisfied edges. Returns the mean and its standard error.
pub fn simulate_strategy(lc: &LabelCoverInstance, s: &Strategy, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let hv: Vec<Option<usize>> = s.v_probs.iter().map(|p| draw(p, &mut rng)).collect();
        let hu: Vec<Option<usize>> = s.u_probs.iter().map(|p| draw(p, &mut rng)).collect();
        let good = lc
            .edges()
            .iter()
            .filter(|e| matches!((hu[e.u], hv[e.v]), (Some(d), Some(x)) if e.pi[d] == x))
            .count();
        let value = good as f64 / lc.edges().len() as f64;
        sum += value;
        sum_sq += value * value;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// `true` when the simulation agrees with the analytic value within three
/// standard errors (or `1e-12` when the estimate has no spread).
pub fn simulation_agrees(analytic: f64, mean: f64, stderr: f64) -> bool {
    let diff = (analytic - mean).abs();
    if stderr == 0.0 {
        diff <= 1e-12
    } else {
        diff <= 3.0 * stderr
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::ratio;
    use crate::reduction::projection_family;

    fn planted_z2() -> DecoderContext {
        let lc = catalog::lc_one_edge();
        let t = catalog::template("id-Z2").unwrap();
        let fam = projection_family(&lc, &t, &[0], &[0], Side::G2);
        DecoderContext::new(lc, t, ratio(1, 8), ratio(1, 4), fam, 0).unwrap()
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(&ratio(1, 4), &ratio(1, 2)).unwrap(), 4);
        assert_eq!(kappa(&ratio(1, 2), &ratio(1, 2)).unwrap(), 3);
        assert_eq!(effective_kappa(4, 2), 3);
        assert_eq!(effective_kappa(2, 2), 2);
        assert!(kappa(&ratio(4, 1), &ratio(1, 2)).is_err());
        assert!(kappa(&ratio(1, 4), &ratio(1, 1)).is_err());
    }

    #[test]
    fn alpha_formula() {
        assert_eq!(alpha(&ratio(1, 4), 4, 2, 2), ratio(1, 65536));
    }

    #[test]
    fn planted_margin_and_omega() {
        let ctx = planted_z2();
        assert_eq!(ctx.value(), ratio(15, 16));
        let m = penalized_margin(&ctx, 1).unwrap();
        assert!((m - 5.0 / 8.0).abs() < 1e-12);
        assert!(penalized_margin(&ctx, 0).unwrap() < 0.0);
        let o = select_omega(&ctx).unwrap();
        assert_eq!((o.index, o.eta), (1, 0));
        assert!(averaging_residual(&ctx) < 1e-12);
    }

    #[test]
    fn planted_decode_recovers_the_labeling() {
        let ctx = planted_z2();
        let d = decode(&ctx, Leftover::GiveUp).unwrap();
        assert!((d.expected_value - 1.0).abs() < 1e-12);
        let (h_d, h_e, value) = derandomize_strategy(&ctx.lc, &d.strategy);
        assert_eq!((h_d, h_e, value), (vec![0], vec![0], ratio(1, 1)));
    }

    #[test]
    fn influence_edge_cases() {
        let set = Arc::new(rep::irreps(&Arc::new(catalog::cyclic(2)), 0, DEFAULT_TOL).unwrap());
        let power = PowerGroup::new(set.group().clone(), 2);
        let dictator = ScalarFn::from_fn(power.clone(), |g| C64::new(if g[1] == 0 { 1.0 } else { -1.0 }, 0.0)).unwrap();
        let p = influence_probs(&dictator, &set, 3).unwrap();
        assert!((p[1] - 1.0).abs() < 1e-12 && p[0].abs() < 1e-12);
        assert_eq!(influence_probs(&dictator, &set, 1).unwrap(), vec![0.0, 0.0]);
        let constant = ScalarFn::from_fn(power, |_| C64::new(1.0, 0.0)).unwrap();
        assert!(influence_probs(&constant, &set, 3).unwrap().iter().all(|&x| x.abs() < 1e-15));
    }

    #[test]
    fn leftover_rules() {
        let mut p = vec![0.0, 0.0];
        Leftover::Normalize.apply(&mut p);
        assert_eq!(p, vec![0.5, 0.5]);
        let mut q = vec![0.25, 0.25];
        Leftover::GiveUp.apply(&mut q);
        assert_eq!(q, vec![0.25, 0.25]);
        assert_eq!("normalize".parse::<Leftover>().unwrap(), Leftover::Normalize);
    }

    #[test]
    fn rejects_unreachable_promise() {
        let lc = catalog::lc_one_edge();
        let t = catalog::template("id-Z2").unwrap();
        let fam = projection_family(&lc, &t, &[0], &[0], Side::G2);
        let r = DecoderContext::new(lc, t, ratio(1, 2), ratio(1, 4), fam, 0);
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }

    /// Both sides play majority of three over `Z2`, which is already folded.
    fn majority_matching() -> DecoderContext {
        let lc = catalog::lc_matching();
        let t = catalog::template("id-Z2").unwrap();
        let p = PowerGroup::new(t.g1.clone(), 3);
        let maj: Vec<usize> = (0..p.size()).map(|i| usize::from(p.decode(i).iter().sum::<usize>() >= 2)).collect();
        let fam = AssignmentFamily { side: Side::G2, a: vec![maj.clone()], b: vec![maj] };
        DecoderContext::new(lc, t, ratio(1, 8), ratio(1, 16), fam, 0).unwrap()
    }

    #[test]
    fn majority_matching_value_and_strategy() {
        let ctx = majority_matching();
        assert_eq!(ctx.value(), ratio(5097, 8192));
        let d = decode(&ctx, Leftover::GiveUp).unwrap();
        for probs in d.strategy.v_probs.iter().chain(&d.strategy.u_probs) {
            assert!(probs.iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-12), "{probs:?}");
        }
        assert!((d.expected_value - 1.0 / 3.0).abs() < 1e-12);
        let (mean, stderr) = simulate_strategy(&ctx.lc, &d.strategy, 4000, 7);
        assert!(stderr > 0.0);
        assert!(simulation_agrees(d.expected_value, mean, stderr));
        assert_eq!(derandomize_strategy(&ctx.lc, &d.strategy).2, ratio(1, 1));
    }

    #[test]
    fn contracts_hold_on_fixtures() {
        for ctx in [planted_z2(), majority_matching()] {
            let o = select_omega(&ctx).unwrap();
            let t = trivial_term_bound(&ctx, o.index).unwrap();
            assert!(t.holds(), "{t:?}");
            for k in 1..=ctx.lc.num_d() + 1 {
                let h = high_degree_mass(&ctx, o.index, k).unwrap();
                assert!(h.holds(false), "{h:?}");
            }
            let b = build_b(&ctx, o.index, 0).unwrap();
            assert!(skew_residual(&b) < 1e-12);
        }
    }

    #[test]
    fn folded_constant_has_no_omega() {
        let lc = catalog::lc_one_edge();
        let t = catalog::template("id-Z2").unwrap();
        let fam = AssignmentFamily::constant(&lc, &t, Side::G2, 0);
        let ctx = DecoderContext::new(lc, t, ratio(1, 8), ratio(1, 4), fam, 0).unwrap();
        assert_eq!(ctx.value(), ratio(1, 2));
        assert!(!ctx.promise_holds());
        assert!(matches!(select_omega(&ctx), Err(Error::NoOmega)));
        assert!(matches!(decode(&ctx, Leftover::GiveUp), Err(Error::NoOmega)));
    }
}
