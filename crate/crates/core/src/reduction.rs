//! Label Cover instances and the weighted 3-LIN system built from them.
//!
//! For an edge `{u, v}` with projection `π`, tuples `a ∈ G1^E`, `b ∈ G1^D`,
//! a noise tuple `ν ∈ G1^D` and signs `s1, s2`, the system contains
//!
//! ```text
//! v_{a†} · u_{b^s1}^s1 · u_{c^s2}^s2 = g_a,   c = b⁻¹ (a∘π)⁻¹ ν,   a† = g_a·a
//! ```
//!
//! weighted by the probability of drawing that tuple. Weights are exact
//! rationals: for `ε = p/q` every tuple weight has the common denominator
//! `#edges · |G1|^(|E|+|D|) · (q·|G1|)^|D| · 4`.

use std::collections::HashMap;
use std::sync::Arc;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{coset_data, fold, FiniteGroup, Homomorphism, PowerGroup, Template};
use crate::rational::{self, Rational};

/// Default cap on the number of enumerated tuples.
pub const EXACT_CAP: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// `π: D → E` as label indices.
    pub pi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelCoverInstance {
    d_labels: Vec<String>,
    e_labels: Vec<String>,
    u_names: Vec<String>,
    v_names: Vec<String>,
    edges: Vec<Edge>,
}

impl LabelCoverInstance {
    pub fn new(
        d_labels: Vec<String>,
        e_labels: Vec<String>,
        u_names: Vec<String>,
        v_names: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        if d_labels.is_empty() || e_labels.is_empty() {
            return Err(Error::Invalid("label sets must be non-empty".into()));
        }
        if let Some(l) = d_labels.iter().find(|l| e_labels.contains(l)) {
            return Err(Error::Invalid(format!("label {l:?} appears in both D and E")));
        }
        if edges.is_empty() {
            return Err(Error::Invalid("a Label Cover instance needs at least one edge".into()));
        }
        for (k, e) in edges.iter().enumerate() {
            if e.u >= u_names.len() || e.v >= v_names.len() {
                return Err(Error::Invalid(format!("edge {k} has an endpoint out of range")));
            }
            if e.pi.len() != d_labels.len() || e.pi.iter().any(|&x| x >= e_labels.len()) {
                return Err(Error::Invalid(format!("edge {k}: projection must be total from D to E")));
            }
        }
        Ok(LabelCoverInstance { d_labels, e_labels, u_names, v_names, edges })
    }

    pub fn d_labels(&self) -> &[String] {
        &self.d_labels
    }

    pub fn e_labels(&self) -> &[String] {
        &self.e_labels
    }

    pub fn u_names(&self) -> &[String] {
        &self.u_names
    }

    pub fn v_names(&self) -> &[String] {
        &self.v_names
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_d(&self) -> usize {
        self.d_labels.len()
    }

    pub fn num_e(&self) -> usize {
        self.e_labels.len()
    }

    /// Fraction of edges with `π_uv(hD(u)) = hE(v)`.
    pub fn value(&self, h_d: &[usize], h_e: &[usize]) -> Rational {
        let good = self.edges.iter().filter(|e| e.pi[h_d[e.u]] == h_e[e.v]).count();
        rational::ratio(good as i64, self.edges.len() as i64)
    }
}

/// Fraction of satisfied edges under the labelings `hD: U → D`, `hE: V → E`.
pub fn lc_value(lc: &LabelCoverInstance, h_d: &[usize], h_e: &[usize]) -> Rational {
    lc.value(h_d, h_e)
}

/// `x^i · y^j · z^k = rhs` with `rhs ∈ Dom(φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinEquation {
    pub terms: [(usize, i8); 3],
    pub rhs: usize,
    pub weight: Rational,
}

/// Which group an assignment takes values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    G1,
    G2,
}

impl Side {
    pub fn group(self, t: &Template) -> &Arc<FiniteGroup> {
        match self {
            Side::G1 => &t.g1,
            Side::G2 => &t.g2,
        }
    }

    /// Constants are read literally in `G1` and through `φ` in `G2`.
    pub fn constant(self, t: &Template, rhs: usize) -> usize {
        match self {
            Side::G1 => rhs,
            Side::G2 => t.phi.apply(rhs),
        }
    }

    /// The subgroup random assignments draw from: `H1` or `H2`.
    pub fn subgroup(self, t: &Template) -> &crate::group::Subgroup {
        match self {
            Side::G1 => &t.h1,
            Side::G2 => &t.h2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinSystem {
    pub template: Template,
    pub variables: Vec<String>,
    pub equations: Vec<LinEquation>,
}

impl LinSystem {
    /// Checks every term and constant, then requires non-negative weights
    /// summing to exactly one.
    pub fn new(template: Template, variables: Vec<String>, equations: Vec<LinEquation>) -> Result<Self> {
        let mut total = Rational::zero();
        for (k, eq) in equations.iter().enumerate() {
            for &(x, s) in &eq.terms {
                if x >= variables.len() {
                    return Err(Error::Invalid(format!("equation {k} references unknown variable {x}")));
                }
                if s != 1 && s != -1 {
                    return Err(Error::Invalid(format!("equation {k} has exponent {s}")));
                }
            }
            if !template.h1.contains(eq.rhs) {
                return Err(Error::Invalid(format!("equation {k}: constant {} lies outside Dom(phi)", eq.rhs)));
            }
            if eq.weight.is_negative() {
                return Err(Error::Invalid(format!("equation {k} has a negative weight")));
            }
            total += &eq.weight;
        }
        if !total.is_one() {
            return Err(Error::Invalid(format!("weights sum to {}, not 1", rational::format(&total))));
        }
        Ok(LinSystem { template, variables, equations })
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Resolves a by-name assignment into one value per variable.
    pub fn assignment_from_names(&self, named: &HashMap<String, usize>) -> Result<Vec<usize>> {
        self.variables
            .iter()
            .map(|v| named.get(v).copied().ok_or_else(|| Error::MissingVariable(v.clone())))
            .collect()
    }
}

/// `x^i y^j z^k` under `values`, in the group of `side`.
pub fn equation_lhs(g: &FiniteGroup, eq: &LinEquation, values: &[usize]) -> usize {
    eq.terms.iter().fold(g.identity(), |acc, &(x, s)| g.mul(acc, g.signed(values[x], s)))
}

pub fn is_satisfied(system: &LinSystem, eq: &LinEquation, values: &[usize], side: Side) -> bool {
    let g = side.group(&system.template);
    equation_lhs(g, eq, values) == side.constant(&system.template, eq.rhs)
}

/// Total weight of satisfied equations.
pub fn evaluate(system: &LinSystem, values: &[usize], side: Side) -> Result<Rational> {
    if values.len() < system.variables.len() {
        return Err(Error::MissingVariable(system.variables[values.len()].clone()));
    }
    let order = side.group(&system.template).order();
    if let Some(&bad) = values.iter().find(|&&x| x >= order) {
        return Err(Error::Invalid(format!("assigned value {bad} is not a group element")));
    }
    Ok(system
        .equations
        .iter()
        .filter(|eq| is_satisfied(system, eq, values, side))
        .map(|eq| eq.weight.clone())
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct ReductionParams {
    pub eps: Rational,
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
}

impl ReductionParams {
    pub fn exact(eps: Rational) -> Self {
        ReductionParams { eps, mode: Mode::Exact, samples: 0, seed: 0 }
    }

    pub fn sampled(eps: Rational, samples: usize, seed: u64) -> Self {
        ReductionParams { eps, mode: Mode::Sampled, samples, seed }
    }
}

/// Variable layout: all `u_b` (per left vertex, tuples row-major), then all `v_a`.
#[derive(Clone, Debug)]
pub struct VariableLayout {
    pub d_power: PowerGroup,
    pub e_power: PowerGroup,
    pub num_u: usize,
    pub num_v: usize,
}

impl VariableLayout {
    pub fn new(lc: &LabelCoverInstance, g1: &Arc<FiniteGroup>) -> Self {
        VariableLayout {
            d_power: PowerGroup::new(g1.clone(), lc.num_d()),
            e_power: PowerGroup::new(g1.clone(), lc.num_e()),
            num_u: lc.u_names().len(),
            num_v: lc.v_names().len(),
        }
    }

    pub fn u_var(&self, u: usize, b: usize) -> usize {
        u * self.d_power.size() + b
    }

    pub fn v_var(&self, v: usize, a: usize) -> usize {
        self.num_u * self.d_power.size() + v * self.e_power.size() + a
    }

    pub fn len(&self) -> usize {
        self.num_u * self.d_power.size() + self.num_v * self.e_power.size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self, lc: &LabelCoverInstance) -> Vec<String> {
        let coords = |p: &PowerGroup, i: usize| {
            p.decode(i).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
        };
        let mut names = Vec::with_capacity(self.len());
        for u in lc.u_names() {
            names.extend((0..self.d_power.size()).map(|b| format!("u:{u}:{}", coords(&self.d_power, b))));
        }
        for v in lc.v_names() {
            names.extend((0..self.e_power.size()).map(|a| format!("v:{v}:{}", coords(&self.e_power, a))));
        }
        names
    }
}

/// Integer form of the tuple weights: `weight = edge_factor · noise[ν] / denominator`
/// where the edge, `a`, `b` and sign factors are uniform.
struct NoiseNumerators {
    per_nu: Vec<u128>,
    denominator: BigInt,
}

fn noise_numerators(lc: &LabelCoverInstance, g1: &FiniteGroup, eps: &Rational) -> Result<NoiseNumerators> {
    rational::check_open_unit("eps", eps)?;
    let (p, q) = (eps.numer().to_u128(), eps.denom().to_u128());
    let (Some(p), Some(q)) = (p, q) else {
        return Err(Error::InvalidParams("eps has an oversized numerator or denominator".into()));
    };
    let n = g1.order() as u128;
    let overflow = || Error::InvalidParams("eps denominator too large for exact enumeration".into());
    let at_identity = (q - p).checked_mul(n).and_then(|x| x.checked_add(p)).ok_or_else(overflow)?;
    let d_power = PowerGroup::new(Arc::new(g1.clone()), lc.num_d());
    let mut per_nu = Vec::with_capacity(d_power.size());
    for idx in 0..d_power.size() {
        let mut w: u128 = 1;
        for &x in &d_power.decode(idx) {
            let factor = if x == g1.identity() { at_identity } else { p };
            w = w.checked_mul(factor).ok_or_else(overflow)?;
        }
        per_nu.push(w);
    }
    let nd = lc.num_d() as u32;
    let denominator = BigInt::from(lc.edges().len())
        * BigInt::from(n).pow(lc.num_e() as u32 + nd)
        * BigInt::from(q * n).pow(nd)
        * BigInt::from(4u8);
    Ok(NoiseNumerators { per_nu, denominator })
}

/// Number of enumerated tuples: `#edges · |G1|^(|E|+2|D|) · 4`.
pub fn tuple_count(lc: &LabelCoverInstance, g1: &FiniteGroup) -> u128 {
    let n = g1.order() as u128;
    let exp = (lc.num_e() + 2 * lc.num_d()) as u32;
    n.checked_pow(exp)
        .and_then(|x| x.checked_mul(4 * lc.edges().len() as u128))
        .unwrap_or(u128::MAX)
}

fn check_cap(lc: &LabelCoverInstance, g1: &FiniteGroup) -> Result<()> {
    let cap = crate::cap(EXACT_CAP);
    let required = tuple_count(lc, g1);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    Ok(())
}

/// Exact probability of a single tuple under the sampling law.
pub fn tuple_weight(lc: &LabelCoverInstance, g1: &FiniteGroup, eps: &Rational, nu: &[usize]) -> Result<Rational> {
    let w = noise_numerators(lc, g1, eps)?;
    let power = PowerGroup::new(Arc::new(g1.clone()), lc.num_d());
    Ok(Rational::new(BigInt::from(w.per_nu[power.encode(nu)]), w.denominator))
}

/// One drawn tuple of the sampling procedure.
#[derive(Clone, Debug)]
pub struct Tuple {
    pub edge: usize,
    pub a: usize,
    pub b: usize,
    pub nu: usize,
    pub s1: i8,
    pub s2: i8,
}

/// `(c, a∘π)` for a tuple: `c = b⁻¹ (a∘π)⁻¹ ν`.
fn c_tuple(layout: &VariableLayout, pi: &[usize], a: &[usize], b: &[usize], nu: &[usize]) -> Vec<usize> {
    let p = &layout.d_power;
    let a_pi: Vec<usize> = pi.iter().map(|&e| a[e]).collect();
    p.mul(&p.mul(&p.inv(b), &p.inv(&a_pi)), nu)
}

/// The equation emitted for a tuple, with unit weight.
pub fn tuple_equation(lc: &LabelCoverInstance, template: &Template, layout: &VariableLayout, t: &Tuple) -> LinEquation {
    let edge = &lc.edges()[t.edge];
    let (dp, ep) = (&layout.d_power, &layout.e_power);
    let a = ep.decode(t.a);
    let b = dp.decode(t.b);
    let nu = dp.decode(t.nu);
    let c = c_tuple(layout, &edge.pi, &a, &b, &nu);
    let (a_dagger, g_a) = coset_data(&template.h1, &a);
    let b_s = dp.signed(&b, t.s1);
    let c_s = dp.signed(&c, t.s2);
    LinEquation {
        terms: [
            (layout.v_var(edge.v, ep.encode(&a_dagger)), 1),
            (layout.u_var(edge.u, dp.encode(&b_s)), t.s1),
            (layout.u_var(edge.u, dp.encode(&c_s)), t.s2),
        ],
        rhs: g_a,
        weight: Rational::one(),
    }
}

/// Adds a weight to the equation keyed by `(terms, rhs)`, keeping first-seen order.
struct Merger<W> {
    index: HashMap<([(usize, i8); 3], usize), usize>,
    entries: Vec<([(usize, i8); 3], usize, W)>,
}

impl<W: std::ops::AddAssign> Merger<W> {
    fn new() -> Self {
        Merger { index: HashMap::new(), entries: Vec::new() }
    }

    fn add(&mut self, terms: [(usize, i8); 3], rhs: usize, w: W) {
        match self.index.get(&(terms, rhs)) {
            Some(&k) => self.entries[k].2 += w,
            None => {
                self.index.insert((terms, rhs), self.entries.len());
                self.entries.push((terms, rhs, w));
            }
        }
    }
}

const SIGNS: [i8; 2] = [1, -1];

/// Builds the weighted system, exactly or by seeded sampling.
pub fn build_system(lc: &LabelCoverInstance, template: &Template, params: &ReductionParams) -> Result<LinSystem> {
    rational::check_open_unit("eps", &params.eps)?;
    let layout = VariableLayout::new(lc, &template.g1);
    let equations = match params.mode {
        Mode::Exact => {
            check_cap(lc, &template.g1)?;
            let w = noise_numerators(lc, &template.g1, &params.eps)?;
            let mut merger: Merger<u128> = Merger::new();
            for edge in 0..lc.edges().len() {
                for a in 0..layout.e_power.size() {
                    for b in 0..layout.d_power.size() {
                        for (nu, &wn) in w.per_nu.iter().enumerate() {
                            for s1 in SIGNS {
                                for s2 in SIGNS {
                                    let t = Tuple { edge, a, b, nu, s1, s2 };
                                    let eq = tuple_equation(lc, template, &layout, &t);
                                    merger.add(eq.terms, eq.rhs, wn);
                                }
                            }
                        }
                    }
                }
            }
            merger
                .entries
                .into_iter()
                .map(|(terms, rhs, n)| LinEquation {
                    terms,
                    rhs,
                    weight: Rational::new(BigInt::from(n), w.denominator.clone()),
                })
                .collect()
        }
        Mode::Sampled => {
            if params.samples == 0 {
                return Err(Error::InvalidParams("sampled mode needs at least one sample".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            let mut merger: Merger<u64> = Merger::new();
            for _ in 0..params.samples {
                let t = sample_tuple(lc, &template.g1, &layout, &params.eps, &mut rng);
                let eq = tuple_equation(lc, template, &layout, &t);
                merger.add(eq.terms, eq.rhs, 1);
            }
            merger
                .entries
                .into_iter()
                .map(|(terms, rhs, n)| LinEquation {
                    terms,
                    rhs,
                    weight: rational::ratio(n as i64, params.samples as i64),
                })
                .collect()
        }
    };
    LinSystem::new(template.clone(), layout.names(lc), equations)
}

/// Draws one tuple from the sampling law.
pub fn sample_tuple(
    lc: &LabelCoverInstance,
    g1: &FiniteGroup,
    layout: &VariableLayout,
    eps: &Rational,
    rng: &mut ChaCha8Rng,
) -> Tuple {
    let eps = rational::to_f64(eps);
    let edge = rng.random_range(0..lc.edges().len());
    let a = rng.random_range(0..layout.e_power.size());
    let b = rng.random_range(0..layout.d_power.size());
    let nu: Vec<usize> = (0..lc.num_d())
        .map(|_| if rng.random_bool(eps) { rng.random_range(0..g1.order()) } else { g1.identity() })
        .collect();
    let sign = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { 1 } else { -1 };
    let s1 = sign(rng);
    let s2 = sign(rng);
    Tuple { edge, a, b, nu: layout.d_power.encode(&nu), s1, s2 }
}

/// Assignments described by families of maps: `A_v: G1^E → G_t` and
/// `B_u: G1^D → G_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentFamily {
    pub side: Side,
    pub a: Vec<Vec<usize>>,
    pub b: Vec<Vec<usize>>,
}

impl AssignmentFamily {
    pub fn validate(&self, lc: &LabelCoverInstance, template: &Template) -> Result<()> {
        let layout = VariableLayout::new(lc, &template.g1);
        let order = self.side.group(template).order();
        let ok = |tables: &[Vec<usize>], count: usize, size: usize| {
            tables.len() == count && tables.iter().all(|t| t.len() == size && t.iter().all(|&x| x < order))
        };
        if !ok(&self.a, layout.num_v, layout.e_power.size()) || !ok(&self.b, layout.num_u, layout.d_power.size()) {
            return Err(Error::DimensionMismatch("family tables do not match the instance".into()));
        }
        Ok(())
    }

    /// The assignment `h` with `h(v_a) = A_v(a)` and `h(u_b) = B_u(b)`.
    pub fn to_assignment(&self, lc: &LabelCoverInstance, template: &Template) -> Vec<usize> {
        let layout = VariableLayout::new(lc, &template.g1);
        let mut out = vec![0; layout.len()];
        for (u, table) in self.b.iter().enumerate() {
            for (b, &x) in table.iter().enumerate() {
                out[layout.u_var(u, b)] = x;
            }
        }
        for (v, table) in self.a.iter().enumerate() {
            for (a, &x) in table.iter().enumerate() {
                out[layout.v_var(v, a)] = x;
            }
        }
        out
    }

    /// Constant family with every table equal to `value`.
    pub fn constant(lc: &LabelCoverInstance, template: &Template, side: Side, value: usize) -> Self {
        let layout = VariableLayout::new(lc, &template.g1);
        AssignmentFamily {
            side,
            a: vec![vec![value; layout.e_power.size()]; layout.num_v],
            b: vec![vec![value; layout.d_power.size()]; layout.num_u],
        }
    }
}

/// Dictator family from a Label Cover labeling: `A_v(a) = a(hE(v))`,
/// `B_u(b) = b(hD(u))`, mapped through the extension witness on side `G2`.
pub fn projection_family(
    lc: &LabelCoverInstance,
    template: &Template,
    h_d: &[usize],
    h_e: &[usize],
    side: Side,
) -> AssignmentFamily {
    let layout = VariableLayout::new(lc, &template.g1);
    let map = |x: usize| match side {
        Side::G1 => x,
        Side::G2 => template.extension_witness[x],
    };
    let a = h_e
        .iter()
        .map(|&e| (0..layout.e_power.size()).map(|i| map(layout.e_power.decode(i)[e])).collect())
        .collect();
    let b = h_d
        .iter()
        .map(|&d| (0..layout.d_power.size()).map(|i| map(layout.d_power.decode(i)[d])).collect())
        .collect();
    AssignmentFamily { side, a, b }
}

/// The homomorphism tables `A_v` are folded over: `id_{H1}` on side `G1`, `φ` on side `G2`.
pub fn folding_map(template: &Template, side: Side) -> Homomorphism {
    match side {
        Side::G1 => Homomorphism::identity_on(&template.h1),
        Side::G2 => template.phi.clone(),
    }
}

/// Exact law of `z = (A_v)_fold(a) · B_u(b^s1)^s1 · B_u(c^s2)^s2` under the
/// sampling procedure, as one probability per element of the side's group.
pub fn payoff_distribution(
    lc: &LabelCoverInstance,
    template: &Template,
    eps: &Rational,
    family: &AssignmentFamily,
) -> Result<Vec<Rational>> {
    family.validate(lc, template)?;
    check_cap(lc, &template.g1)?;
    let side = family.side;
    let g = side.group(template).clone();
    let layout = VariableLayout::new(lc, &template.g1);
    let w = noise_numerators(lc, &template.g1, eps)?;
    let phi = folding_map(template, side);
    let folded: Vec<Vec<usize>> = family.a.iter().map(|t| fold(t, &phi, lc.num_e())).collect();
    let dp = &layout.d_power;
    let mut counts = vec![0u128; g.order()];
    let overflow = || Error::InvalidParams("payoff accumulation overflowed".into());
    for edge in lc.edges() {
        let bu = &family.b[edge.u];
        let av = &folded[edge.v];
        for a_idx in 0..layout.e_power.size() {
            let a = layout.e_power.decode(a_idx);
            for b_idx in 0..dp.size() {
                let b = dp.decode(b_idx);
                for (nu_idx, &wn) in w.per_nu.iter().enumerate() {
                    let nu = dp.decode(nu_idx);
                    let c = c_tuple(&layout, &edge.pi, &a, &b, &nu);
                    for s1 in SIGNS {
                        let left = g.mul(av[a_idx], g.signed(bu[dp.encode(&dp.signed(&b, s1))], s1));
                        for s2 in SIGNS {
                            let z = g.mul(left, g.signed(bu[dp.encode(&dp.signed(&c, s2))], s2));
                            counts[z] = counts[z].checked_add(wn).ok_or_else(overflow)?;
                        }
                    }
                }
            }
        }
    }
    Ok(counts.into_iter().map(|n| Rational::new(BigInt::from(n), w.denominator.clone())).collect())
}

/// `Φ^{G_t}(A, B)` by direct enumeration of the sampling law.
pub fn evaluate_family(
    lc: &LabelCoverInstance,
    template: &Template,
    params: &ReductionParams,
    family: &AssignmentFamily,
) -> Result<Rational> {
    let dist = payoff_distribution(lc, template, &params.eps, family)?;
    Ok(dist[family.side.group(template).identity()].clone())
}

/// Exact value of the planted dictator family: `Pr[ψ(ν_d) = 1]` where `ψ`
/// is the identity on side `G1` and the extension witness on side `G2`.
pub fn planted_value(template: &Template, eps: &Rational, side: Side) -> Rational {
    let n = template.g1.order() as i64;
    let kernel = match side {
        Side::G1 => 1,
        Side::G2 => template.extension_witness.iter().filter(|&&x| x == template.g2.identity()).count() as i64,
    };
    Rational::one() - eps + eps * rational::ratio(kernel, n)
}
