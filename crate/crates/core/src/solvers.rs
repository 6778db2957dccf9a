//! Max-3-LIN solvers over a template. The baseline is the exact value of a
//! uniformly random assignment over `H`, derandomized by conditional
//! expectations. Exhaustive search and the non-cubic accept/reject rule
//! complete the set.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Template;
use crate::rational::{self, Rational};
use crate::reduction::{equation_lhs, evaluate, LinEquation, LinSystem, Side};

/// Default cap on `|G|^|X|` for exhaustive search.
pub const BRUTE_FORCE_CAP: u128 = 1 << 22;

/// Exhaustive maximum over all assignments into the side's group. Returns the
/// first optimum in lexicographic order (first variable most significant).
pub fn brute_force_opt(system: &LinSystem, side: Side, cap: u128) -> Result<(Rational, Vec<usize>)> {
    let g = side.group(&system.template);
    let n = g.order() as u128;
    let vars = system.variables.len();
    let required = n.checked_pow(vars as u32).unwrap_or(u128::MAX);
    let cap = crate::cap(cap);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let mut current = vec![0usize; vars];
    let mut best = (evaluate(system, &current, side)?, current.clone());
    for _ in 1..required {
        // Odometer increment, last variable fastest.
        for slot in current.iter_mut().rev() {
            *slot += 1;
            if *slot < g.order() {
                break;
            }
            *slot = 0;
        }
        let value = evaluate(system, &current, side)?;
        if value > best.0 {
            best = (value, current.clone());
        }
    }
    Ok(best)
}

/// Probability that `eq` holds when the unfixed variables are independent
/// uniform on the side's subgroup and the rest are as in `partial`.
fn conditional_probability(system: &LinSystem, eq: &LinEquation, partial: &[Option<usize>], side: Side) -> Rational {
    let t = &system.template;
    let g = side.group(t);
    let h = side.subgroup(t).members();
    let target = side.constant(t, eq.rhs);
    let mut free: Vec<usize> = eq.terms.iter().map(|&(x, _)| x).filter(|&x| partial[x].is_none()).collect();
    free.sort_unstable();
    free.dedup();
    let cases = h.len().pow(free.len() as u32);
    let mut values = vec![0usize; system.variables.len()];
    for &(x, _) in &eq.terms {
        if let Some(v) = partial[x] {
            values[x] = v;
        }
    }
    let mut hits = 0usize;
    for mut case in 0..cases {
        for &x in &free {
            values[x] = h[case % h.len()];
            case /= h.len();
        }
        if equation_lhs(g, eq, &values) == target {
            hits += 1;
        }
    }
    rational::ratio(hits as i64, cases as i64)
}

/// Exact expected satisfied weight of a uniformly random assignment over `H1`
/// (side `G1`) or `H2` (side `G2`).
pub fn random_expectation(system: &LinSystem, side: Side) -> Rational {
    let partial = vec![None; system.variables.len()];
    system
        .equations
        .iter()
        .map(|eq| &eq.weight * conditional_probability(system, eq, &partial, side))
        .sum()
}

/// Fixes variables in order, each to the element of `H` maximizing the exact
/// conditional expectation; ties go to the smallest element index.
pub fn derandomize(system: &LinSystem, side: Side) -> (Vec<usize>, Rational) {
    let h = side.subgroup(&system.template).members().to_vec();
    let nvars = system.variables.len();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); nvars];
    for (k, eq) in system.equations.iter().enumerate() {
        for &(x, _) in &eq.terms {
            if touching[x].last() != Some(&k) {
                touching[x].push(k);
            }
        }
    }
    let mut partial: Vec<Option<usize>> = vec![None; nvars];
    for x in 0..nvars {
        let mut best: Option<(Rational, usize)> = None;
        for &candidate in &h {
            partial[x] = Some(candidate);
            let score: Rational = touching[x]
                .iter()
                .map(|&k| {
                    let eq = &system.equations[k];
                    &eq.weight * conditional_probability(system, eq, &partial, side)
                })
                .sum();
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, candidate));
            }
        }
        partial[x] = best.map(|(_, c)| c);
    }
    let assignment: Vec<usize> = partial.into_iter().map(|v| v.expect("every variable fixed")).collect();
    let value = evaluate(system, &assignment, side).expect("assignment is total");
    (assignment, value)
}

/// Total weight of equations `x^3 = h` or `x^-3 = h` with no solution.
pub fn unsatisfiable_weight(system: &LinSystem) -> Rational {
    system
        .equations
        .iter()
        .filter(|eq| system.template.is_unsatisfiable_equation(eq))
        .map(|eq| eq.weight.clone())
        .sum()
}

/// A seeded random system with uniform terms. Integer weights in `1..=8` are
/// normalized to sum to one.
pub fn random_system(template: &Template, variables: usize, equations: usize, seed: u64) -> LinSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h1 = template.h1.members();
    let raw: Vec<([(usize, i8); 3], usize, i64)> = (0..equations)
        .map(|_| {
            let mut term = || (rng.random_range(0..variables), if rng.random_bool(0.5) { 1 } else { -1 });
            let terms = [term(), term(), term()];
            (terms, h1[rng.random_range(0..h1.len())], rng.random_range(1..=8))
        })
        .collect();
    let total: i64 = raw.iter().map(|r| r.2).sum();
    let eqs = raw
        .into_iter()
        .map(|(terms, rhs, w)| LinEquation { terms, rhs, weight: rational::ratio(w, total) })
        .collect();
    let names = (0..variables).map(|i| format!("x{i}")).collect();
    LinSystem::new(template.clone(), names, eqs).expect("random system is well formed")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum NonCubicOutcome {
    Reject {
        #[serde(with = "rational::serde_str")]
        unsat_weight: Rational,
    },
    Accept {
        assignment: Vec<usize>,
        #[serde(with = "rational::serde_str")]
        value: Rational,
        #[serde(with = "rational::serde_str")]
        unsat_weight: Rational,
    },
}

/// Rejects when the unsatisfiable weight exceeds `1 − c`, which no
/// `c`-satisfiable system over `G1` can have; otherwise returns the
/// derandomized assignment over `H2`.
pub fn non_cubic_solve(system: &LinSystem, c: &Rational) -> Result<NonCubicOutcome> {
    if c.is_zero() || *c > Rational::from_integer(1.into()) || c < &Rational::zero() {
        return Err(Error::InvalidParams(format!("c must lie in (0, 1], got {}", rational::format(c))));
    }
    let unsat_weight = unsatisfiable_weight(system);
    if unsat_weight > Rational::from_integer(1.into()) - c {
        return Ok(NonCubicOutcome::Reject { unsat_weight });
    }
    let (assignment, value) = derandomize(system, Side::G2);
    Ok(NonCubicOutcome::Accept { assignment, value, unsat_weight })
}
