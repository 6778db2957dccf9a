//! Unitary representations of finite groups. The irreducibles come from
//! decomposing the right-regular representation; the coset representation
//! gives the trivial-multiplicity penalty `η`.

use std::cmp::Ordering;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Default numerical tolerance for representation identities.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Distance to the nearest integer accepted when snapping multiplicities.
pub const INTEGER_GUARD: f64 = 1e-6;
const MAX_ATTEMPTS: usize = 8;

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A matrix representation `γ: G → U(N)`, one matrix per group element.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: Arc<FiniteGroup>,
    matrices: Vec<CMatrix>,
}

impl UnitaryRep {
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let dim = matrices[0].nrows();
        if dim == 0 || matrices.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::DimensionMismatch("representation matrices must be square of equal size".into()));
        }
        Ok(UnitaryRep { group, matrices })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let matrices = vec![CMatrix::identity(1, 1); group.order()];
        UnitaryRep { group, matrices }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    #[inline]
    pub fn entry(&self, g: usize, i: usize, j: usize) -> C64 {
        self.matrices[g][(i, j)]
    }

    /// `χ(g) = tr γ(g)`.
    pub fn character(&self) -> Vec<C64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    /// `max_{g,h} ‖γ(g)γ(h) − γ(gh)‖_max`.
    pub fn homomorphism_residual(&self) -> f64 {
        let n = self.group.order();
        let mut worst: f64 = 0.0;
        for g in 0..n {
            for h in 0..n {
                let diff = &self.matrices[g] * &self.matrices[h] - &self.matrices[self.group.mul(g, h)];
                worst = worst.max(max_abs(&diff));
            }
        }
        worst
    }

    /// `max_g ‖γ(g)γ(g)* − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = CMatrix::identity(self.dim(), self.dim());
        self.matrices.iter().map(|m| max_abs(&(m * m.adjoint() - &id))).fold(0.0, f64::max)
    }

    /// True when the character is identically one.
    pub fn is_trivial(&self, tol: f64) -> bool {
        self.dim() == 1 && self.character().iter().all(|c| (c - C64::new(1.0, 0.0)).norm() <= tol)
    }
}

/// `⟨a, b⟩ = (1/|G|) Σ_g a(g)·conj(b(g))`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    let n = a.len() as f64;
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<C64>() / n
}

fn snap(value: C64) -> Result<usize> {
    let r = value.re.round();
    if (value.re - r).abs() > INTEGER_GUARD || value.im.abs() > INTEGER_GUARD || r < 0.0 {
        return Err(Error::NonIntegerMultiplicity(value.re));
    }
    Ok(r as usize)
}

/// Multiplicity of the irreducible `rho` in `gamma`: `round ⟨χ_ρ, χ_γ⟩`.
pub fn multiplicity(rho: &UnitaryRep, gamma: &UnitaryRep) -> Result<usize> {
    if rho.group().as_ref() != gamma.group().as_ref() {
        return Err(Error::DimensionMismatch("representations of different groups".into()));
    }
    snap(inner(&rho.character(), &gamma.character()))
}

/// Restriction to a subgroup, as a representation of `h.to_group()`.
pub fn restrict(rho: &UnitaryRep, h: &Subgroup) -> UnitaryRep {
    let (sub, embedding) = h.to_group();
    let matrices = embedding.iter().map(|&g| rho.matrix(g).clone()).collect();
    UnitaryRep { group: Arc::new(sub), matrices }
}

/// Permutation representation on the right cosets `H\G`: the entry
/// `(Hg1, Hg2)` of `R(g)` is one iff `Hg1 = Hg2·g⁻¹`.
pub fn right_regular(h: &Subgroup) -> UnitaryRep {
    let g = h.parent().clone();
    let (cosets, which) = h.right_cosets();
    let k = cosets.len();
    let matrices = (0..g.order())
        .map(|x| {
            let mut m = CMatrix::zeros(k, k);
            let x_inv = g.inv(x);
            for (col, coset) in cosets.iter().enumerate() {
                let row = which[g.mul(coset[0], x_inv)];
                m[(row, col)] = C64::new(1.0, 0.0);
            }
            m
        })
        .collect();
    UnitaryRep { group: g, matrices }
}

/// Multiplicity of the trivial representation in `ω|_H`, cross-checked
/// against the multiplicity of `ω` in the coset representation `R_{G,H}`.
pub fn eta(omega: &UnitaryRep, h: &Subgroup) -> Result<usize> {
    let restricted = restrict(omega, h);
    let triv = UnitaryRep::trivial(restricted.group().clone());
    let restriction = multiplicity(&triv, &restricted)?;
    let induced = multiplicity(omega, &right_regular(h))?;
    if restriction != induced {
        return Err(Error::ReciprocityMismatch { restriction, induced });
    }
    Ok(restriction)
}

/// A complete set of inequivalent irreducible unitary representations in
/// canonical order: trivial first, then ascending dimension, then
/// lexicographic character.
#[derive(Clone, Debug)]
pub struct IrrepSet {
    group: Arc<FiniteGroup>,
    irreps: Vec<UnitaryRep>,
    tol: f64,
    seed: u64,
}

impl IrrepSet {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreps(&self) -> &[UnitaryRep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn get(&self, k: usize) -> &UnitaryRep {
        &self.irreps[k]
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(UnitaryRep::dim).collect()
    }

    /// `Σ dim²`, which must equal `|G|`.
    pub fn sum_dim_squared(&self) -> usize {
        self.irreps.iter().map(|r| r.dim() * r.dim()).sum()
    }

    pub fn homomorphism_residual(&self) -> f64 {
        self.irreps.iter().map(UnitaryRep::homomorphism_residual).fold(0.0, f64::max)
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.irreps.iter().map(UnitaryRep::unitarity_residual).fold(0.0, f64::max)
    }

    /// Largest deviation of `⟨γ_ij, γ'_kl⟩` from `δ_γγ' δ_ik δ_jl / dim_γ`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.group.order();
        let mut entries: Vec<(usize, usize, usize, Vec<C64>)> = Vec::with_capacity(n);
        for (r, rep) in self.irreps.iter().enumerate() {
            for i in 0..rep.dim() {
                for j in 0..rep.dim() {
                    entries.push((r, i, j, (0..n).map(|g| rep.entry(g, i, j)).collect()));
                }
            }
        }
        let mut worst: f64 = 0.0;
        for a in &entries {
            for b in &entries {
                let expected = if (a.0, a.1, a.2) == (b.0, b.1, b.2) {
                    1.0 / self.irreps[a.0].dim() as f64
                } else {
                    0.0
                };
                worst = worst.max((inner(&a.3, &b.3) - C64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest `|Σ_γ dim_γ χ_γ(g) − |G|⟦g = 1⟧|` over `g`.
    pub fn character_sum_residual(&self) -> f64 {
        let chars: Vec<Vec<C64>> = self.irreps.iter().map(UnitaryRep::character).collect();
        (0..self.group.order())
            .map(|g| {
                let total: C64 = self.irreps.iter().zip(&chars).map(|(r, c)| c[g] * r.dim() as f64).sum();
                let expected = if g == self.group.identity() { self.group.order() as f64 } else { 0.0 };
                (total - C64::new(expected, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(rng.sample(StandardNormal), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Weyl averaging: conjugates by the square root of
/// `P = (1/|G|) Σ_g ρ(g)* ρ(g)` so that every matrix becomes unitary.
pub fn unitarize(matrices: &[CMatrix]) -> Vec<CMatrix> {
    let dim = matrices[0].nrows();
    let mut p = CMatrix::zeros(dim, dim);
    for m in matrices {
        p += m.adjoint() * m;
    }
    p /= C64::new(matrices.len() as f64, 0.0);
    let eig = p.symmetric_eigen();
    let sqrt = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0)));
    let inv_sqrt = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(1.0 / l.max(f64::MIN_POSITIVE).sqrt(), 0.0)));
    let u = &eig.eigenvectors;
    let s = u * sqrt * u.adjoint();
    let s_inv = u * inv_sqrt * u.adjoint();
    matrices.iter().map(|m| &s * m * &s_inv).collect()
}

fn character_cmp(a: &[C64], b: &[C64]) -> Ordering {
    let key = |z: &C64| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64);
    a.iter().map(key).cmp(b.iter().map(key))
}

/// One attempt at splitting `R_G` with the seeded Hermitian element `T` of its
/// commutant. Returns `None` when some eigenspace is not irreducible.
fn split_regular(group: &Arc<FiniteGroup>, regular: &UnitaryRep, rng: &mut ChaCha8Rng) -> Option<Vec<UnitaryRep>> {
    let n = group.order();
    let h = random_hermitian(n, rng);
    let mut t = CMatrix::zeros(n, n);
    for r in regular.matrices() {
        t += r * &h * r.adjoint();
    }
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let gap = 1e-7 * scale;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match clusters.last_mut() {
            Some(c) if eig.eigenvalues[k] - eig.eigenvalues[*c.last().unwrap()] < gap => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let mut blocks = Vec::with_capacity(clusters.len());
    for cluster in clusters {
        let basis = CMatrix::from_fn(n, cluster.len(), |r, c| eig.eigenvectors[(r, cluster[c])]);
        let mut matrices = Vec::with_capacity(n);
        for r in regular.matrices() {
            let image = r * &basis;
            let block = basis.adjoint() * &image;
            if max_abs(&(image - &basis * &block)) > 1e-7 {
                return None;
            }
            matrices.push(block);
        }
        let rep = UnitaryRep { group: group.clone(), matrices };
        let chi = rep.character();
        if (inner(&chi, &chi) - C64::new(1.0, 0.0)).norm() > INTEGER_GUARD {
            return None;
        }
        blocks.push(rep);
    }
    Some(blocks)
}

/// Computes a complete set of inequivalent irreducible unitary
/// representations, deterministically from `seed`.
pub fn irreps(group: &Arc<FiniteGroup>, seed: u64, tol: f64) -> Result<IrrepSet> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::InvalidParams(format!("tolerance must lie in (0, 1e-6], got {tol}")));
    }
    let regular = right_regular(&Subgroup::trivial(group.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let Some(blocks) = split_regular(group, &regular, &mut rng) else {
            continue;
        };
        let mut classes: Vec<(UnitaryRep, Vec<C64>)> = Vec::new();
        for block in blocks {
            let chi = block.character();
            let known = classes
                .iter()
                .any(|(_, c)| c.iter().zip(&chi).all(|(a, b)| (a - b).norm() < INTEGER_GUARD));
            if !known {
                classes.push((block, chi));
            }
        }
        let total: usize = classes.iter().map(|(r, _)| r.dim() * r.dim()).sum();
        if total != group.order() {
            continue;
        }
        let mut irreps: Vec<(UnitaryRep, Vec<C64>)> = classes
            .into_iter()
            .map(|(r, _)| {
                let rep = UnitaryRep { group: group.clone(), matrices: unitarize(&r.matrices) };
                let chi = rep.character();
                (rep, chi)
            })
            .collect();
        irreps.sort_by(|(a, ca), (b, cb)| {
            b.is_trivial(INTEGER_GUARD)
                .cmp(&a.is_trivial(INTEGER_GUARD))
                .then(a.dim().cmp(&b.dim()))
                .then_with(|| character_cmp(ca, cb))
        });
        let set = IrrepSet { group: group.clone(), irreps: irreps.into_iter().map(|(r, _)| r).collect(), tol, seed };
        if set.irreps[0].is_trivial(INTEGER_GUARD) && set.irreps.iter().skip(1).all(|r| !r.is_trivial(INTEGER_GUARD)) {
            return Ok(set);
        }
    }
    Err(Error::DecompositionFailed(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn set(g: FiniteGroup) -> IrrepSet {
        irreps(&Arc::new(g), 0, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn dimensions_of_small_groups() {
        assert_eq!(set(catalog::cyclic(2)).dims(), vec![1, 1]);
        assert_eq!(set(catalog::symmetric3()).dims(), vec![1, 1, 2]);
        assert_eq!(set(catalog::quaternion()).dims(), vec![1, 1, 1, 1, 2]);
        assert_eq!(set(catalog::dihedral4()).dims(), vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn s3_characters() {
        let s = set(catalog::symmetric3());
        assert!(s.get(0).character().iter().all(|c| (c - C64::new(1.0, 0.0)).norm() < 1e-9));
        let sign = s.get(1).character();
        assert!((sign[1] + 1.0).norm() < 1e-9);
        let two = s.get(2).character();
        assert!((two[0] - 2.0).norm() < 1e-9);
    }

    #[test]
    fn multiplicities_in_regular_and_coset_representations() {
        let s3 = Arc::new(catalog::symmetric3());
        let s = irreps(&s3, 0, DEFAULT_TOL).unwrap();
        let regular = right_regular(&Subgroup::trivial(s3.clone()));
        for rho in s.irreps() {
            assert_eq!(multiplicity(rho, rho).unwrap(), 1);
            assert_eq!(multiplicity(rho, &regular).unwrap(), rho.dim());
        }
        let a3 = Subgroup::closure(s3.clone(), &[4]);
        let coset = right_regular(&a3);
        assert_eq!(coset.dim(), 2);
        let chi: Vec<f64> = coset.character().iter().map(|c| c.re).collect();
        assert_eq!(chi, vec![2.0, 0.0, 0.0, 0.0, 2.0, 2.0]);
        assert_eq!(multiplicity(s.get(0), &coset).unwrap(), 1);
    }

    #[test]
    fn coset_representation_extremes() {
        let s3 = Arc::new(catalog::symmetric3());
        let whole = right_regular(&Subgroup::whole(s3.clone()));
        assert_eq!(whole.dim(), 1);
        assert!(whole.is_trivial(1e-12));
        let regular = right_regular(&Subgroup::trivial(s3));
        assert_eq!(regular.dim(), 6);
        assert!(regular.homomorphism_residual() < 1e-12);
    }

    #[test]
    fn restrictions_to_a3() {
        let s3 = Arc::new(catalog::symmetric3());
        let s = irreps(&s3, 0, DEFAULT_TOL).unwrap();
        let a3 = Subgroup::closure(s3, &[4]);
        let sign = restrict(s.get(1), &a3);
        assert!(sign.is_trivial(1e-9));
        let two = restrict(s.get(2), &a3);
        let triv = UnitaryRep::trivial(two.group().clone());
        assert_eq!(multiplicity(&triv, &two).unwrap(), 0);
        let t = restrict(s.get(0), &a3);
        assert!(t.is_trivial(1e-12));
    }

    #[test]
    fn eta_values() {
        let s3 = Arc::new(catalog::symmetric3());
        let s = irreps(&s3, 0, DEFAULT_TOL).unwrap();
        let a3 = Subgroup::closure(s3, &[4]);
        let etas: Vec<usize> = s.irreps().iter().map(|w| eta(w, &a3).unwrap()).collect();
        assert_eq!(etas, vec![1, 1, 0]);

        let z4 = Arc::new(catalog::cyclic(4));
        let s = irreps(&z4, 0, DEFAULT_TOL).unwrap();
        let h = Subgroup::closure(z4, &[2]);
        for w in s.irreps() {
            // χ_k(2) = (-1)^k, so η = 1 exactly for the even characters.
            let even = (w.character()[2] - 1.0).norm() < 1e-9;
            assert_eq!(eta(w, &h).unwrap(), usize::from(even));
        }
    }

    #[test]
    fn broken_representation_has_non_integer_multiplicity() {
        let z2 = Arc::new(catalog::cyclic(2));
        let fake = UnitaryRep::new(z2.clone(), vec![
            CMatrix::identity(1, 1),
            CMatrix::from_element(1, 1, C64::new(0.5, 0.0)),
        ])
        .unwrap();
        let triv = UnitaryRep::trivial(z2);
        assert!(matches!(multiplicity(&triv, &fake), Err(Error::NonIntegerMultiplicity(_))));
    }

    #[test]
    fn unitarize_recovers_unitarity() {
        let s = set(catalog::symmetric3());
        let two = s.get(2);
        let t = CMatrix::from_row_slice(2, 2, &[
            C64::new(2.0, 0.0),
            C64::new(1.0, 0.5),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ]);
        let t_inv = t.clone().try_inverse().unwrap();
        let skewed: Vec<CMatrix> = two.matrices().iter().map(|m| &t_inv * m * &t).collect();
        let fixed = UnitaryRep::new(two.group().clone(), unitarize(&skewed)).unwrap();
        assert!(fixed.unitarity_residual() < 1e-9);
        assert!(fixed.homomorphism_residual() < 1e-9);
    }

    #[test]
    fn seeds_are_reproducible() {
        let g = Arc::new(catalog::quaternion());
        let a = irreps(&g, 7, DEFAULT_TOL).unwrap();
        let b = irreps(&g, 7, DEFAULT_TOL).unwrap();
        for (x, y) in a.irreps().iter().zip(b.irreps()) {
            assert_eq!(x.matrices(), y.matrices());
        }
    }

    #[test]
    fn rejects_loose_tolerance() {
        let g = Arc::new(catalog::cyclic(2));
        assert!(matches!(irreps(&g, 0, 1e-3), Err(Error::InvalidParams(_))));
    }
}
