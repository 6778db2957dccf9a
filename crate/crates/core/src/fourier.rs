//! Fourier analysis on direct powers `G^N`.
//!
//! Product irreducibles are tuples of component indices into a base
//! [`IrrepSet`]; their matrix entries are products of component entries and
//! are never expanded into full tensor matrices unless asked for.

use std::fmt;
use std::sync::Arc;

use num::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::PowerGroup;
use crate::rational::{self, Rational};
use crate::rep::{max_abs, CMatrix, IrrepSet, C64};

/// Largest `|G|^N` accepted for dense tables.
pub const TABLE_CAP: usize = 20_000;

pub fn check_table_size(power: &PowerGroup) -> Result<()> {
    let cap = crate::cap(TABLE_CAP as u128);
    let required = (power.group().order() as u128).pow(power.arity() as u32);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    Ok(())
}

/// An irreducible representation of `G^N`, one component irrep per coordinate.
#[derive(Clone)]
pub struct ProductIrrep {
    set: Arc<IrrepSet>,
    components: Vec<usize>,
    dims: Vec<usize>,
}

impl fmt::Debug for ProductIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProductIrrep{:?}", self.components)
    }
}

impl PartialEq for ProductIrrep {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.set, &other.set) && self.components == other.components
    }
}

impl ProductIrrep {
    pub fn new(set: Arc<IrrepSet>, components: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = components.iter().find(|&&c| c >= set.len()) {
            return Err(Error::DimensionMismatch(format!("irrep index {bad} out of range")));
        }
        let dims = components.iter().map(|&c| set.get(c).dim()).collect();
        Ok(ProductIrrep { set, components, dims })
    }

    pub fn trivial(set: Arc<IrrepSet>, arity: usize) -> Self {
        ProductIrrep { set, components: vec![0; arity], dims: vec![1; arity] }
    }

    pub fn set(&self) -> &Arc<IrrepSet> {
        &self.set
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// `|ρ|`: the number of non-trivial components. Index 0 of a canonical
    /// irrep set is the trivial representation.
    pub fn degree(&self) -> usize {
        self.components.iter().filter(|&&c| c != 0).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.degree() == 0
    }

    /// Splits a flat entry index into per-coordinate indices (row-major).
    pub fn split_index(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = i % d;
            i /= d;
        }
        out
    }

    /// `ρ_{i,j}(g) = Π_d ρ^d_{i_d, j_d}(g_d)`.
    pub fn entry(&self, g: &[usize], i: usize, j: usize) -> C64 {
        let (is, js) = (self.split_index(i), self.split_index(j));
        let mut acc = C64::new(1.0, 0.0);
        for (k, &c) in self.components.iter().enumerate() {
            acc *= self.set.get(c).entry(g[k], is[k], js[k]);
        }
        acc
    }

    /// The entry `ρ_{i,j}` tabulated over the whole power group.
    pub fn entry_table(&self, power: &PowerGroup, i: usize, j: usize) -> Vec<C64> {
        (0..power.size()).map(|idx| self.entry(&power.decode(idx), i, j)).collect()
    }

    /// Full matrix `ρ(g)`. Only sensible for small dimensions.
    pub fn matrix(&self, g: &[usize]) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| self.entry(g, i, j))
    }

    pub fn character(&self, g: &[usize]) -> C64 {
        self.components.iter().zip(g).map(|(&c, &x)| self.set.get(c).matrix(x).trace()).product()
    }
}

/// All product irreducibles of `G^N`, in row-major order of component indices.
pub fn product_irreps(set: &Arc<IrrepSet>, arity: usize) -> Vec<ProductIrrep> {
    let k = set.len();
    let total = k.pow(arity as u32);
    (0..total)
        .map(|mut idx| {
            let mut components = vec![0; arity];
            for slot in components.iter_mut().rev() {
                *slot = idx % k;
                idx /= k;
            }
            ProductIrrep::new(set.clone(), components).expect("indices in range")
        })
        .collect()
}

/// A complex-valued function on `G^N`.
#[derive(Clone, Debug)]
pub struct ScalarFn {
    pub power: PowerGroup,
    pub values: Vec<C64>,
}

impl ScalarFn {
    pub fn new(power: PowerGroup, values: Vec<C64>) -> Result<Self> {
        check_table_size(&power)?;
        if values.len() != power.size() {
            return Err(Error::DimensionMismatch(format!("{} values for |G^N| = {}", values.len(), power.size())));
        }
        Ok(ScalarFn { power, values })
    }

    pub fn from_fn(power: PowerGroup, mut f: impl FnMut(&[usize]) -> C64) -> Result<Self> {
        let values = (0..power.size()).map(|i| f(&power.decode(i))).collect();
        Self::new(power, values)
    }

    pub fn to_matrix_fn(&self) -> MatrixFn {
        MatrixFn {
            power: self.power.clone(),
            n: 1,
            values: self.values.iter().map(|&z| CMatrix::from_element(1, 1, z)).collect(),
        }
    }

    /// `‖F‖² = (1/|G^N|) Σ |F(g)|²`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    pub fn coeff(&self, rho: &ProductIrrep, i: usize, j: usize) -> Result<C64> {
        check_same_power(&self.power, rho)?;
        let n = self.values.len() as f64;
        let sum: C64 = (0..self.power.size())
            .map(|idx| self.values[idx] * rho.entry(&self.power.decode(idx), i, j).conj())
            .sum();
        Ok(sum / n)
    }
}

/// A function `G^N → C^{n×n}`.
#[derive(Clone, Debug)]
pub struct MatrixFn {
    pub power: PowerGroup,
    pub n: usize,
    pub values: Vec<CMatrix>,
}

impl MatrixFn {
    pub fn new(power: PowerGroup, values: Vec<CMatrix>) -> Result<Self> {
        check_table_size(&power)?;
        if values.len() != power.size() {
            return Err(Error::DimensionMismatch(format!("{} values for |G^N| = {}", values.len(), power.size())));
        }
        let n = values[0].nrows();
        if values.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::DimensionMismatch("matrix values must share one square size".into()));
        }
        Ok(MatrixFn { power, n, values })
    }

    pub fn from_fn(power: PowerGroup, mut f: impl FnMut(&[usize]) -> CMatrix) -> Result<Self> {
        let values = (0..power.size()).map(|i| f(&power.decode(i))).collect();
        Self::new(power, values)
    }

    /// The scalar function `g ↦ F(g)_{x,y}`.
    pub fn entry_fn(&self, x: usize, y: usize) -> ScalarFn {
        ScalarFn { power: self.power.clone(), values: self.values.iter().map(|m| m[(x, y)]).collect() }
    }

    pub fn max_diff(&self, other: &MatrixFn) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| max_abs(&(a - b))).fold(0.0, f64::max)
    }
}

fn check_same_power(power: &PowerGroup, rho: &ProductIrrep) -> Result<()> {
    if power.arity() != rho.arity() || power.group().as_ref() != rho.set().group().as_ref() {
        return Err(Error::DimensionMismatch("function and representation live on different groups".into()));
    }
    Ok(())
}

/// `F̂(ρ_{i,j}) = (1/|G^N|) Σ_g F(g)·conj(ρ_{i,j}(g))`, entrywise for matrix values.
pub fn coeff(f: &MatrixFn, rho: &ProductIrrep, i: usize, j: usize) -> Result<CMatrix> {
    check_same_power(&f.power, rho)?;
    let mut acc = CMatrix::zeros(f.n, f.n);
    for (idx, value) in f.values.iter().enumerate() {
        acc += value * rho.entry(&f.power.decode(idx), i, j).conj();
    }
    Ok(acc / C64::new(f.values.len() as f64, 0.0))
}

/// Coefficients `F̂(ρ_{i,j})` for a list of product irreducibles; entry pairs
/// are flattened as `i·dim + j`.
#[derive(Clone, Debug)]
pub struct FourierTable {
    pub power: PowerGroup,
    pub n: usize,
    pub irreps: Vec<ProductIrrep>,
    pub coeffs: Vec<Vec<CMatrix>>,
}

impl FourierTable {
    pub fn get(&self, k: usize, i: usize, j: usize) -> &CMatrix {
        &self.coeffs[k][i * self.irreps[k].dim() + j]
    }

    /// True iff the listed irreducibles cover `G^N` with every entry pair.
    pub fn is_complete(&self) -> bool {
        let dims: usize = self.irreps.iter().map(|r| r.dim() * r.dim()).sum();
        dims == self.power.size()
            && self.irreps.iter().zip(&self.coeffs).all(|(r, c)| c.len() == r.dim() * r.dim())
    }
}

/// Full transform over every product irreducible of `G^N`.
pub fn transform(f: &MatrixFn, set: &Arc<IrrepSet>) -> Result<FourierTable> {
    let irreps = product_irreps(set, f.power.arity());
    transform_on(f, irreps)
}

/// Transform restricted to the supplied product irreducibles.
pub fn transform_on(f: &MatrixFn, irreps: Vec<ProductIrrep>) -> Result<FourierTable> {
    let mut coeffs = Vec::with_capacity(irreps.len());
    for rho in &irreps {
        let d = rho.dim();
        let mut row = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                row.push(coeff(f, rho, i, j)?);
            }
        }
        coeffs.push(row);
    }
    Ok(FourierTable { power: f.power.clone(), n: f.n, irreps, coeffs })
}

/// `F(g) = Σ_ρ Σ_{i,j} dim_ρ F̂(ρ_{i,j}) ρ_{i,j}(g)`.
pub fn inverse(table: &FourierTable) -> Result<MatrixFn> {
    if !table.is_complete() {
        let dims: usize = table.irreps.iter().map(|r| r.dim() * r.dim()).sum();
        return Err(Error::IncompleteTable(format!(
            "coefficients cover {dims} of {} dimensions",
            table.power.size()
        )));
    }
    let power = table.power.clone();
    MatrixFn::from_fn(power, |g| {
        let mut acc = CMatrix::zeros(table.n, table.n);
        for (k, rho) in table.irreps.iter().enumerate() {
            let d = rho.dim();
            for i in 0..d {
                for j in 0..d {
                    acc += table.get(k, i, j) * (rho.entry(g, i, j) * d as f64);
                }
            }
        }
        acc
    })
}

/// `| ‖F‖² − Σ_ρ Σ_{i,j} dim_ρ |F̂(ρ_{i,j})|² |` for a scalar function.
pub fn plancherel_gap(f: &ScalarFn, set: &Arc<IrrepSet>) -> Result<f64> {
    let table = transform(&f.to_matrix_fn(), set)?;
    let mut spectral = 0.0;
    for (k, rho) in table.irreps.iter().enumerate() {
        let d = rho.dim();
        for c in &table.coeffs[k] {
            spectral += d as f64 * c[(0, 0)].norm_sqr();
        }
    }
    Ok((f.norm_sq() - spectral).abs())
}

/// `(F*H)(g) = (1/|G^N|) Σ_h F(h) H(h⁻¹g)`.
pub fn convolve(f: &MatrixFn, h: &MatrixFn) -> Result<MatrixFn> {
    if f.n != h.n || f.power.arity() != h.power.arity() || f.power.group().as_ref() != h.power.group().as_ref() {
        return Err(Error::DimensionMismatch("convolution operands differ in group or size".into()));
    }
    let power = f.power.clone();
    let scale = C64::new(1.0 / power.size() as f64, 0.0);
    MatrixFn::from_fn(power.clone(), |g| {
        let mut acc = CMatrix::zeros(f.n, f.n);
        for (hi, fv) in f.values.iter().enumerate() {
            let x = power.decode(hi);
            let rest = power.mul(&power.inv(&x), g);
            acc += fv * &h.values[power.encode(&rest)];
        }
        acc * scale
    })
}

/// Per-coordinate noise law: `1_G` with weight `(1−ε) + ε/|G|`, every other
/// element with weight `ε/|G|`.
pub fn noise_weights(order: usize, identity: usize, eps: &Rational) -> Vec<Rational> {
    let uniform = eps / rational::from_int(order as u128);
    (0..order)
        .map(|x| if x == identity { Rational::one() - eps + &uniform } else { uniform.clone() })
        .collect()
}

/// `H(a) = E_ν[F(a·ν)]`, expanded exactly over the product noise law.
pub fn noise_apply(f: &MatrixFn, eps: &Rational) -> Result<MatrixFn> {
    rational::check_open_unit("eps", eps)?;
    let power = f.power.clone();
    let g = power.group();
    let w: Vec<f64> = noise_weights(g.order(), g.identity(), eps).iter().map(|r| r.to_f64().unwrap()).collect();
    let nu_weight: Vec<f64> = (0..power.size())
        .map(|idx| power.decode(idx).iter().map(|&x| w[x]).product())
        .collect();
    MatrixFn::from_fn(power.clone(), |a| {
        let mut acc = CMatrix::zeros(f.n, f.n);
        for (ni, &wt) in nu_weight.iter().enumerate() {
            let shifted = power.mul(a, &power.decode(ni));
            acc += &f.values[power.encode(&shifted)] * C64::new(wt, 0.0);
        }
        acc
    })
}

/// `ρ^π` for `π: D → E`: a representation of `G^E` with entries
/// `Π_d ρ^d_{i_d, j_d}(g(π(d)))`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub rho: ProductIrrep,
    pub pi: Vec<usize>,
    pub target_arity: usize,
}

pub fn pullback(rho: &ProductIrrep, pi: &[usize], target_arity: usize) -> Result<Pullback> {
    if pi.len() != rho.arity() || pi.iter().any(|&e| e >= target_arity) {
        return Err(Error::DimensionMismatch("projection must map every coordinate into the target".into()));
    }
    Ok(Pullback { rho: rho.clone(), pi: pi.to_vec(), target_arity })
}

impl Pullback {
    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// The `G^D` tuple `g∘π`.
    pub fn compose(&self, g: &[usize]) -> Vec<usize> {
        self.pi.iter().map(|&e| g[e]).collect()
    }

    pub fn entry(&self, g: &[usize], i: usize, j: usize) -> C64 {
        self.rho.entry(&self.compose(g), i, j)
    }

    pub fn matrix(&self, g: &[usize]) -> CMatrix {
        self.rho.matrix(&self.compose(g))
    }
}

/// `τ ∼_π ρ`: every coordinate `e` where `τ` is non-trivial has some
/// `d ∈ π⁻¹(e)` where `ρ` is non-trivial.
pub fn similar(tau: &ProductIrrep, rho: &ProductIrrep, pi: &[usize]) -> bool {
    tau.components().iter().enumerate().all(|(e, &c)| {
        c == 0 || pi.iter().zip(rho.components()).any(|(&target, &r)| target == e && r != 0)
    })
}

/// `⟨f, g⟩ = (1/n) Σ f·conj(g)` for two tabulated functions.
pub fn inner(f: &[C64], g: &[C64]) -> C64 {
    crate::rep::inner(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::ratio;
    use crate::rep::{irreps, DEFAULT_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set_of(g: crate::group::FiniteGroup) -> Arc<IrrepSet> {
        Arc::new(irreps(&Arc::new(g), 0, DEFAULT_TOL).unwrap())
    }

    fn random_scalar(power: &PowerGroup, rng: &mut ChaCha8Rng) -> ScalarFn {
        ScalarFn::from_fn(power.clone(), |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn two_point_transform() {
        let set = set_of(catalog::cyclic(2));
        let power = PowerGroup::new(set.group().clone(), 1);
        let (a, b) = (C64::new(3.0, 0.0), C64::new(-1.0, 2.0));
        let f = ScalarFn::new(power, vec![a, b]).unwrap();
        let triv = ProductIrrep::new(set.clone(), vec![0]).unwrap();
        let sign = ProductIrrep::new(set, vec![1]).unwrap();
        assert!((f.coeff(&triv, 0, 0).unwrap() - (a + b) / 2.0).norm() < 1e-15);
        assert!((f.coeff(&sign, 0, 0).unwrap() - (a - b) / 2.0).norm() < 1e-15);
    }

    #[test]
    fn entry_functions_have_coefficient_one_over_dim() {
        let set = set_of(catalog::symmetric3());
        let power = PowerGroup::new(set.group().clone(), 1);
        let two = ProductIrrep::new(set.clone(), vec![2]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let f = ScalarFn::new(power.clone(), two.entry_table(&power, i, j)).unwrap();
                assert!((f.coeff(&two, i, j).unwrap() - 0.5).norm() < 1e-12);
            }
        }
        let ones = ScalarFn::from_fn(power, |_| C64::new(1.0, 0.0)).unwrap();
        for k in 1..set.len() {
            let rho = ProductIrrep::new(set.clone(), vec![k]).unwrap();
            assert!(ones.coeff(&rho, 0, 0).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn inversion_round_trip() {
        let set = set_of(catalog::cyclic(2));
        let power = PowerGroup::new(set.group().clone(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_scalar(&power, &mut rng).to_matrix_fn();
        let back = inverse(&transform(&f, &set).unwrap()).unwrap();
        assert!(back.max_diff(&f) < 1e-12);

        let delta = ScalarFn::from_fn(power, |g| C64::new(if g == [0, 0] { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let m = delta.to_matrix_fn();
        assert!(inverse(&transform(&m, &set).unwrap()).unwrap().max_diff(&m) < 1e-12);
    }

    #[test]
    fn incomplete_tables_are_rejected() {
        let set = set_of(catalog::cyclic(2));
        let power = PowerGroup::new(set.group().clone(), 1);
        let f = ScalarFn::from_fn(power, |_| C64::new(1.0, 0.0)).unwrap().to_matrix_fn();
        let mut table = transform(&f, &set).unwrap();
        table.irreps.pop();
        table.coeffs.pop();
        assert!(matches!(inverse(&table), Err(Error::IncompleteTable(_))));
    }

    #[test]
    fn plancherel_simple_cases() {
        let set = set_of(catalog::symmetric3());
        let power = PowerGroup::new(set.group().clone(), 1);
        let zero = ScalarFn::from_fn(power.clone(), |_| C64::new(0.0, 0.0)).unwrap();
        assert!(plancherel_gap(&zero, &set).unwrap() < 1e-15);
        let one = ScalarFn::from_fn(power, |_| C64::new(1.0, 0.0)).unwrap();
        assert!((one.norm_sq() - 1.0).abs() < 1e-15);
        assert!(plancherel_gap(&one, &set).unwrap() < 1e-12);
    }

    #[test]
    fn convolution_definition_and_identity() {
        let set = set_of(catalog::cyclic(2));
        let power = PowerGroup::new(set.group().clone(), 1);
        let f = ScalarFn::new(power.clone(), vec![C64::new(2.0, 0.0), C64::new(5.0, 0.0)]).unwrap().to_matrix_fn();
        let h = ScalarFn::new(power.clone(), vec![C64::new(-1.0, 0.0), C64::new(3.0, 0.0)]).unwrap().to_matrix_fn();
        let fh = convolve(&f, &h).unwrap();
        assert!((fh.values[0][(0, 0)] - C64::new((2.0 * -1.0 + 5.0 * 3.0) / 2.0, 0.0)).norm() < 1e-15);
        let delta = ScalarFn::new(power, vec![C64::new(2.0, 0.0), C64::new(0.0, 0.0)]).unwrap().to_matrix_fn();
        assert!(convolve(&f, &delta).unwrap().max_diff(&f) < 1e-15);
    }

    #[test]
    fn noise_on_a_single_sign() {
        let set = set_of(catalog::cyclic(2));
        let power = PowerGroup::new(set.group().clone(), 1);
        let sign = ScalarFn::new(power.clone(), vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]).unwrap().to_matrix_fn();
        let h = noise_apply(&sign, &ratio(1, 2)).unwrap();
        assert!((h.values[0][(0, 0)] - 0.5).norm() < 1e-15);
        assert!((h.values[1][(0, 0)] + 0.5).norm() < 1e-15);
        let constant = ScalarFn::from_fn(power, |_| C64::new(7.0, 0.0)).unwrap().to_matrix_fn();
        assert!(noise_apply(&constant, &ratio(1, 3)).unwrap().max_diff(&constant) < 1e-14);
        assert!(noise_apply(&constant, &ratio(0, 1)).is_err());
    }

    #[test]
    fn pullback_of_two_signs_through_a_constant_map_is_trivial() {
        let set = set_of(catalog::cyclic(2));
        let rho = ProductIrrep::new(set.clone(), vec![1, 1]).unwrap();
        let p = pullback(&rho, &[0, 0], 1).unwrap();
        for g in 0..2 {
            assert!((p.entry(&[g], 0, 0) - 1.0).norm() < 1e-12);
        }
        let id = pullback(&rho, &[0, 1], 2).unwrap();
        assert_eq!(id.entry(&[1, 0], 0, 0), rho.entry(&[1, 0], 0, 0));
    }

    #[test]
    fn similarity_examples() {
        let set = set_of(catalog::cyclic(2));
        let pr = |c: Vec<usize>| ProductIrrep::new(set.clone(), c).unwrap();
        assert!(similar(&pr(vec![0]), &pr(vec![1, 1]), &[0, 0]));
        assert!(!similar(&pr(vec![1]), &pr(vec![0, 0]), &[0, 0]));
        assert!(similar(&pr(vec![1]), &pr(vec![1, 0]), &[0, 0]));
    }

    #[test]
    fn product_dimensions_fill_the_power() {
        let set = set_of(catalog::symmetric3());
        let all = product_irreps(&set, 2);
        assert_eq!(all.len(), 9);
        assert_eq!(all.iter().map(|r| r.dim() * r.dim()).sum::<usize>(), 36);
        assert_eq!(all[8].degree(), 2);
        assert_eq!(all[0].degree(), 0);
    }
}
