//! Finite groups given by Cayley tables, together with the subgroup and
//! homomorphism machinery that templates and direct powers are built on.
//!
//! Elements are always small indices `0..order`; labels are only used for
//! presentation.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::reduction::LinEquation;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    ///
    /// Checks run in a fixed order: table shape, a left identity, two-sided
    /// inverses with respect to it, then associativity. Together these imply
    /// the group axioms.
    pub fn new(name: impl Into<String>, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidTable(format!("{} labels for a {n}x{n} table", labels.len())));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidTable(format!("row {i} contains out-of-range index {bad}")));
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * n + b];

        let identity = (0..n)
            .find(|&e| (0..n).all(|j| at(e, j) == j))
            .ok_or(Error::NoIdentity)?;
        let mut inverses = Vec::with_capacity(n);
        for i in 0..n {
            let inv = (0..n)
                .find(|&j| at(i, j) == identity && at(j, i) == identity)
                .ok_or(Error::NoInverse(i))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        if let Some(j) = (0..n).find(|&j| at(j, identity) != j) {
            return Err(Error::InvalidTable(format!("identity {identity} is not a right identity for {j}")));
        }
        Ok(FiniteGroup { name: name.into(), labels, table: flat, identity, inverses })
    }

    /// Builds a group from a closure-complete list of elements and a product.
    pub fn from_elements<T: PartialEq>(
        name: impl Into<String>,
        elements: &[T],
        label: impl Fn(&T) -> String,
        mul: impl Fn(&T, &T) -> T,
    ) -> Result<Self> {
        let index = |x: &T| elements.iter().position(|y| y == x);
        let mut table = Vec::with_capacity(elements.len());
        for a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for b in elements {
                let c = mul(a, b);
                row.push(index(&c).ok_or_else(|| Error::InvalidTable("elements not closed under product".into()))?);
            }
            table.push(row);
        }
        let labels = elements.iter().map(label).collect();
        Self::new(name, labels, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    /// `a^s` for a sign `s ∈ {-1, +1}`.
    #[inline]
    pub fn signed(&self, a: usize, s: i8) -> usize {
        if s < 0 {
            self.inv(a)
        } else {
            a
        }
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order()).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements having a cube root in this group.
    pub fn cubes(&self) -> Vec<bool> {
        let mut out = vec![false; self.order()];
        for g in 0..self.order() {
            out[self.pow(g, 3)] = true;
        }
        out
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }
}

/// A subgroup, stored as a sorted member list plus a membership mask.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup({:?} of {})", self.members, self.parent.name())
    }
}

impl Subgroup {
    /// Validates an explicit member list.
    pub fn new(parent: Arc<FiniteGroup>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = parent.order();
        let mut mask = vec![false; n];
        for m in members {
            if m >= n {
                return Err(Error::InvalidSubgroup(format!("element {m} out of range")));
            }
            mask[m] = true;
        }
        if !mask[parent.identity()] {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
        for &a in &members {
            if !mask[parent.inv(a)] {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &members {
                if !mask[parent.mul(a, b)] {
                    return Err(Error::InvalidSubgroup(format!("not closed under product at ({a}, {b})")));
                }
            }
        }
        Ok(Subgroup { parent, members, mask })
    }

    /// The least subgroup containing `seeds`.
    pub fn closure(parent: Arc<FiniteGroup>, seeds: &[usize]) -> Self {
        let n = parent.order();
        let mut mask = vec![false; n];
        mask[parent.identity()] = true;
        let mut queue = VecDeque::from([parent.identity()]);
        while let Some(x) = queue.pop_front() {
            for &s in seeds {
                let y = parent.mul(x, s);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        // In a finite group the positive powers already contain the inverses.
        let members = (0..n).filter(|&i| mask[i]).collect();
        Subgroup { parent, members, mask }
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        Self::closure(parent, &[])
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let n = parent.order();
        Subgroup { parent, members: (0..n).collect(), mask: vec![true; n] }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.mask.get(a).copied().unwrap_or(false)
    }

    /// Right cosets `H g` ordered by smallest member, with the coset index of
    /// every element.
    pub fn right_cosets(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let g = &self.parent;
        let mut which = vec![usize::MAX; g.order()];
        let mut cosets = Vec::new();
        for x in 0..g.order() {
            if which[x] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = self.members.iter().map(|&h| g.mul(h, x)).collect();
            coset.sort_unstable();
            for &c in &coset {
                which[c] = cosets.len();
            }
            cosets.push(coset);
        }
        (cosets, which)
    }

    /// The subgroup as a group in its own right, with the embedding
    /// `new index -> parent index`.
    pub fn to_group(&self) -> (FiniteGroup, Vec<usize>) {
        let g = &self.parent;
        let pos = |x: usize| self.members.binary_search(&x).expect("closed subgroup");
        let table = self
            .members
            .iter()
            .map(|&a| self.members.iter().map(|&b| pos(g.mul(a, b))).collect())
            .collect();
        let labels = self.members.iter().map(|&a| g.label(a).to_string()).collect();
        let name = format!("{}<{}>", g.name(), self.members.len());
        let group = FiniteGroup::new(name, labels, table).expect("subgroup of a valid group is a group");
        (group, self.members.clone())
    }
}

/// A homomorphism `φ: H1 → G2` defined on a subgroup `H1` of `G1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Homomorphism {
    domain: Subgroup,
    target: Arc<FiniteGroup>,
    map: Vec<Option<usize>>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Homomorphism({:?} -> {})", self.domain, self.target.name())
    }
}

impl Homomorphism {
    /// `images` lists `(source element, target element)` pairs; their sources
    /// must form a subgroup of `source`.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: &[(usize, usize)]) -> Result<Self> {
        let domain = Subgroup::new(source.clone(), images.iter().map(|&(a, _)| a))?;
        let mut map = vec![None; source.order()];
        for &(a, b) in images {
            if b >= target.order() {
                return Err(Error::NotHomomorphism(format!("image {b} out of range")));
            }
            if map[a].is_some_and(|prev| prev != b) {
                return Err(Error::NotHomomorphism(format!("element {a} mapped twice")));
            }
            map[a] = Some(b);
        }
        for &a in domain.members() {
            for &b in domain.members() {
                let lhs = map[source.mul(a, b)].unwrap();
                let rhs = target.mul(map[a].unwrap(), map[b].unwrap());
                if lhs != rhs {
                    return Err(Error::NotHomomorphism(format!("phi({a}*{b}) != phi({a})*phi({b})")));
                }
            }
        }
        Ok(Homomorphism { domain, target, map })
    }

    pub fn identity_on(h: &Subgroup) -> Self {
        let images: Vec<_> = h.members().iter().map(|&a| (a, a)).collect();
        Self::new(h.parent().clone(), h.parent().clone(), &images).expect("identity is a homomorphism")
    }

    pub fn from_total(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: &[usize]) -> Result<Self> {
        let images: Vec<_> = map.iter().copied().enumerate().collect();
        Self::new(source, target, &images)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        self.domain.parent()
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Image of `a`; panics when `a` lies outside the domain.
    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a].expect("element outside the homomorphism's domain")
    }

    pub fn get(&self, a: usize) -> Option<usize> {
        self.map.get(a).copied().flatten()
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::new(self.target.clone(), self.domain.members().iter().map(|&a| self.apply(a)))
            .expect("image of a homomorphism is a subgroup")
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.domain.members().iter().map(|&a| (a, self.apply(a))).collect()
    }
}

/// A template `(G1, G2, φ)`: `φ: H1 → H2` with `H1 ≤ G1`, `H2 = Im φ ≤ G2`,
/// extending to a full homomorphism `G1 → G2`.
#[derive(Clone, Debug)]
pub struct Template {
    pub g1: Arc<FiniteGroup>,
    pub g2: Arc<FiniteGroup>,
    pub phi: Homomorphism,
    pub h1: Subgroup,
    pub h2: Subgroup,
    /// A full homomorphism `G1 → G2` agreeing with `φ` on `H1`.
    pub extension_witness: Vec<usize>,
    /// `Im φ = {1}`: every system is satisfied by the constant identity.
    pub trivially_tractable: bool,
}

impl Template {
    /// Validates `φ` and searches for an extension to all of `G1`.
    pub fn validate(phi: Homomorphism) -> Result<Self> {
        let g1 = phi.source().clone();
        let g2 = phi.target().clone();
        let extension_witness = find_extension(&phi).ok_or(Error::NoExtension)?;
        let h1 = phi.domain().clone();
        let h2 = phi.image();
        let trivially_tractable = h2.order() == 1;
        if trivially_tractable {
            warn!("template {} -> {} has trivial image; it is trivially tractable", g1.name(), g2.name());
        }
        Ok(Template { g1, g2, phi, h1, h2, extension_witness, trivially_tractable })
    }

    /// The identity template on `g`.
    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        Self::validate(Homomorphism::identity_on(&Subgroup::whole(g))).expect("identity template is valid")
    }

    /// True iff every element of `H2` has a cube root in `G2`.
    pub fn is_cubic(&self) -> bool {
        let cubes = self.g2.cubes();
        self.h2.members().iter().all(|&h| cubes[h])
    }

    /// An equation `x^3 = h` or `x^-3 = h` with no solution in `G2` (hence
    /// none in `G1`).
    pub fn is_unsatisfiable_equation(&self, eq: &LinEquation) -> bool {
        let [(x, i), (y, j), (z, k)] = eq.terms;
        if x != y || y != z || i != j || j != k {
            return false;
        }
        let target = self.g2.signed(self.phi.apply(eq.rhs), i);
        !self.g2.cubes()[target]
    }
}

/// A generating set chosen greedily: each step adds the element whose
/// inclusion gives the largest closure.
pub fn generating_set(g: &Arc<FiniteGroup>) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = Subgroup::trivial(g.clone());
    while current.order() < g.order() {
        let best = (0..g.order())
            .filter(|&x| !current.contains(x))
            .max_by_key(|&x| {
                let mut trial = gens.clone();
                trial.push(x);
                // Prefer larger closures, then smaller indices.
                (Subgroup::closure(g.clone(), &trial).order(), std::cmp::Reverse(x))
            })
            .expect("some element lies outside a proper subgroup");
        gens.push(best);
        current = Subgroup::closure(g.clone(), &gens);
    }
    gens
}

/// Extends the generator images `images[k] = ψ(gens[k])` along the Cayley
/// graph. Returns `None` on any inconsistency with the group law or with `φ`.
fn propagate(phi: &Homomorphism, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let g1 = phi.source();
    let g2 = phi.target();
    let mut psi = vec![None; g1.order()];
    psi[g1.identity()] = Some(g2.identity());
    let mut queue = VecDeque::from([g1.identity()]);
    while let Some(x) = queue.pop_front() {
        let px = psi[x].unwrap();
        for (&g, &pg) in gens.iter().zip(images) {
            let y = g1.mul(x, g);
            let py = g2.mul(px, pg);
            match psi[y] {
                None => {
                    if phi.get(y).is_some_and(|v| v != py) {
                        return None;
                    }
                    psi[y] = Some(py);
                    queue.push_back(y);
                }
                Some(prev) if prev != py => return None,
                Some(_) => {}
            }
        }
    }
    Some(psi)
}

/// Backtracking over images of a generating set of `G1`; returns the first
/// full homomorphism found that agrees with `φ` on its domain.
pub fn find_extension(phi: &Homomorphism) -> Option<Vec<usize>> {
    let g1 = phi.source();
    let gens = generating_set(g1);
    let mut images = Vec::with_capacity(gens.len());
    fn search(phi: &Homomorphism, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
        let k = images.len();
        if propagate(phi, &gens[..k], images).is_none() {
            return None;
        }
        if k == gens.len() {
            let psi = propagate(phi, gens, images)?;
            return Some(psi.into_iter().map(|x| x.expect("generators reach every element")).collect());
        }
        let candidates: Vec<usize> = match phi.get(gens[k]) {
            Some(fixed) => vec![fixed],
            None => (0..phi.target().order()).collect(),
        };
        for c in candidates {
            images.push(c);
            if let Some(found) = search(phi, gens, images) {
                return Some(found);
            }
            images.pop();
        }
        None
    }
    search(phi, &gens, &mut images)
}

/// The direct power `G^N` with tuples encoded row-major:
/// `index = Σ_k coords[k] · |G|^(N-1-k)`.
#[derive(Clone, Debug)]
pub struct PowerGroup {
    group: Arc<FiniteGroup>,
    arity: usize,
    size: usize,
}

impl PowerGroup {
    pub fn new(group: Arc<FiniteGroup>, arity: usize) -> Self {
        let size = group.order().checked_pow(arity as u32).expect("power group size overflows usize");
        PowerGroup { group, arity, size }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `|G|^N`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.arity);
        coords.iter().fold(0, |acc, &c| acc * self.group.order() + c)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let n = self.group.order();
        let mut coords = vec![0; self.arity];
        for slot in coords.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        coords
    }

    pub fn identity(&self) -> Vec<usize> {
        vec![self.group.identity(); self.arity]
    }

    pub fn mul(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().zip(b).map(|(&x, &y)| self.group.mul(x, y)).collect()
    }

    pub fn inv(&self, a: &[usize]) -> Vec<usize> {
        a.iter().map(|&x| self.group.inv(x)).collect()
    }

    /// Diagonal left action `(h·g)(n) = h·g(n)`.
    pub fn scale(&self, h: usize, a: &[usize]) -> Vec<usize> {
        a.iter().map(|&x| self.group.mul(h, x)).collect()
    }

    /// `a^s` coordinatewise for `s ∈ {-1, +1}`.
    pub fn signed(&self, a: &[usize], s: i8) -> Vec<usize> {
        if s < 0 {
            self.inv(a)
        } else {
            a.to_vec()
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size).map(|i| self.decode(i))
    }
}

/// Coset representative `g† = min_{h∈H} h·g` (lexicographic on element
/// indices) and the witness `h_g` with `g† = h_g·g`.
pub fn coset_data(h: &Subgroup, g: &[usize]) -> (Vec<usize>, usize) {
    let group = h.parent();
    let mut best: Option<(Vec<usize>, usize)> = None;
    for &x in h.members() {
        let cand: Vec<usize> = g.iter().map(|&c| group.mul(x, c)).collect();
        if best.as_ref().is_none_or(|(b, _)| cand < *b) {
            best = Some((cand, x));
        }
    }
    best.expect("a subgroup contains the identity")
}

/// Folding of `f: G1^N → G2` over `φ`: `f_φ(g) = φ(h_g⁻¹)·f(g†)`.
///
/// `f` is a dense table over `G1^N` in row-major order.
pub fn fold(f: &[usize], phi: &Homomorphism, arity: usize) -> Vec<usize> {
    let power = PowerGroup::new(phi.source().clone(), arity);
    assert_eq!(f.len(), power.size(), "table length must be |G1|^N");
    let g1 = phi.source();
    let g2 = phi.target();
    (0..power.size())
        .map(|idx| {
            let g = power.decode(idx);
            let (rep, h) = coset_data(phi.domain(), &g);
            g2.mul(phi.apply(g1.inv(h)), f[power.encode(&rep)])
        })
        .collect()
}

/// True iff `f(h·g) = φ(h)·f(g)` for every `h ∈ H1` and every `g`.
pub fn is_folded(f: &[usize], phi: &Homomorphism, arity: usize) -> bool {
    let power = PowerGroup::new(phi.source().clone(), arity);
    let g2 = phi.target();
    (0..power.size()).all(|idx| {
        let g = power.decode(idx);
        phi.domain()
            .members()
            .iter()
            .all(|&h| f[power.encode(&power.scale(h, &g))] == g2.mul(phi.apply(h), f[idx]))
    })
}
