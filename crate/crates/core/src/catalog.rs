//! Built-in groups and templates, plus small Label Cover fixtures.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Homomorphism, Subgroup, Template};
use crate::reduction::{Edge, LabelCoverInstance};

/// Catalog group names, in load order. `S4` is only included on request.
pub const GROUP_NAMES: &[&str] = &["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8"];

pub fn cyclic(n: usize) -> FiniteGroup {
    let elems: Vec<usize> = (0..n).collect();
    FiniteGroup::from_elements(format!("Z{n}"), &elems, |a| a.to_string(), |a, b| (a + b) % n)
        .expect("cyclic group")
}

pub fn klein() -> FiniteGroup {
    let elems = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)];
    FiniteGroup::from_elements("Z2xZ2", &elems, |(a, b)| format!("({a},{b})"), |x, y| (x.0 ^ y.0, x.1 ^ y.1))
        .expect("Klein four-group")
}

/// Product of permutations as composition: `(p·q)(x) = p(q(x))`.
fn compose(p: &Vec<usize>, q: &Vec<usize>) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

fn permutation_group(name: &str, elems: &[Vec<usize>]) -> FiniteGroup {
    FiniteGroup::from_elements(name, elems, |p| cycle_label(p), compose).expect("permutation group")
}

/// All elements generated by `gens`, in breadth-first order from the identity.
fn generate(degree: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut elems = vec![(0..degree).collect::<Vec<_>>()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let next = compose(&elems[i], g);
            if !elems.contains(&next) {
                elems.push(next);
            }
        }
        i += 1;
    }
    elems
}

/// `S3` with elements ordered `e, (12), (13), (23), (123), (132)`.
pub fn symmetric3() -> FiniteGroup {
    let elems = vec![
        vec![0, 1, 2],
        vec![1, 0, 2],
        vec![2, 1, 0],
        vec![0, 2, 1],
        vec![1, 2, 0],
        vec![2, 0, 1],
    ];
    permutation_group("S3", &elems)
}

/// Symmetries of a square on vertices 1..4.
pub fn dihedral4() -> FiniteGroup {
    let rotation = vec![1, 2, 3, 0];
    let reflection = vec![0, 3, 2, 1];
    permutation_group("D4", &generate(4, &[rotation, reflection]))
}

pub fn symmetric4() -> FiniteGroup {
    let mut elems = generate(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]);
    elems.sort();
    permutation_group("S4", &elems)
}

/// Quaternion group, elements `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion() -> FiniteGroup {
    // (sign, unit) with unit 0=1, 1=i, 2=j, 3=k.
    let elems: Vec<(i8, u8)> = vec![(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)];
    let unit_mul = |a: u8, b: u8| -> (i8, u8) {
        match (a, b) {
            (0, x) | (x, 0) => (1, x),
            (x, y) if x == y => (-1, 0),
            (1, 2) => (1, 3),
            (2, 3) => (1, 1),
            (3, 1) => (1, 2),
            (2, 1) => (-1, 3),
            (3, 2) => (-1, 1),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        }
    };
    let label = |&(s, u): &(i8, u8)| {
        let name = ["1", "i", "j", "k"][u as usize];
        if s < 0 {
            format!("-{name}")
        } else {
            name.to_string()
        }
    };
    FiniteGroup::from_elements("Q8", &elems, label, |&(s, a), &(t, b)| {
        let (r, c) = unit_mul(a, b);
        (s * t * r, c)
    })
    .expect("quaternion group")
}

pub fn group(name: &str) -> Result<FiniteGroup> {
    Ok(match name {
        "Z2" => cyclic(2),
        "Z3" => cyclic(3),
        "Z4" => cyclic(4),
        "Z2xZ2" => klein(),
        "S3" => symmetric3(),
        "D4" => dihedral4(),
        "Q8" => quaternion(),
        "S4" => symmetric4(),
        _ => return Err(Error::Invalid(format!("unknown catalog group {name:?}"))),
    })
}

/// Catalog groups, optionally including the heavier `S4`.
pub fn groups(include_s4: bool) -> Vec<Arc<FiniteGroup>> {
    let mut names = GROUP_NAMES.to_vec();
    if include_s4 {
        names.push("S4");
    }
    names.into_iter().map(|n| Arc::new(group(n).unwrap())).collect()
}

/// Named subgroup pairs used by the reciprocity checks, with `|G|/|H|`.
pub fn subgroup_pairs() -> Vec<(String, Subgroup)> {
    let s3 = Arc::new(symmetric3());
    let z4 = Arc::new(cyclic(4));
    let q8 = Arc::new(quaternion());
    vec![
        ("(S3, A3)".into(), Subgroup::closure(s3.clone(), &[4])),
        ("(S3, <(12)>)".into(), Subgroup::closure(s3, &[1])),
        ("(Z4, {0,2})".into(), Subgroup::closure(z4, &[2])),
        ("(Q8, center)".into(), Subgroup::closure(q8, &[1])),
    ]
}

pub const TEMPLATE_NAMES: &[&str] = &["id-Z2", "id-Z3", "id-Z4", "id-S3", "A3-in-S3", "sign-S3-Z2", "Z4-Z2"];

pub fn template(name: &str) -> Result<Template> {
    let phi = match name {
        "id-Z2" | "id-Z3" | "id-Z4" | "id-S3" | "id-Q8" => {
            let g = Arc::new(group(&name[3..])?);
            Homomorphism::identity_on(&Subgroup::whole(g))
        }
        "A3-in-S3" => {
            let s3 = Arc::new(symmetric3());
            Homomorphism::identity_on(&Subgroup::closure(s3, &[4]))
        }
        "sign-S3-Z2" => {
            Homomorphism::from_total(Arc::new(symmetric3()), Arc::new(cyclic(2)), &[0, 1, 1, 1, 0, 0])?
        }
        "Z4-Z2" => Homomorphism::from_total(Arc::new(cyclic(4)), Arc::new(cyclic(2)), &[0, 1, 0, 1])?,
        _ => return Err(Error::Invalid(format!("unknown catalog template {name:?}"))),
    };
    Template::validate(phi)
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub const LC_NAMES: [&str; 4] = ["one-edge", "two-edge", "unit", "matching"];

/// One edge, `D = {d1, d2}`, `E = {e1}`, constant projection.
pub fn lc_one_edge() -> LabelCoverInstance {
    LabelCoverInstance::new(
        labels("d", 2),
        labels("e", 1),
        labels("u", 1),
        labels("v", 1),
        vec![Edge { u: 0, v: 0, pi: vec![0, 0] }],
    )
    .expect("fixture")
}

/// Two edges sharing `u`, `D = {d1, d2}`, `E = {e1, e2}`; satisfied by
/// `u ↦ d1, v1 ↦ e1, v2 ↦ e2`.
pub fn lc_two_edge() -> LabelCoverInstance {
    LabelCoverInstance::new(
        labels("d", 2),
        labels("e", 2),
        labels("u", 1),
        labels("v", 2),
        vec![Edge { u: 0, v: 0, pi: vec![0, 1] }, Edge { u: 0, v: 1, pi: vec![1, 0] }],
    )
    .expect("fixture")
}

/// One edge with `|D| = |E| = 1`.
pub fn lc_unit() -> LabelCoverInstance {
    LabelCoverInstance::new(labels("d", 1), labels("e", 1), labels("u", 1), labels("v", 1), vec![Edge {
        u: 0,
        v: 0,
        pi: vec![0],
    }])
    .expect("fixture")
}

/// One edge with `D = E = {1, 2, 3}` and the identity projection.
pub fn lc_matching() -> LabelCoverInstance {
    LabelCoverInstance::new(labels("d", 3), labels("e", 3), labels("u", 1), labels("v", 1), vec![Edge {
        u: 0,
        v: 0,
        pi: vec![0, 1, 2],
    }])
    .expect("fixture")
}

pub fn lc_instance(name: &str) -> Result<LabelCoverInstance> {
    match name {
        "one-edge" => Ok(lc_one_edge()),
        "two-edge" => Ok(lc_two_edge()),
        "unit" => Ok(lc_unit()),
        "matching" => Ok(lc_matching()),
        _ => Err(Error::Invalid(format!("unknown catalog instance {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let orders: Vec<usize> = groups(true).iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![2, 3, 4, 4, 6, 8, 8, 24]);
    }

    #[test]
    fn s3_composition_oracle() {
        let s3 = symmetric3();
        // (12)(13) = (132) when the right factor acts first: 0→2→2, 1→1→0, 2→0→1.
        assert_eq!(s3.mul(1, 2), 5);
        assert_eq!(s3.label(4), "(123)");
        assert_eq!(s3.label(5), "(132)");
        assert_eq!(s3.pow(4, 2), 5);
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion();
        let (i, j, k, m1) = (2, 4, 6, 1);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), q.inv(k));
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.conjugacy_classes().len(), 5);
    }

    #[test]
    fn dihedral_is_nonabelian_of_order_eight() {
        let d = dihedral4();
        assert_eq!(d.order(), 8);
        assert!(!d.is_abelian());
        assert_eq!(d.conjugacy_classes().len(), 5);
    }

    #[test]
    fn every_template_validates() {
        for name in TEMPLATE_NAMES {
            let t = template(name).unwrap();
            let psi = &t.extension_witness;
            for a in 0..t.g1.order() {
                for b in 0..t.g1.order() {
                    assert_eq!(psi[t.g1.mul(a, b)], t.g2.mul(psi[a], psi[b]), "{name}");
                }
            }
            for &h in t.h1.members() {
                assert_eq!(psi[h], t.phi.apply(h));
            }
        }
    }
}
