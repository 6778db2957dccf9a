//! JSON file formats.
//!
//! Every format has a plain serde struct mirroring the file layout and a pair
//! of conversions to and from the domain type. Output goes through
//! [`canonical`], which sorts object keys and writes rationals as `"p/q"` in
//! lowest terms, so parsing and re-serializing a canonical file reproduces it
//! byte for byte.
//!
//! Group and template references are either a path, resolved against the
//! directory of the referencing file, or `catalog:NAME`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::decoder::Strategy;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Homomorphism, Template};
use crate::rational::{self, Rational};
use crate::reduction::{AssignmentFamily, Edge, LabelCoverInstance, LinEquation, LinSystem, Side, VariableLayout};
use crate::rep::IrrepSet;

pub const CATALOG_PREFIX: &str = "catalog:";

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn canonical<T: Serialize>(value: &T) -> Result<String> {
    // `serde_json::Value` keeps object keys in a `BTreeMap`.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, canonical(value)?)?;
    Ok(())
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn resolve(reference: &str, base: &Path) -> PathBuf {
    let p = Path::new(reference);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile { name: g.name().to_string(), elements: g.labels().to_vec(), table: g.table_rows() }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        FiniteGroup::new(self.name.clone(), self.elements.clone(), self.table.clone())
    }
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    read_json::<GroupFile>(path)?.to_group()
}

/// A group reference: `catalog:NAME` or a path relative to `base`.
pub fn resolve_group(reference: &str, base: &Path) -> Result<Arc<FiniteGroup>> {
    match reference.strip_prefix(CATALOG_PREFIX) {
        Some(name) => Ok(Arc::new(catalog::group(name)?)),
        None => Ok(Arc::new(load_group(&resolve(reference, base))?)),
    }
}

/// `φ` is given on its domain; `map` keys are element indices as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateFile {
    pub g1: String,
    pub g2: String,
    pub domain: Vec<usize>,
    pub map: BTreeMap<String, usize>,
}

impl TemplateFile {
    /// Describes `t`, referring to its groups by catalog name.
    pub fn from_template(t: &Template) -> Self {
        let pairs = t.phi.pairs();
        TemplateFile {
            g1: format!("{CATALOG_PREFIX}{}", t.g1.name()),
            g2: format!("{CATALOG_PREFIX}{}", t.g2.name()),
            domain: pairs.iter().map(|&(a, _)| a).collect(),
            map: pairs.iter().map(|&(a, b)| (a.to_string(), b)).collect(),
        }
    }

    pub fn to_template(&self, base: &Path) -> Result<Template> {
        let g1 = resolve_group(&self.g1, base)?;
        let g2 = resolve_group(&self.g2, base)?;
        let mut images = Vec::with_capacity(self.domain.len());
        for &a in &self.domain {
            if a >= g1.order() {
                return Err(Error::Invalid(format!("domain element {a} is not in {}", g1.name())));
            }
            let b = self
                .map
                .get(&a.to_string())
                .ok_or_else(|| Error::Invalid(format!("template map has no image for {a}")))?;
            images.push((a, *b));
        }
        if let Some(k) = self.map.keys().find(|k| !self.domain.iter().any(|a| a.to_string() == **k)) {
            return Err(Error::Invalid(format!("template map key {k} lies outside the domain")));
        }
        Template::validate(Homomorphism::new(g1, g2, &images)?)
    }
}

/// A template reference: `catalog:NAME` or a path relative to `base`.
pub fn resolve_template(reference: &str, base: &Path) -> Result<Template> {
    match reference.strip_prefix(CATALOG_PREFIX) {
        Some(name) => catalog::template(name),
        None => {
            let path = resolve(reference, base);
            read_json::<TemplateFile>(&path)?.to_template(&base_dir(&path))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFile {
    pub u: String,
    pub v: String,
    /// `π` as label-to-label.
    pub pi: BTreeMap<String, String>,
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcFile {
    pub D: Vec<String>,
    pub E: Vec<String>,
    pub U: Vec<String>,
    pub V: Vec<String>,
    pub edges: Vec<EdgeFile>,
}

fn position(names: &[String], name: &str, what: &str) -> Result<usize> {
    names.iter().position(|n| n == name).ok_or_else(|| Error::Invalid(format!("unknown {what} {name:?}")))
}

impl LcFile {
    pub fn from_instance(lc: &LabelCoverInstance) -> Self {
        let edges = lc
            .edges()
            .iter()
            .map(|e| EdgeFile {
                u: lc.u_names()[e.u].clone(),
                v: lc.v_names()[e.v].clone(),
                pi: e.pi.iter().enumerate().map(|(d, &x)| (lc.d_labels()[d].clone(), lc.e_labels()[x].clone())).collect(),
            })
            .collect();
        LcFile {
            D: lc.d_labels().to_vec(),
            E: lc.e_labels().to_vec(),
            U: lc.u_names().to_vec(),
            V: lc.v_names().to_vec(),
            edges,
        }
    }

    pub fn to_instance(&self) -> Result<LabelCoverInstance> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let mut pi = Vec::with_capacity(self.D.len());
            for d in &self.D {
                let target = e.pi.get(d).ok_or_else(|| Error::Invalid(format!("projection misses label {d:?}")))?;
                pi.push(position(&self.E, target, "E label")?);
            }
            if e.pi.len() != self.D.len() {
                return Err(Error::Invalid("projection has keys outside D".into()));
            }
            edges.push(Edge { u: position(&self.U, &e.u, "U vertex")?, v: position(&self.V, &e.v, "V vertex")?, pi });
        }
        LabelCoverInstance::new(self.D.clone(), self.E.clone(), self.U.clone(), self.V.clone(), edges)
    }
}

/// Loads an instance from a path or `catalog:NAME`.
pub fn load_lc(reference: &str) -> Result<LabelCoverInstance> {
    match reference.strip_prefix(CATALOG_PREFIX) {
        Some(name) => catalog::lc_instance(name),
        None => read_json::<LcFile>(Path::new(reference))?.to_instance(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationFile {
    pub terms: Vec<(String, i8)>,
    pub rhs: usize,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub template: String,
    pub variables: Vec<String>,
    pub equations: Vec<EquationFile>,
}

impl SystemFile {
    pub fn from_system(system: &LinSystem, template_ref: &str) -> Self {
        let equations = system
            .equations
            .iter()
            .map(|eq| EquationFile {
                terms: eq.terms.iter().map(|&(x, s)| (system.variables[x].clone(), s)).collect(),
                rhs: eq.rhs,
                weight: rational::format(&eq.weight),
            })
            .collect();
        SystemFile { template: template_ref.to_string(), variables: system.variables.clone(), equations }
    }

    pub fn to_system(&self, base: &Path) -> Result<LinSystem> {
        let template = resolve_template(&self.template, base)?;
        let mut equations = Vec::with_capacity(self.equations.len());
        for (k, eq) in self.equations.iter().enumerate() {
            if eq.terms.len() != 3 {
                return Err(Error::Invalid(format!("equation {k} has {} terms, expected 3", eq.terms.len())));
            }
            let mut terms = [(0usize, 1i8); 3];
            for (slot, (name, s)) in terms.iter_mut().zip(&eq.terms) {
                *slot = (position(&self.variables, name, "variable")?, *s);
            }
            equations.push(LinEquation { terms, rhs: eq.rhs, weight: rational::parse(&eq.weight)? });
        }
        LinSystem::new(template, self.variables.clone(), equations)
    }
}

pub fn load_system(path: &Path) -> Result<LinSystem> {
    read_json::<SystemFile>(path)?.to_system(&base_dir(path))
}

/// Tables are indexed by the row-major encoding of `G1^E` (for `A`) and
/// `G1^D` (for `B`), with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub side: Side,
    #[serde(rename = "A")]
    pub a: BTreeMap<String, Vec<usize>>,
    #[serde(rename = "B")]
    pub b: BTreeMap<String, Vec<usize>>,
}

impl FamilyFile {
    pub fn from_family(lc: &LabelCoverInstance, f: &AssignmentFamily) -> Self {
        FamilyFile {
            side: f.side,
            a: lc.v_names().iter().cloned().zip(f.a.iter().cloned()).collect(),
            b: lc.u_names().iter().cloned().zip(f.b.iter().cloned()).collect(),
        }
    }

    pub fn to_family(&self, lc: &LabelCoverInstance, template: &Template) -> Result<AssignmentFamily> {
        let pick = |tables: &BTreeMap<String, Vec<usize>>, names: &[String], what: &str| -> Result<Vec<Vec<usize>>> {
            if tables.len() != names.len() {
                return Err(Error::Invalid(format!("family lists {} {what} tables, expected {}", tables.len(), names.len())));
            }
            names
                .iter()
                .map(|n| tables.get(n).cloned().ok_or_else(|| Error::Invalid(format!("family has no table for {n:?}"))))
                .collect()
        };
        let family = AssignmentFamily {
            side: self.side,
            a: pick(&self.a, lc.v_names(), "A")?,
            b: pick(&self.b, lc.u_names(), "B")?,
        };
        family.validate(lc, template)?;
        Ok(family)
    }
}

pub fn load_family(path: &Path, lc: &LabelCoverInstance, template: &Template) -> Result<AssignmentFamily> {
    read_json::<FamilyFile>(path)?.to_family(lc, template)
}

/// Assignment files map variable names to element indices.
pub fn load_assignment(path: &Path, system: &LinSystem) -> Result<Vec<usize>> {
    let named: std::collections::HashMap<String, usize> = read_json(path)?;
    system.assignment_from_names(&named)
}

pub fn assignment_json(system: &LinSystem, values: &[usize]) -> BTreeMap<String, usize> {
    system.variables.iter().cloned().zip(values.iter().copied()).collect()
}

/// Variable names of the reduction, for reports.
pub fn variable_names(lc: &LabelCoverInstance, template: &Template) -> Vec<String> {
    VariableLayout::new(lc, &template.g1).names(lc)
}

#[derive(Clone, Debug, Serialize)]
pub struct IrrepJson {
    pub dim: usize,
    pub character: Vec<[f64; 2]>,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn irreps_json(set: &IrrepSet) -> Vec<IrrepJson> {
    set.irreps()
        .iter()
        .map(|r| IrrepJson {
            dim: r.dim(),
            character: r.character().iter().map(|c| [c.re, c.im]).collect(),
            matrices: r
                .matrices()
                .iter()
                .map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
                .collect(),
        })
        .collect()
}

/// Strategy as `{"u": {vertex: {label: p}}, "v": {...}}`, listing only
/// labels with positive probability.
pub fn strategy_json(lc: &LabelCoverInstance, s: &Strategy) -> serde_json::Value {
    let side = |names: &[String], labels: &[String], probs: &[Vec<f64>]| -> serde_json::Map<String, serde_json::Value> {
        names
            .iter()
            .zip(probs)
            .map(|(n, p)| {
                let m: serde_json::Map<String, serde_json::Value> = labels
                    .iter()
                    .zip(p)
                    .filter(|(_, &x)| x > 0.0)
                    .map(|(l, &x)| (l.clone(), serde_json::json!(x)))
                    .collect();
                (n.clone(), serde_json::Value::Object(m))
            })
            .collect()
    };
    serde_json::json!({
        "u": side(lc.u_names(), lc.d_labels(), &s.u_probs),
        "v": side(lc.v_names(), lc.e_labels(), &s.v_probs),
        "kappa": s.kappa,
        "leftover": s.leftover,
    })
}

/// Labelings as vertex-name to label-name maps.
pub fn labeling_json(lc: &LabelCoverInstance, h_d: &[usize], h_e: &[usize]) -> serde_json::Value {
    let u: BTreeMap<&str, &str> = lc.u_names().iter().map(String::as_str).zip(h_d.iter().map(|&d| lc.d_labels()[d].as_str())).collect();
    let v: BTreeMap<&str, &str> = lc.v_names().iter().map(String::as_str).zip(h_e.iter().map(|&e| lc.e_labels()[e].as_str())).collect();
    serde_json::json!({ "hD": u, "hE": v })
}

/// `"p/q"` for a rational, for hand-built reports.
pub fn rat(r: &Rational) -> serde_json::Value {
    serde_json::Value::String(rational::format(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip<T: Serialize + DeserializeOwned>(value: &T) {
        let first = canonical(value).unwrap();
        let parsed: T = serde_json::from_str(&first).unwrap();
        assert_eq!(canonical(&parsed).unwrap(), first);
    }

    #[test]
    fn group_files_round_trip() {
        for name in catalog::GROUP_NAMES {
            let g = catalog::group(name).unwrap();
            let file = GroupFile::from_group(&g);
            round_trip(&file);
            assert_eq!(file.to_group().unwrap(), g);
        }
    }

    #[test]
    fn template_and_lc_round_trip() {
        for name in catalog::TEMPLATE_NAMES {
            let t = catalog::template(name).unwrap();
            let file = TemplateFile::from_template(&t);
            round_trip(&file);
            let back = file.to_template(Path::new(".")).unwrap();
            assert_eq!(back.phi.pairs(), t.phi.pairs());
        }
        for name in catalog::LC_NAMES {
            let lc = catalog::lc_instance(name).unwrap();
            let file = LcFile::from_instance(&lc);
            round_trip(&file);
            assert_eq!(file.to_instance().unwrap(), lc);
        }
    }

    #[test]
    fn system_weights_are_lowest_terms() {
        let t = catalog::template("id-Z2").unwrap();
        let eq = |w: &str| EquationFile {
            terms: vec![("x".into(), 1), ("y".into(), 1), ("z".into(), -1)],
            rhs: 0,
            weight: w.into(),
        };
        let file = SystemFile {
            template: "catalog:id-Z2".into(),
            variables: vec!["x".into(), "y".into(), "z".into()],
            equations: vec![eq("2/4"), eq("3/6")],
        };
        let system = file.to_system(Path::new(".")).unwrap();
        assert_eq!(system.template.phi.pairs(), t.phi.pairs());
        let back = SystemFile::from_system(&system, "catalog:id-Z2");
        assert_eq!(back.equations[0].weight, "1/2");
        round_trip(&back);
    }

    #[test]
    fn rejects_bad_inputs() {
        let file = GroupFile { name: "bad".into(), elements: vec!["a".into(), "b".into()], table: vec![vec![0, 1], vec![0, 1]] };
        assert!(file.to_group().is_err());
        let mut lc = LcFile::from_instance(&catalog::lc_one_edge());
        lc.edges[0].pi.remove("d1");
        assert!(lc.to_instance().is_err());
    }
}
