//! The six integration strategies.
//!
//! Strategies are defined on name sets; the functions here also rebuild a
//! tree so every output is a loadable model.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compare::Matching;
use crate::model::{
    ChildClass, ConstraintKind, CrossTreeConstraint, Feature, FeatureId, FeatureModel, ModelError,
    RelationshipKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeStrategy {
    /// The base model unchanged.
    Common,
    /// Union.
    Additional,
    /// Intersection.
    Formal,
    /// Difference: base minus matched.
    Partial,
    /// Complement: other minus matched.
    Complementary,
    /// Union of two models that share nothing.
    Null,
}

impl MergeStrategy {
    pub const ALL: [MergeStrategy; 6] =
        [Self::Common, Self::Additional, Self::Formal, Self::Partial, Self::Complementary, Self::Null];

    /// Strategies produced by an automatic run, in output order.
    pub const AUTOMATIC: [MergeStrategy; 4] =
        [Self::Additional, Self::Formal, Self::Partial, Self::Complementary];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Common => "common",
            Self::Additional => "additional",
            Self::Formal => "formal",
            Self::Partial => "partial",
            Self::Complementary => "complementary",
            Self::Null => "null",
        }
    }
}

impl fmt::Display for MergeStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for MergeStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "common" => Ok(Self::Common),
            "additional" | "union" => Ok(Self::Additional),
            "formal" | "intersection" => Ok(Self::Formal),
            "partial" | "difference" => Ok(Self::Partial),
            "complementary" | "complement" => Ok(Self::Complementary),
            "null" => Ok(Self::Null),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MergeError {
    #[error("the null strategy needs models with no matched features ({pairs} pairs found)")]
    IncompatibleStrategy { strategy: MergeStrategy, pairs: usize },
    #[error("input model is not well formed: {0}")]
    Model(#[from] ModelError),
}

/// A merged model. When the strategy's feature set leaves out the base root, a
/// synthetic root carrying the base root's name holds the result together; it
/// is not part of the strategy's name set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergeOutput {
    pub strategy: MergeStrategy,
    pub model: FeatureModel,
    pub synthetic_root: bool,
}

impl MergeOutput {
    /// The strategy's feature-name set.
    pub fn names(&self) -> std::collections::BTreeSet<String> {
        let mut names = self.model.names();
        if self.synthetic_root {
            names.remove(self.model.name_of(self.model.root()));
        }
        names
    }

    /// Names in model preorder, synthetic root excluded.
    pub fn ordered_names(&self) -> Vec<String> {
        self.model
            .preorder()
            .into_iter()
            .filter(|id| !(self.synthetic_root && *id == self.model.root()))
            .map(|id| self.model.name_of(id).to_owned())
            .collect()
    }
}

/// Values that replace a base feature's own when it is copied into a union.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Override {
    pub name: Option<String>,
    pub kind: Option<RelationshipKind>,
}

/// Runs one strategy over two models and their matching.
pub fn integrate(
    base: &FeatureModel,
    other: &FeatureModel,
    matching: &Matching,
    strategy: MergeStrategy,
) -> Result<MergeOutput, MergeError> {
    base.ensure_well_formed()?;
    other.ensure_well_formed()?;
    let model = |model, synthetic_root| Ok(MergeOutput { strategy, model, synthetic_root });
    match strategy {
        MergeStrategy::Common => model(base.clone(), false),
        MergeStrategy::Additional => model(union(base, other, matching, &HashMap::new()), false),
        MergeStrategy::Null => {
            if !matching.is_empty() {
                return Err(MergeError::IncompatibleStrategy { strategy, pairs: matching.pairs.len() });
            }
            model(union(base, other, matching, &HashMap::new()), false)
        }
        MergeStrategy::Formal => {
            let keep: HashSet<_> = matching.pairs.iter().map(|p| p.base).collect();
            let (m, synthetic) = project(base, &keep, base);
            model(m, synthetic)
        }
        MergeStrategy::Partial => {
            let keep: HashSet<_> = matching.unmatched_base.iter().copied().collect();
            let (m, synthetic) = project(base, &keep, base);
            model(m, synthetic)
        }
        MergeStrategy::Complementary => {
            let keep: HashSet<_> = matching.unmatched_other.iter().copied().collect();
            let (m, synthetic) = project(other, &keep, base);
            model(m, synthetic)
        }
    }
}

/// Additional, Formal, Partial and Complementary, in that order.
pub fn auto_integrate(
    base: &FeatureModel,
    other: &FeatureModel,
    matching: &Matching,
) -> Result<[MergeOutput; 4], MergeError> {
    let [a, b, c, d] = MergeStrategy::AUTOMATIC;
    Ok([
        integrate(base, other, matching, a)?,
        integrate(base, other, matching, b)?,
        integrate(base, other, matching, c)?,
        integrate(base, other, matching, d)?,
    ])
}

/// Base tree intact, each unmatched other feature hung under the image of its
/// other-side parent, and the other root under the merged root when it is
/// unmatched itself.
pub(crate) fn union(
    base: &FeatureModel,
    other: &FeatureModel,
    matching: &Matching,
    overrides: &HashMap<FeatureId, Override>,
) -> FeatureModel {
    let mut asm = Assembly::default();
    let mut base_img = HashMap::new();
    for id in base.preorder() {
        let f = base.feature(id).expect("preorder yields known ids");
        let ov = overrides.get(&id);
        let name = ov.and_then(|o| o.name.clone()).unwrap_or_else(|| f.name.clone());
        let kind = ov.and_then(|o| o.kind).unwrap_or(f.rel_kind);
        let parent = f.parent.map(|p| base_img[&p]);
        base_img.insert(id, asm.add(parent, name, kind, f.is_abstract, true));
    }

    let backward = matching.backward();
    let mut other_img: HashMap<FeatureId, usize> =
        backward.iter().map(|(o, b)| (*o, base_img[b])).collect();
    for id in other.preorder() {
        if other_img.contains_key(&id) {
            continue;
        }
        let f = other.feature(id).expect("preorder yields known ids");
        let (parent, kind) = match f.parent {
            Some(p) => (other_img[&p], f.rel_kind),
            None => (0, RelationshipKind::Optional),
        };
        other_img.insert(id, asm.add(Some(parent), f.name.clone(), kind, f.is_abstract, false));
    }

    asm.constraints_from(base, &base_img);
    asm.constraints_from(other, &other_img);
    asm.finish(base.name())
}

/// Keeps only `keep` from `source`, re-parenting orphans to their nearest
/// kept ancestor. Returns the model and whether its root is synthetic.
fn project(source: &FeatureModel, keep: &HashSet<FeatureId>, base: &FeatureModel) -> (FeatureModel, bool) {
    let mut asm = Assembly::default();
    let synthetic = !keep.contains(&source.root());
    if synthetic {
        asm.add(None, base.name_of(base.root()).to_owned(), RelationshipKind::Mandatory, false, true);
    }
    let mut img: HashMap<FeatureId, usize> = HashMap::new();
    for id in source.preorder() {
        if !keep.contains(&id) {
            continue;
        }
        let f = source.feature(id).expect("preorder yields known ids");
        let mut up = f.parent;
        let mut direct = true;
        while let Some(p) = up {
            if img.contains_key(&p) {
                break;
            }
            direct = false;
            up = source.feature(p).and_then(|a| a.parent);
        }
        let (parent, kind, anchor) = match up {
            Some(p) => (Some(img[&p]), f.rel_kind, direct),
            None if id == source.root() => (None, f.rel_kind, true),
            None => (Some(0), RelationshipKind::Optional, false),
        };
        img.insert(id, asm.add(parent, f.name.clone(), kind, f.is_abstract, anchor));
    }
    asm.constraints_from(source, &img);
    let name = if synthetic { base.name() } else { source.name() };
    (asm.finish(name), synthetic)
}

#[derive(Debug)]
struct Node {
    name: String,
    kind: RelationshipKind,
    is_abstract: bool,
    parent: Option<usize>,
    children: Vec<usize>,
    /// Keeps its kind when siblings disagree.
    anchor: bool,
}

/// A model under construction; node 0 is the root.
#[derive(Debug, Default)]
struct Assembly {
    nodes: Vec<Node>,
    names: HashSet<String>,
    constraints: Vec<(ConstraintKind, usize, usize)>,
}

impl Assembly {
    fn add(&mut self, parent: Option<usize>, name: String, kind: RelationshipKind, is_abstract: bool, anchor: bool) -> usize {
        let mut unique = name.clone();
        let mut n = 2;
        while !self.names.insert(unique.clone()) {
            unique = format!("{name} ({n})");
            n += 1;
        }
        let idx = self.nodes.len();
        self.nodes.push(Node { name: unique, kind, is_abstract, parent, children: Vec::new(), anchor });
        if let Some(p) = parent {
            self.nodes[p].children.push(idx);
        }
        idx
    }

    fn constraints_from(&mut self, model: &FeatureModel, img: &HashMap<FeatureId, usize>) {
        for c in model.constraints() {
            let (Some(&a), Some(&b)) = (img.get(&c.lhs), img.get(&c.rhs)) else { continue };
            if a == b {
                continue;
            }
            let dup = self.constraints.iter().any(|&(k, x, y)| {
                k == c.kind && ((x, y) == (a, b) || (k == ConstraintKind::Excludes && (x, y) == (b, a)))
            });
            if !dup {
                self.constraints.push((c.kind, a, b));
            }
        }
    }

    /// Makes every sibling list agree on one class: the first anchored
    /// child's, else the first child's.
    fn normalize(&mut self) {
        for p in 0..self.nodes.len() {
            let children = self.nodes[p].children.clone();
            let Some(lead) = children.iter().find(|c| self.nodes[**c].anchor).or(children.first()) else {
                continue;
            };
            let class = self.nodes[*lead].kind.class();
            for c in children {
                let node = &mut self.nodes[c];
                node.kind = match (class, node.kind.class()) {
                    (a, b) if a == b => node.kind,
                    (ChildClass::And, _) => RelationshipKind::Optional,
                    (ChildClass::Or, _) => RelationshipKind::OrMember,
                    (ChildClass::Xor, _) => RelationshipKind::XorMember,
                };
            }
        }
        if let Some(root) = self.nodes.first_mut() {
            root.kind = RelationshipKind::Mandatory;
        }
    }

    fn finish(mut self, name: &str) -> FeatureModel {
        self.normalize();
        let id = |i: usize| FeatureId(i as u32);
        let features = self.nodes.into_iter().enumerate().map(|(i, n)| Feature {
            id: id(i),
            name: n.name,
            parent: n.parent.map(id),
            rel_kind: n.kind,
            is_abstract: n.is_abstract,
            children: n.children.into_iter().map(id).collect(),
        });
        let constraints = self
            .constraints
            .into_iter()
            .map(|(kind, a, b)| CrossTreeConstraint { kind, lhs: id(a), rhs: id(b) })
            .collect();
        FeatureModel::from_parts(name, FeatureId(0), features, constraints)
    }
}
