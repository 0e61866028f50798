//! Feature-model domain types, well-formedness checks and tree traversal.
//!
//! A [`FeatureModel`] is a rooted tree of [`Feature`]s plus an ordered list of
//! cross-tree constraints. OR/XOR groups are not explicit nodes: every child of
//! a group parent carries the same group [`RelationshipKind`], so a parent's
//! children are either all `Mandatory`/`Optional`, all `OrMember`, or all
//! `XorMember`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque feature identifier, unique within one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureId(pub u32);

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationshipKind {
    Mandatory,
    Optional,
    /// Inclusive alternative: at least one member when the parent is selected.
    OrMember,
    /// Exclusive alternative: exactly one member when the parent is selected.
    XorMember,
}

impl RelationshipKind {
    pub fn is_group(self) -> bool {
        matches!(self, Self::OrMember | Self::XorMember)
    }

    /// Short notation label (`Obr`, `Opc`, `Ain`, `Aex`).
    pub fn notation(self) -> &'static str {
        match self {
            Self::Mandatory => "Obr",
            Self::Optional => "Opc",
            Self::OrMember => "Ain",
            Self::XorMember => "Aex",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mandatory => "mandatory",
            Self::Optional => "optional",
            Self::OrMember => "or",
            Self::XorMember => "xor",
        }
    }

    /// Which sibling class a kind belongs to. Siblings must share a class.
    pub(crate) fn class(self) -> ChildClass {
        match self {
            Self::Mandatory | Self::Optional => ChildClass::And,
            Self::OrMember => ChildClass::Or,
            Self::XorMember => ChildClass::Xor,
        }
    }
}

impl fmt::Display for RelationshipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ChildClass {
    And,
    Or,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// Directed: selecting `lhs` forces `rhs`.
    Requires,
    /// Symmetric: `lhs` and `rhs` never appear together.
    Excludes,
}

impl ConstraintKind {
    pub fn notation(self) -> &'static str {
        match self {
            Self::Requires => "Dep",
            Self::Excludes => "Exc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossTreeConstraint {
    pub kind: ConstraintKind,
    pub lhs: FeatureId,
    pub rhs: FeatureId,
}

impl CrossTreeConstraint {
    pub fn requires(lhs: FeatureId, rhs: FeatureId) -> Self {
        Self { kind: ConstraintKind::Requires, lhs, rhs }
    }

    pub fn excludes(lhs: FeatureId, rhs: FeatureId) -> Self {
        Self { kind: ConstraintKind::Excludes, lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub id: FeatureId,
    pub name: String,
    pub parent: Option<FeatureId>,
    pub rel_kind: RelationshipKind,
    #[serde(rename = "abstract")]
    pub is_abstract: bool,
    pub children: Vec<FeatureId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// A broken well-formedness rule, naming the offending feature or constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("root {0} does not exist")]
    MissingRoot(FeatureId),
    #[error("root {0} has a parent")]
    RootHasParent(FeatureId),
    #[error("feature {0} has no parent but is not the root")]
    ExtraRoot(FeatureId),
    #[error("feature {feature} names unknown parent {parent}")]
    UnknownParent { feature: FeatureId, parent: FeatureId },
    #[error("feature {feature} lists unknown child {child}")]
    UnknownChild { feature: FeatureId, child: FeatureId },
    #[error("parent and child links disagree for {parent} -> {child}")]
    LinkMismatch { parent: FeatureId, child: FeatureId },
    #[error("feature {0} is not reachable from the root")]
    Unreachable(FeatureId),
    #[error("duplicate feature name {0:?}")]
    DuplicateName(String),
    #[error("feature {0} has a blank name")]
    BlankName(FeatureId),
    #[error("root {0} must be mandatory")]
    RootNotMandatory(FeatureId),
    #[error("children of {0} mix relationship groups")]
    MixedGroupKinds(FeatureId),
    #[error("group under {parent} has a single member {member}")]
    SingleMemberGroup { parent: FeatureId, member: FeatureId },
    #[error("constraint #{index} references missing feature {missing}")]
    DanglingConstraint { index: usize, missing: FeatureId },
    #[error("constraint #{index} relates {feature} to itself")]
    SelfConstraint { index: usize, feature: FeatureId },
}

impl Violation {
    pub fn severity(&self) -> Severity {
        match self {
            Self::SingleMemberGroup { .. } => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown feature {0}")]
    UnknownFeature(FeatureId),
    #[error("unknown feature name {0:?}")]
    UnknownName(String),
    #[error("model is not well-formed: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One relationship notation: the edge above a non-root feature, or a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "slot", rename_all = "snake_case")]
pub enum RelationshipSlot {
    Edge { feature: FeatureId, kind: RelationshipKind },
    Constraint { index: usize, kind: ConstraintKind },
}

impl RelationshipSlot {
    pub fn notation(&self) -> &'static str {
        match self {
            Self::Edge { kind, .. } => kind.notation(),
            Self::Constraint { kind, .. } => kind.notation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureModel {
    name: String,
    root: FeatureId,
    features: BTreeMap<FeatureId, Feature>,
    constraints: Vec<CrossTreeConstraint>,
}

impl FeatureModel {
    /// Assembles a model without checking it. Use [`FeatureModel::validate`]
    /// before handing the result to comparison or merge code.
    pub fn from_parts(
        name: impl Into<String>,
        root: FeatureId,
        features: impl IntoIterator<Item = Feature>,
        constraints: Vec<CrossTreeConstraint>,
    ) -> Self {
        Self {
            name: name.into(),
            root,
            features: features.into_iter().map(|f| (f.id, f)).collect(),
            constraints,
        }
    }

    pub fn builder(root_name: impl Into<String>) -> ModelBuilder {
        ModelBuilder::new(root_name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn root(&self) -> FeatureId {
        self.root
    }

    pub fn root_feature(&self) -> &Feature {
        &self.features[&self.root]
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn feature(&self, id: FeatureId) -> Option<&Feature> {
        self.features.get(&id)
    }

    pub fn features(&self) -> impl Iterator<Item = &Feature> {
        self.features.values()
    }

    pub fn constraints(&self) -> &[CrossTreeConstraint] {
        &self.constraints
    }

    pub fn find(&self, name: &str) -> Option<FeatureId> {
        self.features.values().find(|f| f.name == name).map(|f| f.id)
    }

    pub fn name_of(&self, id: FeatureId) -> &str {
        self.features.get(&id).map_or("", |f| f.name.as_str())
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.features.values().map(|f| f.name.clone()).collect()
    }

    /// Distance from the root; the root sits at depth 0.
    pub fn depth(&self, id: FeatureId) -> Result<usize, ModelError> {
        let mut current = self.features.get(&id).ok_or(ModelError::UnknownFeature(id))?;
        let mut depth = 0;
        while let Some(parent) = current.parent {
            depth += 1;
            if depth > self.features.len() {
                // cyclic parent chain; validate() reports it
                break;
            }
            current = self.features.get(&parent).ok_or(ModelError::UnknownFeature(parent))?;
        }
        Ok(depth)
    }

    /// Root first, then each child subtree in stored order.
    pub fn preorder(&self) -> Vec<FeatureId> {
        let mut order = Vec::with_capacity(self.features.len());
        let mut seen = HashSet::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let Some(feature) = self.features.get(&id) else { continue };
            if !seen.insert(id) {
                continue;
            }
            order.push(id);
            stack.extend(feature.children.iter().rev().copied());
        }
        order
    }

    /// Tree edges (preorder, root excluded) followed by constraints in order.
    pub fn relationship_slots(&self) -> Vec<RelationshipSlot> {
        let edges = self.preorder().into_iter().filter(|id| *id != self.root).map(|id| {
            RelationshipSlot::Edge { feature: id, kind: self.features[&id].rel_kind }
        });
        let constraints = self
            .constraints
            .iter()
            .enumerate()
            .map(|(index, c)| RelationshipSlot::Constraint { index, kind: c.kind });
        edges.chain(constraints).collect()
    }

    /// Relationship count as drawn in a diagram: an OR/XOR group counts once
    /// per parent, every mandatory/optional edge and constraint once.
    pub fn notation_count(&self) -> usize {
        let tree: usize = self
            .features
            .values()
            .map(|f| {
                let grouped = f.children.iter().any(|c| self.features[c].rel_kind.is_group());
                let solitary =
                    f.children.iter().filter(|c| !self.features[c].rel_kind.is_group()).count();
                solitary + usize::from(grouped)
            })
            .sum();
        tree + self.constraints.len()
    }

    /// The group kind shared by `id`'s children, if they form an OR/XOR group.
    pub fn group_kind(&self, id: FeatureId) -> Option<RelationshipKind> {
        let feature = self.features.get(&id)?;
        feature
            .children
            .first()
            .map(|c| self.features[c].rel_kind)
            .filter(|k| k.is_group())
    }

    /// Every feature in preorder along with its depth.
    pub fn depths(&self) -> BTreeMap<FeatureId, usize> {
        let mut depths = BTreeMap::new();
        for id in self.preorder() {
            let d = match self.features[&id].parent {
                Some(p) => depths.get(&p).map_or(0, |d| d + 1),
                None => 0,
            };
            depths.insert(id, d);
        }
        depths
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let Some(root) = self.features.get(&self.root) else {
            out.push(Violation::MissingRoot(self.root));
            return out;
        };
        if root.parent.is_some() {
            out.push(Violation::RootHasParent(self.root));
        }
        if root.rel_kind != RelationshipKind::Mandatory {
            out.push(Violation::RootNotMandatory(self.root));
        }

        for f in self.features.values() {
            if f.name.trim().is_empty() {
                out.push(Violation::BlankName(f.id));
            }
            match f.parent {
                None if f.id != self.root => out.push(Violation::ExtraRoot(f.id)),
                Some(p) => match self.features.get(&p) {
                    None => out.push(Violation::UnknownParent { feature: f.id, parent: p }),
                    Some(parent) if !parent.children.contains(&f.id) => {
                        out.push(Violation::LinkMismatch { parent: p, child: f.id })
                    }
                    Some(_) => {}
                },
                None => {}
            }
            for c in &f.children {
                match self.features.get(c) {
                    None => out.push(Violation::UnknownChild { feature: f.id, child: *c }),
                    Some(child) if child.parent != Some(f.id) => {
                        out.push(Violation::LinkMismatch { parent: f.id, child: *c })
                    }
                    Some(_) => {}
                }
            }
            let classes: Vec<_> = f
                .children
                .iter()
                .filter_map(|c| self.features.get(c))
                .map(|c| c.rel_kind.class())
                .collect();
            if classes.windows(2).any(|w| w[0] != w[1]) {
                out.push(Violation::MixedGroupKinds(f.id));
            } else if f.children.len() == 1 && classes.first().is_some_and(|c| *c != ChildClass::And)
            {
                out.push(Violation::SingleMemberGroup { parent: f.id, member: f.children[0] });
            }
        }

        let reachable: HashSet<_> = self.preorder().into_iter().collect();
        for id in self.features.keys() {
            if !reachable.contains(id) {
                out.push(Violation::Unreachable(*id));
            }
        }

        let mut seen = HashSet::new();
        let mut reported = HashSet::new();
        for f in self.features.values() {
            if !seen.insert(f.name.as_str()) && reported.insert(f.name.as_str()) {
                out.push(Violation::DuplicateName(f.name.clone()));
            }
        }

        for (index, c) in self.constraints.iter().enumerate() {
            for end in [c.lhs, c.rhs] {
                if !self.features.contains_key(&end) {
                    out.push(Violation::DanglingConstraint { index, missing: end });
                }
            }
            if c.lhs == c.rhs {
                out.push(Violation::SelfConstraint { index, feature: c.lhs });
            }
        }
        out
    }

    pub fn is_well_formed(&self) -> bool {
        self.validate().iter().all(|v| v.severity() != Severity::Error)
    }

    /// Errors out unless every hard invariant holds.
    pub fn ensure_well_formed(&self) -> Result<(), ModelError> {
        let errors: Vec<_> =
            self.validate().into_iter().filter(|v| v.severity() == Severity::Error).collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(errors))
        }
    }

    /// Equality up to identifiers and model label: same names, kinds, child
    /// order, abstract flags and constraints.
    pub fn same_structure(&self, other: &FeatureModel) -> bool {
        fn node(m: &FeatureModel, id: FeatureId, out: &mut Vec<(String, RelationshipKind, bool, usize)>) {
            let f = &m.features[&id];
            out.push((f.name.clone(), f.rel_kind, f.is_abstract, f.children.len()));
            for c in &f.children {
                node(m, *c, out);
            }
        }
        let flatten = |m: &FeatureModel| {
            let mut out = Vec::new();
            node(m, m.root, &mut out);
            out
        };
        let named_constraints = |m: &FeatureModel| {
            m.constraints
                .iter()
                .map(|c| (c.kind, m.name_of(c.lhs).to_owned(), m.name_of(c.rhs).to_owned()))
                .collect::<Vec<_>>()
        };
        flatten(self) == flatten(other) && named_constraints(self) == named_constraints(other)
    }
}

/// Incremental construction with sequential identifiers.
#[derive(Debug, Clone)]
pub struct ModelBuilder {
    name: String,
    features: Vec<Feature>,
    constraints: Vec<CrossTreeConstraint>,
}

impl ModelBuilder {
    pub fn new(root_name: impl Into<String>) -> Self {
        let root_name = root_name.into();
        Self {
            name: root_name.clone(),
            features: vec![Feature {
                id: FeatureId(0),
                name: root_name,
                parent: None,
                rel_kind: RelationshipKind::Mandatory,
                is_abstract: false,
                children: Vec::new(),
            }],
            constraints: Vec::new(),
        }
    }

    pub fn root(&self) -> FeatureId {
        FeatureId(0)
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Appends a child under `parent`. Panics if `parent` was not produced by
    /// this builder.
    pub fn child(&mut self, parent: FeatureId, name: impl Into<String>, kind: RelationshipKind) -> FeatureId {
        let id = FeatureId(self.features.len() as u32);
        self.features[parent.0 as usize].children.push(id);
        self.features.push(Feature {
            id,
            name: name.into(),
            parent: Some(parent),
            rel_kind: kind,
            is_abstract: false,
            children: Vec::new(),
        });
        id
    }

    pub fn mandatory(&mut self, parent: FeatureId, name: impl Into<String>) -> FeatureId {
        self.child(parent, name, RelationshipKind::Mandatory)
    }

    pub fn optional(&mut self, parent: FeatureId, name: impl Into<String>) -> FeatureId {
        self.child(parent, name, RelationshipKind::Optional)
    }

    pub fn or_member(&mut self, parent: FeatureId, name: impl Into<String>) -> FeatureId {
        self.child(parent, name, RelationshipKind::OrMember)
    }

    pub fn xor_member(&mut self, parent: FeatureId, name: impl Into<String>) -> FeatureId {
        self.child(parent, name, RelationshipKind::XorMember)
    }

    pub fn set_abstract(&mut self, id: FeatureId, value: bool) -> &mut Self {
        self.features[id.0 as usize].is_abstract = value;
        self
    }

    pub fn requires(&mut self, lhs: FeatureId, rhs: FeatureId) -> &mut Self {
        self.constraints.push(CrossTreeConstraint::requires(lhs, rhs));
        self
    }

    pub fn excludes(&mut self, lhs: FeatureId, rhs: FeatureId) -> &mut Self {
        self.constraints.push(CrossTreeConstraint::excludes(lhs, rhs));
        self
    }

    /// Builds the model; fails when a hard invariant is broken. Warning-level
    /// violations (single-member groups) are tolerated.
    pub fn build(self) -> Result<FeatureModel, ModelError> {
        let model = self.build_unchecked();
        model.ensure_well_formed()?;
        Ok(model)
    }

    pub fn build_unchecked(self) -> FeatureModel {
        FeatureModel::from_parts(self.name, FeatureId(0), self.features, self.constraints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> FeatureModel {
        let mut b = FeatureModel::builder("A");
        let a = b.root();
        let bb = b.mandatory(a, "B");
        b.mandatory(bb, "C");
        b.build().unwrap()
    }

    #[test]
    fn minimal_chain_is_well_formed() {
        let mut b = FeatureModel::builder("A");
        let root = b.root();
        b.mandatory(root, "B");
        let m = b.build().unwrap();
        assert!(m.validate().is_empty());
    }

    #[test]
    fn duplicate_names_are_reported() {
        let mut b = FeatureModel::builder("A");
        let root = b.root();
        b.mandatory(root, "B");
        b.optional(root, "B");
        let m = b.build_unchecked();
        assert_eq!(m.validate(), vec![Violation::DuplicateName("B".into())]);
    }

    #[test]
    fn dangling_requires_is_reported() {
        let mut b = FeatureModel::builder("A");
        let root = b.root();
        let x = b.optional(root, "X");
        b.requires(x, FeatureId(42));
        let m = b.build_unchecked();
        assert_eq!(
            m.validate(),
            vec![Violation::DanglingConstraint { index: 0, missing: FeatureId(42) }]
        );
    }

    #[test]
    fn self_constraint_and_blank_name() {
        let mut b = FeatureModel::builder("A");
        let root = b.root();
        let x = b.optional(root, "  ");
        b.excludes(x, x);
        let v = b.build_unchecked().validate();
        assert!(v.contains(&Violation::BlankName(x)));
        assert!(v.contains(&Violation::SelfConstraint { index: 0, feature: x }));
    }

    #[test]
    fn cycles_and_extra_roots() {
        let f = |id, parent: Option<u32>, children: Vec<u32>| Feature {
            id: FeatureId(id),
            name: format!("n{id}"),
            parent: parent.map(FeatureId),
            rel_kind: RelationshipKind::Optional,
            is_abstract: false,
            children: children.into_iter().map(FeatureId).collect(),
        };
        let mut root = f(0, None, vec![]);
        root.rel_kind = RelationshipKind::Mandatory;
        // 1 and 2 point at each other, detached from the root
        let m = FeatureModel::from_parts("m", FeatureId(0), [root, f(1, Some(2), vec![2]), f(2, Some(1), vec![1])], vec![]);
        let v = m.validate();
        assert!(v.contains(&Violation::Unreachable(FeatureId(1))));
        assert!(v.contains(&Violation::Unreachable(FeatureId(2))));
        // depth must terminate on the cycle
        assert!(m.depth(FeatureId(1)).is_ok());

        let mut root = f(0, None, vec![]);
        root.rel_kind = RelationshipKind::Mandatory;
        let m = FeatureModel::from_parts("m", FeatureId(0), [root, f(1, None, vec![])], vec![]);
        assert!(m.validate().contains(&Violation::ExtraRoot(FeatureId(1))));
    }

    #[test]
    fn mixed_groups_are_errors_single_member_groups_warnings() {
        let mut b = FeatureModel::builder("A");
        let root = b.root();
        b.or_member(root, "B");
        b.xor_member(root, "C");
        let v = b.build_unchecked().validate();
        assert_eq!(v, vec![Violation::MixedGroupKinds(FeatureId(0))]);

        let mut b = FeatureModel::builder("A");
        let root = b.root();
        let only = b.xor_member(root, "B");
        let m = b.build().expect("single-member groups only warn");
        let v = m.validate();
        assert_eq!(v, vec![Violation::SingleMemberGroup { parent: root, member: only }]);
        assert_eq!(v[0].severity(), Severity::Warning);
    }

    #[test]
    fn depth_of_root_and_grandchild() {
        let m = chain();
        assert_eq!(m.depth(m.root()).unwrap(), 0);
        assert_eq!(m.depth(m.find("C").unwrap()).unwrap(), 2);
        assert_eq!(m.depth(FeatureId(99)), Err(ModelError::UnknownFeature(FeatureId(99))));
    }

    #[test]
    fn preorder_respects_child_order() {
        let m = FeatureModel::builder("R").build().unwrap();
        assert_eq!(m.preorder(), vec![m.root()]);

        let mut b = FeatureModel::builder("R");
        let r = b.root();
        let x = b.optional(r, "X");
        let y = b.optional(r, "Y");
        let xc = b.optional(x, "X1");
        let m = b.build().unwrap();
        assert_eq!(m.preorder(), vec![r, x, xc, y]);
    }

    #[test]
    fn slot_count_law() {
        assert!(FeatureModel::builder("R").build().unwrap().relationship_slots().is_empty());
        let mut b = FeatureModel::builder("R");
        let r = b.root();
        let x = b.optional(r, "X");
        let y = b.mandatory(r, "Y");
        b.requires(x, y);
        let m = b.build().unwrap();
        let slots = m.relationship_slots();
        assert_eq!(slots.len(), m.len() - 1 + m.constraints().len());
        assert_eq!(slots.iter().map(|s| s.notation()).collect::<Vec<_>>(), ["Opc", "Obr", "Dep"]);
    }

    #[test]
    fn notation_count_counts_groups_once() {
        let mut b = FeatureModel::builder("R");
        let r = b.root();
        let p = b.mandatory(r, "P");
        b.optional(r, "Q");
        for n in ["E", "F", "G"] {
            b.xor_member(p, n);
        }
        let m = b.build().unwrap();
        assert_eq!(m.notation_count(), 3);
        assert_eq!(m.relationship_slots().len(), 5);
    }

    #[test]
    fn structure_ignores_ids() {
        let a = chain();
        let mut b = FeatureModel::builder("A");
        let r = b.root();
        let x = b.mandatory(r, "B");
        b.mandatory(x, "C");
        let b = b.build().unwrap().with_name("other");
        assert!(a.same_structure(&b));
        let mut c = FeatureModel::builder("A");
        let r = c.root();
        let x = c.optional(r, "B");
        c.mandatory(x, "C");
        assert!(!a.same_structure(&c.build().unwrap()));
    }
}
