//! Propositional semantics of a feature model and brute-force configuration
//! enumeration.
//!
//! Two independent semantics live here: [`to_propositional`] translates the
//! tree into formulas, while [`is_valid_configuration`] checks the tree rules
//! directly. Enumeration uses the latter; tests cross-check the two.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ConstraintKind, FeatureModel, RelationshipKind};

/// Largest model [`enumerate_configurations`] will search.
pub const MAX_ENUMERATION_FEATURES: usize = 20;
pub const DEFAULT_CONFIGURATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Self::Var(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Self::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Self::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Self::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, value: &impl Fn(&str) -> bool) -> bool {
        match self {
            Self::Var(v) => value(v),
            Self::Not(f) => !f.eval(value),
            Self::And(fs) => fs.iter().all(|f| f.eval(value)),
            Self::Or(fs) => fs.iter().any(|f| f.eval(value)),
            Self::Implies(a, b) => !a.eval(value) || b.eval(value),
            Self::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    /// Every variable name mentioned.
    pub fn variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::Var(v) => {
                    out.insert(v.clone());
                }
                Formula::Not(a) => walk(a, out),
                Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| walk(f, out)),
                Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, fs: &[Formula], op: &str| {
            f.write_str("(")?;
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            Self::Var(v) => f.write_str(v),
            Self::Not(a) => write!(f, "¬{a}"),
            Self::And(fs) => join(f, fs, "∧"),
            Self::Or(fs) => join(f, fs, "∨"),
            Self::Implies(a, b) => write!(f, "({a} → {b})"),
            Self::Iff(a, b) => write!(f, "({a} ↔ {b})"),
        }
    }
}

/// A conjunction of clauses over feature-name variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropositionalFormula {
    pub variables: BTreeSet<String>,
    pub clauses: Vec<Formula>,
}

impl PropositionalFormula {
    pub fn is_satisfied_by(&self, selected: &BTreeSet<String>) -> bool {
        let value = |v: &str| selected.contains(v);
        self.clauses.iter().all(|c| c.eval(&value))
    }
}

impl fmt::Display for PropositionalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// One product: the set of selected feature names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Configuration {
    pub selected: BTreeSet<String>,
}

impl Configuration {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { selected: names.into_iter().map(Into::into).collect() }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.selected.contains(name)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.selected.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(n)?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unknown feature `{0}` in configuration")]
    UnknownFeature(String),
    #[error("more than {cap} configurations (stopped at {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("{count} features is too many to enumerate (limit {limit})")]
    TooManyFeatures { count: usize, limit: usize },
}

/// Translates the model into clauses, one group of clauses per parent.
pub fn to_propositional(model: &FeatureModel) -> PropositionalFormula {
    let var = |id| Formula::var(model.name_of(id));
    let mut clauses = vec![var(model.root())];
    for id in model.preorder() {
        let f = model.feature(id).expect("preorder yields known ids");
        let p = var(id);
        let mut ors = Vec::new();
        let mut xors = Vec::new();
        for c in &f.children {
            let kind = model.feature(*c).expect("child exists").rel_kind;
            match kind {
                RelationshipKind::Mandatory => clauses.push(Formula::iff(p.clone(), var(*c))),
                RelationshipKind::Optional => clauses.push(Formula::implies(var(*c), p.clone())),
                RelationshipKind::OrMember => ors.push(*c),
                RelationshipKind::XorMember => xors.push(*c),
            }
        }
        if !ors.is_empty() {
            clauses.push(Formula::iff(p.clone(), Formula::Or(ors.iter().map(|c| var(*c)).collect())));
        }
        if !xors.is_empty() {
            for ci in &xors {
                let mut rhs = vec![p.clone()];
                rhs.extend(xors.iter().filter(|cj| *cj != ci).map(|cj| Formula::not(var(*cj))));
                clauses.push(Formula::implies(var(*ci), Formula::And(rhs)));
            }
            clauses.push(Formula::implies(p.clone(), Formula::Or(xors.iter().map(|c| var(*c)).collect())));
        }
    }
    for c in model.constraints() {
        let (a, b) = (var(c.lhs), var(c.rhs));
        clauses.push(match c.kind {
            ConstraintKind::Requires => Formula::implies(a, b),
            ConstraintKind::Excludes => Formula::not(Formula::And(vec![a, b])),
        });
    }
    PropositionalFormula { variables: model.names(), clauses }
}

/// Checks the tree rules and cross-tree constraints directly.
pub fn is_valid_configuration(model: &FeatureModel, config: &Configuration) -> Result<bool, LogicError> {
    let names = model.names();
    if let Some(unknown) = config.selected.iter().find(|n| !names.contains(*n)) {
        return Err(LogicError::UnknownFeature(unknown.clone()));
    }
    Ok(check(model, &|id| config.contains(model.name_of(id))))
}

fn check(model: &FeatureModel, on: &impl Fn(crate::model::FeatureId) -> bool) -> bool {
    if !on(model.root()) {
        return false;
    }
    for f in model.features() {
        let selected = on(f.id);
        if selected {
            if let Some(p) = f.parent {
                if !on(p) {
                    return false;
                }
            }
        }
        if !selected {
            continue;
        }
        let mut or_total = 0;
        let mut or_on = 0;
        let mut xor_total = 0;
        let mut xor_on = 0;
        for c in &f.children {
            let child = model.feature(*c).expect("child exists");
            let child_on = on(*c);
            match child.rel_kind {
                RelationshipKind::Mandatory if !child_on => return false,
                RelationshipKind::OrMember => {
                    or_total += 1;
                    or_on += usize::from(child_on);
                }
                RelationshipKind::XorMember => {
                    xor_total += 1;
                    xor_on += usize::from(child_on);
                }
                _ => {}
            }
        }
        if (or_total > 0 && or_on == 0) || (xor_total > 0 && xor_on != 1) {
            return false;
        }
    }
    model.constraints().iter().all(|c| match c.kind {
        ConstraintKind::Requires => !on(c.lhs) || on(c.rhs),
        ConstraintKind::Excludes => !(on(c.lhs) && on(c.rhs)),
    })
}

/// Every valid configuration, sorted. Searches all `2^n` subsets, so models
/// over [`MAX_ENUMERATION_FEATURES`] are refused.
pub fn enumerate_configurations(model: &FeatureModel, cap: usize) -> Result<Vec<Configuration>, LogicError> {
    let ids = model.preorder();
    if ids.len() > MAX_ENUMERATION_FEATURES {
        return Err(LogicError::TooManyFeatures { count: ids.len(), limit: MAX_ENUMERATION_FEATURES });
    }
    let mut out = Vec::new();
    let mut on = HashSet::with_capacity(ids.len());
    // bit 0 is the root; subsets without it are never valid
    for mask in (0u32..(1u32 << ids.len())).filter(|m| m & 1 == 1) {
        on.clear();
        on.extend(ids.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, id)| *id));
        if check(model, &|id| on.contains(&id)) {
            if out.len() == cap {
                return Err(LogicError::CapExceeded { cap, reached: cap + 1 });
            }
            out.push(Configuration::new(on.iter().map(|id| model.name_of(*id))));
        }
    }
    out.sort();
    Ok(out)
}
