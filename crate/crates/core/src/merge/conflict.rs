//! Differences between matched features.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compare::Matching;
use crate::model::{FeatureId, FeatureModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictKind {
    Name,
    RelationshipKind,
    /// Paired features sit at different depths. Reported, never resolved.
    Structural,
}

impl ConflictKind {
    pub fn is_resolvable(self) -> bool {
        !matches!(self, Self::Structural)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Name => "name",
            Self::RelationshipKind => "relationship_kind",
            Self::Structural => "structural",
        }
    }
}

impl fmt::Display for ConflictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    KeepBase,
    KeepOther,
}

impl FromStr for Choice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "b" | "base" | "keep_base" | "keepbase" => Ok(Self::KeepBase),
            "o" | "other" | "keep_other" | "keepother" => Ok(Self::KeepOther),
            other => Err(format!("unknown choice `{other}` (expected keep_base or keep_other)")),
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Self::KeepBase => "keep_base",
            Self::KeepOther => "keep_other",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", content = "choice", rename_all = "snake_case")]
pub enum ConflictStatus {
    Unresolved,
    Resolved(Choice),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub id: u32,
    pub kind: ConflictKind,
    pub base_feature: FeatureId,
    pub other_feature: FeatureId,
    pub base_value: String,
    pub other_value: String,
    pub status: ConflictStatus,
}

impl Conflict {
    pub fn is_resolvable(&self) -> bool {
        self.kind.is_resolvable()
    }

    pub fn is_pending(&self) -> bool {
        self.is_resolvable() && self.status == ConflictStatus::Unresolved
    }
}

/// One entry per difference between paired features, in base preorder; for
/// each pair the name comes first, then the relationship kind, then depth.
/// Ids count up from 1. The kind of a root is not compared since a root has
/// no incoming relationship.
pub fn detect_conflicts(base: &FeatureModel, other: &FeatureModel, matching: &Matching) -> Vec<Conflict> {
    let base_depths = base.depths();
    let other_depths = other.depths();
    let mut out = Vec::new();
    let mut push = |kind, pair: (FeatureId, FeatureId), base_value: String, other_value: String| {
        out.push(Conflict {
            id: out.len() as u32 + 1,
            kind,
            base_feature: pair.0,
            other_feature: pair.1,
            base_value,
            other_value,
            status: ConflictStatus::Unresolved,
        });
    };
    for p in &matching.pairs {
        let (Some(b), Some(o)) = (base.feature(p.base), other.feature(p.other)) else { continue };
        let pair = (p.base, p.other);
        if b.name != o.name {
            push(ConflictKind::Name, pair, b.name.clone(), o.name.clone());
        }
        if b.parent.is_some() && o.parent.is_some() && b.rel_kind != o.rel_kind {
            push(ConflictKind::RelationshipKind, pair, b.rel_kind.to_string(), o.rel_kind.to_string());
        }
        let (db, d_o) = (base_depths[&p.base], other_depths[&p.other]);
        if db != d_o {
            push(ConflictKind::Structural, pair, db.to_string(), d_o.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::{match_features, DEFAULT_NAME_THRESHOLD};

    #[test]
    fn name_kind_and_depth_differences() {
        let mut b = FeatureModel::builder("Cidade");
        let r = b.root();
        let t = b.optional(r, "Trans");
        b.optional(t, "Onibus");
        let mut o = FeatureModel::builder("Cidade");
        let r = o.root();
        o.mandatory(r, "Transporte");
        o.optional(r, "Onibus");
        let (base, other) = (b.build().unwrap(), o.build().unwrap());
        let m = match_features(&base, &other, DEFAULT_NAME_THRESHOLD);
        let c = detect_conflicts(&base, &other, &m);
        let kinds: Vec<_> = c.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, [ConflictKind::Name, ConflictKind::RelationshipKind, ConflictKind::Structural]);
        assert_eq!(c.iter().map(|c| c.id).collect::<Vec<_>>(), [1, 2, 3]);
        assert_eq!((c[0].base_value.as_str(), c[0].other_value.as_str()), ("Trans", "Transporte"));
        assert_eq!((c[2].base_value.as_str(), c[2].other_value.as_str()), ("2", "1"));
    }

    #[test]
    fn identical_models_have_none() {
        let mut b = FeatureModel::builder("R");
        let r = b.root();
        b.optional(r, "A");
        let m = b.build().unwrap();
        assert!(detect_conflicts(&m, &m, &match_features(&m, &m, DEFAULT_NAME_THRESHOLD)).is_empty());
    }

    #[test]
    fn choices_parse() {
        assert_eq!("b".parse(), Ok(Choice::KeepBase));
        assert_eq!("KEEP_OTHER".parse(), Ok(Choice::KeepOther));
        assert!("x".parse::<Choice>().is_err());
    }
}
