//! Pairing features across two models.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::jaro::jaro_winkler;
use crate::model::{FeatureId, FeatureModel};

/// Default minimum Jaro-Winkler score for a fuzzy pair.
pub const DEFAULT_NAME_THRESHOLD: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchedPair {
    pub base: FeatureId,
    pub other: FeatureId,
    pub name_score: f64,
}

impl MatchedPair {
    pub fn is_exact(&self) -> bool {
        self.name_score == 1.0
    }
}

/// An injective pairing of base features with other features. Every feature of
/// either model is either in exactly one pair or in its model's unmatched list.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Matching {
    /// Pairs in base preorder.
    pub pairs: Vec<MatchedPair>,
    pub unmatched_base: Vec<FeatureId>,
    pub unmatched_other: Vec<FeatureId>,
}

impl Matching {
    pub fn other_for(&self, base: FeatureId) -> Option<FeatureId> {
        self.pairs.iter().find(|p| p.base == base).map(|p| p.other)
    }

    pub fn base_for(&self, other: FeatureId) -> Option<FeatureId> {
        self.pairs.iter().find(|p| p.other == other).map(|p| p.base)
    }

    /// base id -> other id
    pub fn forward(&self) -> HashMap<FeatureId, FeatureId> {
        self.pairs.iter().map(|p| (p.base, p.other)).collect()
    }

    /// other id -> base id
    pub fn backward(&self) -> HashMap<FeatureId, FeatureId> {
        self.pairs.iter().map(|p| (p.other, p.base)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks injectivity and totality against the two models it was built from.
    pub fn is_consistent_with(&self, base: &FeatureModel, other: &FeatureModel) -> bool {
        let mut seen_base = HashSet::new();
        let mut seen_other = HashSet::new();
        for p in &self.pairs {
            if !seen_base.insert(p.base) || !seen_other.insert(p.other) {
                return false;
            }
        }
        for id in &self.unmatched_base {
            if !seen_base.insert(*id) {
                return false;
            }
        }
        for id in &self.unmatched_other {
            if !seen_other.insert(*id) {
                return false;
            }
        }
        let all_base: HashSet<_> = base.features().map(|f| f.id).collect();
        let all_other: HashSet<_> = other.features().map(|f| f.id).collect();
        seen_base == all_base && seen_other == all_other
    }
}

/// Pairs features of `base` and `other`.
///
/// Exact (case-sensitive) names pair first. The rest pair greedily by
/// descending Jaro-Winkler score, keeping only scores `>= name_threshold`;
/// ties go to the smaller depth difference, then the lexicographically
/// smaller base name, then the smaller other name.
pub fn match_features(base: &FeatureModel, other: &FeatureModel, name_threshold: f64) -> Matching {
    let base_depths = base.depths();
    let other_depths = other.depths();
    let base_order = base.preorder();
    let other_order = other.preorder();

    let other_by_name: HashMap<&str, FeatureId> =
        other_order.iter().map(|id| (other.name_of(*id), *id)).collect();
    let mut paired: BTreeMap<FeatureId, (FeatureId, f64)> = BTreeMap::new();
    let mut taken_other = HashSet::new();
    for id in &base_order {
        if let Some(o) = other_by_name.get(base.name_of(*id)) {
            if taken_other.insert(*o) {
                paired.insert(*id, (*o, 1.0));
            }
        }
    }

    let mut candidates = Vec::new();
    for b in base_order.iter().filter(|id| !paired.contains_key(id)) {
        for o in other_order.iter().filter(|id| !taken_other.contains(id)) {
            let score = jaro_winkler(base.name_of(*b), other.name_of(*o));
            if score >= name_threshold {
                let gap = base_depths[b].abs_diff(other_depths[o]);
                candidates.push((score, gap, *b, *o));
            }
        }
    }
    candidates.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then(x.1.cmp(&y.1))
            .then_with(|| base.name_of(x.2).cmp(base.name_of(y.2)))
            .then_with(|| other.name_of(x.3).cmp(other.name_of(y.3)))
    });
    for (score, _, b, o) in candidates {
        if !paired.contains_key(&b) && !taken_other.contains(&o) {
            paired.insert(b, (o, score));
            taken_other.insert(o);
        }
    }

    let pairs = base_order
        .iter()
        .filter_map(|b| paired.get(b).map(|(o, s)| MatchedPair { base: *b, other: *o, name_score: *s }))
        .collect();
    Matching {
        pairs,
        unmatched_base: base_order.iter().filter(|id| !paired.contains_key(id)).copied().collect(),
        unmatched_other: other_order.iter().filter(|id| !taken_other.contains(id)).copied().collect(),
    }
}
