//! The three comparison strategies and their aggregate.
//!
//! * syntactic: Jaro-Winkler similarity of paired feature names,
//! * semantic: agreement of relationship kinds on every relationship slot,
//! * structural: agreement of hierarchy depth for paired features.
//!
//! Each strategy yields a per-element vector and a score in `[0, 1]`; the
//! global equivalence (CEE) is their arithmetic mean.

pub mod jaro;
pub mod matching;

use serde::Serialize;

pub use jaro::{jaro, jaro_winkler};
pub use matching::{match_features, MatchedPair, Matching, DEFAULT_NAME_THRESHOLD};

use crate::merge::mode::{select_mode, IntegrationMode, DEFAULT_MODE_THRESHOLD};
use crate::model::{ConstraintKind, FeatureModel, RelationshipSlot};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    /// Minimum Jaro-Winkler score for two differently named features to pair.
    pub name_threshold: f64,
    /// CEE at or above which integration runs without intervention.
    pub mode_threshold: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self { name_threshold: DEFAULT_NAME_THRESHOLD, mode_threshold: DEFAULT_MODE_THRESHOLD }
    }
}

/// A per-element vector and the strategy score derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyScore {
    pub vector: Vec<f64>,
    pub denominator: usize,
    pub score: f64,
}

impl StrategyScore {
    fn from_vector(vector: Vec<f64>, denominator: usize) -> Self {
        let score = (vector.iter().sum::<f64>() / denominator as f64).clamp(0.0, 1.0);
        Self { vector, denominator, score }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub syntactic_vector: Vec<f64>,
    pub semantic_vector: Vec<f64>,
    pub structural_vector: Vec<f64>,
    pub estsin: f64,
    pub estsem: f64,
    pub estest: f64,
    pub cee: f64,
    /// Feature denominator: the larger feature count.
    pub f_denominator: usize,
    /// Slot denominator: the larger relationship-slot count.
    pub c_denominator: usize,
    pub recommended_mode: IntegrationMode,
}

/// Matching plus the scores computed from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub matching: Matching,
    pub report: ComparisonReport,
}

/// Arithmetic mean of the three strategy scores, clamped to `[0, 1]`.
pub fn aggregate_cee(estest: f64, estsem: f64, estsin: f64) -> f64 {
    ((estest + estsem + estsin) / 3.0).clamp(0.0, 1.0)
}

/// One score per feature of the larger model (base on ties), in preorder.
fn feature_driver<'a>(
    base: &'a FeatureModel,
    other: &'a FeatureModel,
) -> (&'a FeatureModel, &'a FeatureModel, bool) {
    if other.len() > base.len() {
        (other, base, false)
    } else {
        (base, other, true)
    }
}

fn partner_lookup(
    matching: &Matching,
    driver_is_base: bool,
) -> std::collections::HashMap<crate::model::FeatureId, crate::model::FeatureId> {
    if driver_is_base {
        matching.forward()
    } else {
        matching.backward()
    }
}

/// Jaro-Winkler of each paired name; 0 for unpaired features.
pub fn syntactic_score(base: &FeatureModel, other: &FeatureModel, matching: &Matching) -> StrategyScore {
    let (driver, counter, driver_is_base) = feature_driver(base, other);
    let partner = partner_lookup(matching, driver_is_base);
    let vector = driver
        .preorder()
        .into_iter()
        .map(|id| match partner.get(&id) {
            Some(p) => jaro_winkler(driver.name_of(id), counter.name_of(*p)),
            None => 0.0,
        })
        .collect();
    StrategyScore::from_vector(vector, base.len().max(other.len()))
}

/// Depth agreement for paired features: 1 on the same level, 0.5 one level
/// apart, 0.25 two or more apart, 0 when unpaired.
pub fn structural_score(base: &FeatureModel, other: &FeatureModel, matching: &Matching) -> StrategyScore {
    let (driver, counter, driver_is_base) = feature_driver(base, other);
    let partner = partner_lookup(matching, driver_is_base);
    let driver_depths = driver.depths();
    let counter_depths = counter.depths();
    let vector = driver
        .preorder()
        .into_iter()
        .map(|id| match partner.get(&id) {
            Some(p) => match driver_depths[&id].abs_diff(counter_depths[p]) {
                0 => 1.0,
                1 => 0.5,
                _ => 0.25,
            },
            None => 0.0,
        })
        .collect();
    StrategyScore::from_vector(vector, base.len().max(other.len()))
}

/// 1 per relationship slot whose counterpart in the other model carries the
/// same kind, else 0. Slots come from the model with more of them (base on
/// ties).
///
/// When neither model has any slot the vector is a single entry standing for
/// the root relationship: 1 if the two roots are paired, else 0.
pub fn semantic_score(base: &FeatureModel, other: &FeatureModel, matching: &Matching) -> StrategyScore {
    let base_slots = base.relationship_slots();
    let other_slots = other.relationship_slots();
    let c = base_slots.len().max(other_slots.len());
    if c == 0 {
        let roots_paired = matching.other_for(base.root()) == Some(other.root());
        return StrategyScore::from_vector(vec![if roots_paired { 1.0 } else { 0.0 }], 1);
    }
    let (driver, counter, slots, driver_is_base) = if other_slots.len() > base_slots.len() {
        (other, base, other_slots, false)
    } else {
        (base, other, base_slots, true)
    };
    let partner = partner_lookup(matching, driver_is_base);
    let vector = slots
        .iter()
        .map(|slot| {
            let agrees = match *slot {
                RelationshipSlot::Edge { feature, kind } => partner
                    .get(&feature)
                    .and_then(|p| counter.feature(*p))
                    .is_some_and(|p| p.parent.is_some() && p.rel_kind == kind),
                RelationshipSlot::Constraint { index, kind } => {
                    let c = driver.constraints()[index];
                    match (partner.get(&c.lhs), partner.get(&c.rhs)) {
                        (Some(l), Some(r)) => counter.constraints().iter().any(|d| {
                            d.kind == kind
                                && ((d.lhs == *l && d.rhs == *r)
                                    || (kind == ConstraintKind::Excludes && d.lhs == *r && d.rhs == *l))
                        }),
                        _ => false,
                    }
                }
            };
            if agrees {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    StrategyScore::from_vector(vector, c)
}

/// Scores an existing matching.
pub fn score_matching(
    base: &FeatureModel,
    other: &FeatureModel,
    matching: &Matching,
    mode_threshold: f64,
) -> ComparisonReport {
    let sin = syntactic_score(base, other, matching);
    let sem = semantic_score(base, other, matching);
    let est = structural_score(base, other, matching);
    let cee = aggregate_cee(est.score, sem.score, sin.score);
    ComparisonReport {
        estsin: sin.score,
        estsem: sem.score,
        estest: est.score,
        cee,
        f_denominator: sin.denominator,
        c_denominator: sem.denominator,
        recommended_mode: select_mode(cee, mode_threshold),
        syntactic_vector: sin.vector,
        semantic_vector: sem.vector,
        structural_vector: est.vector,
    }
}

/// Matches the two models and scores the result.
pub fn compare(base: &FeatureModel, other: &FeatureModel, options: &CompareOptions) -> Comparison {
    let matching = match_features(base, other, options.name_threshold);
    let report = score_matching(base, other, &matching, options.mode_threshold);
    Comparison { matching, report }
}

/// Global equivalence report for two models.
pub fn compute_cee(base: &FeatureModel, other: &FeatureModel, options: &CompareOptions) -> ComparisonReport {
    compare(base, other, options).report
}
