//! Property bodies shared by the proptest targets and the acceptance run.

use std::collections::{BTreeSet, HashSet};

use fmit::compare::{compare, match_features, CompareOptions, DEFAULT_NAME_THRESHOLD};
use fmit::logic::{enumerate_configurations, is_valid_configuration, to_propositional, Configuration};
use fmit::merge::{
    auto_integrate, detect_conflicts, integrate, Choice, ConflictKind, IntegrationMode, MergeStrategy, Session,
    SessionError, SessionState,
};
use fmit::model::{Feature, FeatureId, FeatureModel, RelationshipKind};
use fmit::xml::{parse_xml, serialize_xml};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

type Check = Result<(), TestCaseError>;

pub fn xml_round_trip(m: &FeatureModel) -> Check {
    let bytes = serialize_xml(m);
    let back = parse_xml(&bytes).expect("writer output parses").model;
    prop_assert!(back.same_structure(m));
    prop_assert_eq!(serialize_xml(&back), bytes);
    Ok(())
}

pub fn parser_survives(bytes: &[u8]) -> Check {
    if let Ok(parsed) = parse_xml(bytes) {
        prop_assert!(parsed.model.is_well_formed());
    }
    Ok(())
}

/// Applies (position, byte, op) edits: overwrite, insert or delete.
pub fn damage(mut bytes: Vec<u8>, edits: &[(usize, u8, u8)]) -> Vec<u8> {
    for &(pos, byte, op) in edits {
        let at = pos % (bytes.len() + 1);
        match op {
            0 if at < bytes.len() => bytes[at] = byte,
            1 => bytes.insert(at, byte),
            _ if at < bytes.len() => {
                bytes.remove(at);
            }
            _ => {}
        }
    }
    bytes
}

pub fn self_comparison(m: &FeatureModel) -> Check {
    let c = compare(m, m, &CompareOptions::default());
    let r = &c.report;
    prop_assert_eq!((r.estsin, r.estsem, r.estest, r.cee), (1.0, 1.0, 1.0, 1.0));
    prop_assert_eq!(r.recommended_mode, IntegrationMode::Automatic);
    prop_assert!(c.matching.unmatched_base.is_empty() && c.matching.unmatched_other.is_empty());
    prop_assert!(c.matching.pairs.iter().all(|p| p.base == p.other));
    prop_assert!(detect_conflicts(m, m, &c.matching).is_empty());
    Ok(())
}

pub fn self_merge(m: &FeatureModel) -> Check {
    let mm = match_features(m, m, DEFAULT_NAME_THRESHOLD);
    for s in [MergeStrategy::Common, MergeStrategy::Additional, MergeStrategy::Formal] {
        let out = integrate(m, m, &mm, s).unwrap();
        prop_assert!(out.model.same_structure(m), "{}", s);
    }
    prop_assert!(integrate(m, m, &mm, MergeStrategy::Partial).unwrap().names().is_empty());
    prop_assert!(integrate(m, m, &mm, MergeStrategy::Complementary).unwrap().names().is_empty());
    Ok(())
}

pub fn matching_shape(b: &FeatureModel, o: &FeatureModel, tau: f64) -> Check {
    let m = match_features(b, o, tau);
    let bs: HashSet<_> = m.pairs.iter().map(|p| p.base).collect();
    let os: HashSet<_> = m.pairs.iter().map(|p| p.other).collect();
    prop_assert_eq!(bs.len(), m.pairs.len());
    prop_assert_eq!(os.len(), m.pairs.len());
    prop_assert_eq!(m.pairs.len() + m.unmatched_base.len(), b.len());
    prop_assert_eq!(m.pairs.len() + m.unmatched_other.len(), o.len());
    prop_assert!(m.unmatched_base.iter().all(|id| !bs.contains(id)));
    prop_assert!(m.unmatched_other.iter().all(|id| !os.contains(id)));
    prop_assert!(m.pairs.iter().all(|p| p.name_score >= tau));
    prop_assert!(m.is_consistent_with(b, o));
    // identical names always pair with each other
    for p in &m.pairs {
        if let Some(same) = o.find(b.name_of(p.base)) {
            prop_assert_eq!(p.other, same);
        }
    }
    Ok(())
}

pub fn scores_bounded(b: &FeatureModel, o: &FeatureModel) -> Check {
    let r = compare(b, o, &CompareOptions::default()).report;
    for s in [r.estsin, r.estsem, r.estest, r.cee] {
        prop_assert!((0.0..=1.0).contains(&s), "{}", s);
    }
    for v in r.syntactic_vector.iter().chain(&r.semantic_vector).chain(&r.structural_vector) {
        prop_assert!((0.0..=1.0).contains(v));
    }
    prop_assert_eq!(r.syntactic_vector.len(), r.f_denominator);
    prop_assert_eq!(r.structural_vector.len(), r.f_denominator);
    prop_assert_eq!(r.f_denominator, b.len().max(o.len()));
    Ok(())
}

fn names_of(m: &FeatureModel, ids: impl IntoIterator<Item = FeatureId>) -> BTreeSet<String> {
    ids.into_iter().map(|id| m.name_of(id).to_owned()).collect()
}

pub fn set_algebra(b: &FeatureModel, o: &FeatureModel) -> Check {
    let m = match_features(b, o, DEFAULT_NAME_THRESHOLD);
    let [add, formal, partial, comp] = auto_integrate(b, o, &m).unwrap();
    let matched = names_of(b, m.pairs.iter().map(|p| p.base));
    let base_only = names_of(b, m.unmatched_base.iter().copied());
    let other_only = names_of(o, m.unmatched_other.iter().copied());

    prop_assert_eq!(formal.names(), matched.clone());
    prop_assert_eq!(partial.names(), base_only.clone());
    prop_assert_eq!(comp.names(), other_only.clone());
    prop_assert!(formal.names().is_disjoint(&partial.names()));
    prop_assert_eq!(&formal.names() | &partial.names(), b.names());
    let union: BTreeSet<_> = matched.iter().chain(&base_only).chain(&other_only).cloned().collect();
    prop_assert_eq!(add.names(), union);
    prop_assert!(!add.synthetic_root);
    for out in [&add, &formal, &partial, &comp] {
        prop_assert!(out.model.is_well_formed(), "{} {:?}", out.strategy, out.model.validate());
    }
    let null = integrate(b, o, &m, MergeStrategy::Null);
    prop_assert_eq!(null.is_ok(), m.is_empty());
    Ok(())
}

fn subsets(m: &FeatureModel) -> impl Iterator<Item = BTreeSet<String>> {
    let names: Vec<String> = m.names().into_iter().collect();
    (0u32..(1 << names.len())).map(move |mask| {
        names.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, n)| n.clone()).collect()
    })
}

pub fn logic_oracle(m: &FeatureModel) -> Check {
    let formula = to_propositional(m);
    let mut satisfying = 0;
    for selected in subsets(m) {
        let sat = formula.is_satisfied_by(&selected);
        let direct = is_valid_configuration(m, &Configuration { selected: selected.clone() }).unwrap();
        prop_assert_eq!(direct, sat, "{:?}", selected);
        satisfying += usize::from(sat);
    }
    let all = enumerate_configurations(m, usize::MAX).unwrap();
    prop_assert_eq!(all.len(), satisfying);
    prop_assert!(all.iter().all(|c| formula.is_satisfied_by(&c.selected)));
    prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
    Ok(())
}

fn count(m: &FeatureModel) -> usize {
    enumerate_configurations(m, usize::MAX).unwrap().len()
}

/// Puts `m` under a fresh root and hangs `extra` children beside it; each
/// extra names its parent as an index into `extra`, or None for the new root.
pub fn wrap(m: &FeatureModel, extra: &[(&str, RelationshipKind, Option<usize>)]) -> FeatureModel {
    let n = m.len() as u32;
    let top = FeatureId(n);
    let old_root = m.root();
    let mut features: Vec<Feature> = m.features().cloned().collect();
    for f in features.iter_mut().filter(|f| f.id == old_root) {
        f.parent = Some(top);
        f.rel_kind = RelationshipKind::Mandatory;
    }
    let mut top_f = Feature {
        id: top,
        name: "Top".into(),
        parent: None,
        rel_kind: RelationshipKind::Mandatory,
        is_abstract: false,
        children: vec![old_root],
    };
    let mut added: Vec<Feature> = Vec::new();
    for (i, (name, kind, parent)) in extra.iter().enumerate() {
        let id = FeatureId(n + 1 + i as u32);
        match parent {
            None => top_f.children.push(id),
            Some(p) => added[*p].children.push(id),
        }
        added.push(Feature {
            id,
            name: (*name).into(),
            parent: Some(parent.map_or(top, |p| FeatureId(n + 1 + p as u32))),
            rel_kind: *kind,
            is_abstract: false,
            children: Vec::new(),
        });
    }
    features.push(top_f);
    features.extend(added);
    let out = FeatureModel::from_parts("Top", top, features, m.constraints().to_vec());
    assert!(out.is_well_formed(), "{:?}", out.validate());
    out
}

pub fn counting_laws(m: &FeatureModel, k: usize) -> Check {
    use RelationshipKind::*;
    let base = count(m);
    prop_assert_eq!(count(&wrap(m, &[])), base);
    prop_assert_eq!(count(&wrap(m, &[("Leaf", Optional, None)])), 2 * base);
    prop_assert_eq!(count(&wrap(m, &[("Leaf", Mandatory, None)])), base);
    let names = ["G1", "G2", "G3", "G4"];
    let group = |kind| {
        let mut v = vec![("Group", Mandatory, None)];
        v.extend(names[..k].iter().map(|n| (*n, kind, Some(0))));
        v
    };
    prop_assert_eq!(count(&wrap(m, &group(XorMember))), k * base);
    prop_assert_eq!(count(&wrap(m, &group(OrMember))), ((1 << k) - 1) * base);
    Ok(())
}

pub fn keep_base_session(b: &FeatureModel, o: &FeatureModel) -> Check {
    let opts = CompareOptions::default();
    let mut s = Session::start(b.clone(), o.clone(), opts).unwrap();
    for id in s.pending() {
        s.resolve(id, Choice::KeepBase).unwrap();
    }
    let merged = s.finalize().unwrap().clone();
    prop_assert!(merged.is_well_formed());
    let again = compare(b, &merged, &opts);
    let left: Vec<_> = detect_conflicts(b, &merged, &again.matching)
        .into_iter()
        .filter(|c| c.kind != ConflictKind::Structural)
        .collect();
    prop_assert!(left.is_empty(), "{:?}", left);
    let post = s.post_report.as_ref().unwrap().cee;
    prop_assert!(post + 1e-12 >= s.report.cee, "post {} < pre {}", post, s.report.cee);
    Ok(())
}

#[derive(Debug, Clone)]
pub enum Op {
    Resolve(u32, bool),
    Finalize,
}

pub fn arb_ops() -> impl Strategy<Value = Vec<Op>> {
    proptest::collection::vec(
        prop_oneof![
            4 => (0u32..16, any::<bool>()).prop_map(|(id, other)| Op::Resolve(id, other)),
            1 => Just(Op::Finalize),
        ],
        0..24,
    )
}

pub fn session_safety(b: &FeatureModel, o: &FeatureModel, ops: &[Op]) -> Check {
    let mut s = Session::start(b.clone(), o.clone(), CompareOptions::default()).unwrap();
    let total = s.conflicts.len() as u32;
    for op in ops {
        let before = s.clone();
        let result = match *op {
            Op::Resolve(id, other) => {
                let choice = if other { Choice::KeepOther } else { Choice::KeepBase };
                s.resolve(id, choice).map(|_| ())
            }
            Op::Finalize => s.finalize().map(|_| ()),
        };
        if let Err(e) = result {
            // failures leave the session exactly as it was
            prop_assert_eq!(&s.conflicts, &before.conflicts);
            prop_assert_eq!(s.state, before.state);
            if let SessionError::UnknownConflict(id) = e {
                prop_assert!(id == 0 || id > total);
            }
        }
        let done = s.state == SessionState::Finalized;
        prop_assert_eq!(s.merged_model.is_some(), done);
        prop_assert_eq!(s.post_report.is_some(), done);
        if done {
            prop_assert!(s.pending().is_empty());
            prop_assert!(s.merged_model.as_ref().unwrap().is_well_formed());
        }
    }
    Ok(())
}
