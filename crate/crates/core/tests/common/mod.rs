#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;

use fmit::model::{CrossTreeConstraint, Feature, FeatureId, FeatureModel, RelationshipKind};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Names shared by independently generated models, with a few near-misses so
/// fuzzy pairing gets exercised.
pub const POOL: &[&str] = &[
    "Root", "Camera", "Cameras", "Motor", "Motores", "Tela", "Telas", "Audio", "Video", "Rede", "Wifi", "Wi-Fi",
    "Bateria", "Baterias", "Gps", "Mapa", "Mapas", "Busca", "Pagamento", "Pagamentos", "Boleto", "Pix",
    "Cartao", "Cartoes", "Seguranca", "Alarme", "Freio", "Freios", "Som", "Ligação",
];

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn load(rel: &str) -> FeatureModel {
    let bytes = std::fs::read(fixture(rel)).unwrap();
    fmit::xml::parse_xml(&bytes).unwrap().model
}

#[derive(Debug, Clone)]
struct Raw {
    names: Vec<&'static str>,
    parent_seeds: Vec<usize>,
    kind_seeds: Vec<u8>,
    abstract_flags: Vec<bool>,
    constraints: Vec<(bool, usize, usize)>,
}

fn assemble(raw: Raw) -> FeatureModel {
    let n = raw.names.len();
    let parents: Vec<Option<usize>> =
        (0..n).map(|i| if i == 0 { None } else { Some(raw.parent_seeds[i] % i) }).collect();
    // the first child of each parent fixes the group class for all of them
    let mut class: Vec<Option<u8>> = vec![None; n];
    let mut kinds = vec![RelationshipKind::Mandatory; n];
    for i in 1..n {
        let p = parents[i].unwrap();
        let seed = raw.kind_seeds[i] % 4;
        let c = *class[p].get_or_insert(seed);
        kinds[i] = match c {
            2 => RelationshipKind::OrMember,
            3 => RelationshipKind::XorMember,
            _ if seed % 2 == 0 => RelationshipKind::Mandatory,
            _ => RelationshipKind::Optional,
        };
    }
    let features = (0..n).map(|i| Feature {
        id: FeatureId(i as u32),
        name: raw.names[i].to_owned(),
        parent: parents[i].map(|p| FeatureId(p as u32)),
        rel_kind: kinds[i],
        is_abstract: raw.abstract_flags[i],
        children: (0..n).filter(|c| parents[*c] == Some(i)).map(|c| FeatureId(c as u32)).collect(),
    });
    let constraints = if n < 2 {
        Vec::new()
    } else {
        let mut seen = std::collections::HashSet::new();
        raw.constraints
            .iter()
            .filter_map(|&(req, a, b)| {
                let (a, b) = (a % n, b % n);
                let key = if req { (req, a, b) } else { (req, a.min(b), a.max(b)) };
                (a != b && seen.insert(key)).then(|| {
                    let (a, b) = (FeatureId(a as u32), FeatureId(b as u32));
                    if req {
                        CrossTreeConstraint::requires(a, b)
                    } else {
                        CrossTreeConstraint::excludes(a, b)
                    }
                })
            })
            .collect()
    };
    let model = FeatureModel::from_parts(raw.names[0], FeatureId(0), features, constraints);
    debug_assert!(model.is_well_formed(), "{:?}", model.validate());
    model
}

/// Well-formed models with `1..=max` features drawn from [`POOL`].
pub fn arb_model(max: usize) -> impl Strategy<Value = FeatureModel> {
    (1..=max)
        .prop_flat_map(|n| {
            (
                subsequence(POOL.to_vec(), n).prop_shuffle(),
                proptest::collection::vec(any::<usize>(), n),
                proptest::collection::vec(any::<u8>(), n),
                proptest::collection::vec(proptest::bool::weighted(0.1), n),
                proptest::collection::vec((any::<bool>(), any::<usize>(), any::<usize>()), 0..3),
            )
        })
        .prop_map(|(names, parent_seeds, kind_seeds, abstract_flags, constraints)| {
            assemble(Raw { names, parent_seeds, kind_seeds, abstract_flags, constraints })
        })
}

/// Two models over the same name pool, so they usually overlap.
pub fn arb_pair(max: usize) -> impl Strategy<Value = (FeatureModel, FeatureModel)> {
    (arb_model(max), arb_model(max))
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

/// Cases per property; every suite runs at least this many.
pub const CASES: u32 = 256;

pub fn default_config() -> ProptestConfig {
    config(CASES)
}
