//! Batch runs over a directory of model pairs.
//!
//! Each subdirectory holding a `base.xml` and an `other.xml` is one scenario;
//! scenarios run in directory-name order.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::compare::{compare, CompareOptions};
use crate::merge::{detect_conflicts, ConflictKind, IntegrationMode};
use crate::model::FeatureModel;
use crate::xml::{parse_xml, ParseFailure};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseFailure },
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub base: FeatureModel,
    pub other: FeatureModel,
}

/// Element counts of one model: features and diagram relationships.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelSize {
    pub features: usize,
    pub relationships: usize,
}

impl ModelSize {
    pub fn of(m: &FeatureModel) -> Self {
        Self { features: m.len(), relationships: m.notation_count() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub name: String,
    pub base: ModelSize,
    pub other: ModelSize,
    pub conflicts: usize,
    pub name_conflicts: usize,
    pub kind_conflicts: usize,
    pub structural_conflicts: usize,
    pub cee: f64,
    pub mode: IntegrationMode,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn read_model(path: &Path) -> Result<FeatureModel, ScenarioError> {
    let bytes = fs::read(path).map_err(|source| ScenarioError::Io { path: path.to_owned(), source })?;
    parse_xml(&bytes)
        .map(|p| p.model)
        .map_err(|source| ScenarioError::Parse { path: path.to_owned(), source })
}

pub fn load_scenarios(dir: impl AsRef<Path>) -> Result<Vec<Scenario>, ScenarioError> {
    let dir = dir.as_ref();
    let io = |source| ScenarioError::Io { path: dir.to_owned(), source };
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("base.xml").is_file() && p.join("other.xml").is_file())
        .collect();
    dirs.sort();
    dirs.into_iter()
        .map(|d| {
            Ok(Scenario {
                name: d.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
                base: read_model(&d.join("base.xml"))?,
                other: read_model(&d.join("other.xml"))?,
            })
        })
        .collect()
}

pub fn run_scenario(s: &Scenario, options: &CompareOptions) -> ScenarioOutcome {
    let start = Instant::now();
    let cmp = compare(&s.base, &s.other, options);
    let conflicts = detect_conflicts(&s.base, &s.other, &cmp.matching);
    let count = |k| conflicts.iter().filter(|c| c.kind == k).count();
    ScenarioOutcome {
        name: s.name.clone(),
        base: ModelSize::of(&s.base),
        other: ModelSize::of(&s.other),
        conflicts: conflicts.len(),
        name_conflicts: count(ConflictKind::Name),
        kind_conflicts: count(ConflictKind::RelationshipKind),
        structural_conflicts: count(ConflictKind::Structural),
        cee: cmp.report.cee,
        mode: cmp.report.recommended_mode,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(dir: impl AsRef<Path>, options: &CompareOptions) -> Result<Vec<ScenarioOutcome>, ScenarioError> {
    Ok(load_scenarios(dir)?.iter().map(|s| run_scenario(s, options)).collect())
}
