//! Semi-automatic integration: detect conflicts, collect a decision for each,
//! then build the merged model.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::conflict::{detect_conflicts, Choice, Conflict, ConflictKind, ConflictStatus};
use super::strategy::{union, Override};
use crate::compare::{compare, compute_cee, CompareOptions, ComparisonReport, Matching};
use crate::model::{FeatureModel, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionState {
    Created,
    AwaitingResolutions,
    Finalized,
}

impl fmt::Display for SessionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Self::Created => "created",
            Self::AwaitingResolutions => "awaiting_resolutions",
            Self::Finalized => "finalized",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("invalid input model: {0}")]
    Model(#[from] ModelError),
    #[error("no conflict with id {0}")]
    UnknownConflict(u32),
    #[error("conflict {0} is already resolved")]
    AlreadyResolved(u32),
    #[error("conflict {0} is structural and cannot be resolved")]
    StructuralNotResolvable(u32),
    #[error("session is {actual}, expected {expected}")]
    WrongState { expected: SessionState, actual: SessionState },
    #[error("unresolved conflicts: {0:?}")]
    UnresolvedConflicts(Vec<u32>),
}

#[derive(Debug, Clone, Serialize)]
pub struct Session {
    pub id: String,
    pub base: FeatureModel,
    pub other: FeatureModel,
    pub matching: Matching,
    pub report: ComparisonReport,
    pub conflicts: Vec<Conflict>,
    pub state: SessionState,
    pub merged_model: Option<FeatureModel>,
    pub post_report: Option<ComparisonReport>,
    #[serde(skip)]
    options: CompareOptions,
}

/// A fresh 128-bit token in lowercase hex.
pub fn new_token() -> String {
    format!("{:032x}", rand::random::<u128>())
}

impl Session {
    /// Compares the models and lists their conflicts. The session is ready
    /// for resolutions straight away, even when there is nothing to resolve.
    pub fn start(base: FeatureModel, other: FeatureModel, options: CompareOptions) -> Result<Self, SessionError> {
        base.ensure_well_formed()?;
        other.ensure_well_formed()?;
        let cmp = compare(&base, &other, &options);
        let conflicts = detect_conflicts(&base, &other, &cmp.matching);
        Ok(Self {
            id: new_token(),
            base,
            other,
            matching: cmp.matching,
            report: cmp.report,
            conflicts,
            state: SessionState::AwaitingResolutions,
            merged_model: None,
            post_report: None,
            options,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn options(&self) -> &CompareOptions {
        &self.options
    }

    pub fn conflict(&self, id: u32) -> Option<&Conflict> {
        self.conflicts.iter().find(|c| c.id == id)
    }

    /// Resolvable conflicts still waiting for a choice.
    pub fn pending(&self) -> Vec<u32> {
        self.conflicts.iter().filter(|c| c.is_pending()).map(|c| c.id).collect()
    }

    fn expect_state(&self, expected: SessionState) -> Result<(), SessionError> {
        if self.state == expected {
            Ok(())
        } else {
            Err(SessionError::WrongState { expected, actual: self.state })
        }
    }

    /// Records a choice. On error the session is left untouched.
    pub fn resolve(&mut self, conflict_id: u32, choice: Choice) -> Result<&Conflict, SessionError> {
        self.expect_state(SessionState::AwaitingResolutions)?;
        let conflict = self
            .conflicts
            .iter_mut()
            .find(|c| c.id == conflict_id)
            .ok_or(SessionError::UnknownConflict(conflict_id))?;
        if !conflict.is_resolvable() {
            return Err(SessionError::StructuralNotResolvable(conflict_id));
        }
        if conflict.status != ConflictStatus::Unresolved {
            return Err(SessionError::AlreadyResolved(conflict_id));
        }
        conflict.status = ConflictStatus::Resolved(choice);
        Ok(conflict)
    }

    /// Builds the union with every conflicted value taken from the chosen side
    /// and re-compares the base against it.
    pub fn finalize(&mut self) -> Result<&FeatureModel, SessionError> {
        self.expect_state(SessionState::AwaitingResolutions)?;
        let pending = self.pending();
        if !pending.is_empty() {
            return Err(SessionError::UnresolvedConflicts(pending));
        }
        let mut overrides: HashMap<_, Override> = HashMap::new();
        for c in &self.conflicts {
            if c.status != ConflictStatus::Resolved(Choice::KeepOther) {
                continue;
            }
            let Some(theirs) = self.other.feature(c.other_feature) else { continue };
            let entry = overrides.entry(c.base_feature).or_default();
            match c.kind {
                ConflictKind::Name => entry.name = Some(theirs.name.clone()),
                ConflictKind::RelationshipKind => entry.kind = Some(theirs.rel_kind),
                ConflictKind::Structural => {}
            }
        }
        let merged = union(&self.base, &self.other, &self.matching, &overrides);
        self.post_report = Some(compute_cee(&self.base, &merged, &self.options));
        self.merged_model = Some(merged);
        self.state = SessionState::Finalized;
        Ok(self.merged_model.as_ref().expect("just set"))
    }
}
