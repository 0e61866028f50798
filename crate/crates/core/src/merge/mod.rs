//! Mode dispatch, integration strategies, conflict detection and the
//! resolution session.

pub mod conflict;
pub mod mode;
pub mod session;
pub mod strategy;

pub use conflict::{detect_conflicts, Choice, Conflict, ConflictKind, ConflictStatus};
pub use mode::{select_mode, IntegrationMode, DEFAULT_MODE_THRESHOLD};
pub use session::{Session, SessionError, SessionState};
pub use strategy::{auto_integrate, integrate, MergeError, MergeOutput, MergeStrategy};
