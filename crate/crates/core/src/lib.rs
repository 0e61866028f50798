//! Feature-model comparison and integration.
//!
//! Two models are paired feature by feature, scored on names (Jaro-Winkler),
//! relationship kinds and hierarchy depth, and the three scores are averaged
//! into a global equivalence (CEE). A high CEE integrates automatically with
//! one of the set strategies; otherwise a [`merge::Session`] collects a
//! keep-base/keep-other decision per conflict before building the result.
//!
//! ```
//! use fmit::{compare::{compute_cee, CompareOptions}, model::FeatureModel};
//!
//! let mut b = FeatureModel::builder("Phone");
//! let root = b.root();
//! b.mandatory(root, "Calls");
//! b.optional(root, "Camera");
//! let m = b.build().unwrap();
//!
//! let report = compute_cee(&m, &m, &CompareOptions::default());
//! assert_eq!(report.cee, 1.0);
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `fmit` binary wraps the
//! same API as a command line and an HTTP service.

pub mod cli;
pub mod compare;
pub mod logic;
pub mod merge;
pub mod model;
pub mod report;
pub mod scenarios;
pub mod server;
pub mod xml;

pub use compare::{compare, compute_cee, CompareOptions, Comparison, ComparisonReport, Matching};
pub use merge::{auto_integrate, integrate, IntegrationMode, MergeOutput, MergeStrategy, Session};
pub use model::{FeatureId, FeatureModel, RelationshipKind};
pub use xml::{parse_xml, serialize_xml};
