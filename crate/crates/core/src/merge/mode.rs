//! Choosing between automatic and semi-automatic integration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Default CEE at or above which integration needs no intervention.
pub const DEFAULT_MODE_THRESHOLD: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMode {
    Automatic,
    SemiAutomatic,
}

impl IntegrationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Automatic => "automatic",
            Self::SemiAutomatic => "semi_automatic",
        }
    }
}

impl fmt::Display for IntegrationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for IntegrationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auto" | "automatic" => Ok(Self::Automatic),
            "semi" | "semi_automatic" | "semiautomatic" | "semi-automatic" => Ok(Self::SemiAutomatic),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Identical (`cee == 1`) and disjoint (`cee == 0`) models integrate
/// automatically, as does anything at or above `threshold`. Everything else
/// needs a human.
pub fn select_mode(cee: f64, threshold: f64) -> IntegrationMode {
    if cee == 0.0 || cee == 1.0 || cee >= threshold {
        IntegrationMode::Automatic
    } else {
        IntegrationMode::SemiAutomatic
    }
}
