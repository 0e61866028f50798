//! Plain-text report in the prototype's `FMI – ` line format.

use crate::compare::ComparisonReport;
use crate::merge::{Choice, Conflict, ConflictKind, ConflictStatus, IntegrationMode, MergeOutput, MergeStrategy};
use crate::model::FeatureModel;

pub const LINE_PREFIX: &str = "FMI – ";

/// Rounds half away from zero at `decimals` places.
pub fn round_half_up(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale + 0.5).floor() / scale
}

/// A score as printed: 4 decimals, `.` separator.
pub fn format_score(x: f64) -> String {
    format!("{:.4}", round_half_up(x, 4))
}

pub fn format_vector(v: &[f64]) -> String {
    let items: Vec<_> = v.iter().map(|x| format_score(*x)).collect();
    format!("[{}]", items.join(", "))
}

/// `<base>_<other>_fmit.txt`, with anything but letters, digits, `-` and `_`
/// replaced.
pub fn default_report_name(base: &str, other: &str) -> String {
    let clean = |s: &str| -> String {
        s.chars().map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
    };
    format!("{}_{}_fmit.txt", clean(base), clean(other))
}

/// What to render. Only `base`, `other`, `report` and `timestamp` are required.
#[derive(Debug, Clone)]
pub struct ReportInput<'a> {
    pub base: &'a str,
    pub other: &'a str,
    pub report: &'a ComparisonReport,
    pub conflicts: &'a [Conflict],
    /// Outputs of an automatic run.
    pub strategies: &'a [MergeOutput],
    /// Result of a finalized session and its re-comparison.
    pub merged: Option<(&'a FeatureModel, &'a ComparisonReport)>,
    pub timestamp: String,
}

impl<'a> ReportInput<'a> {
    pub fn new(base: &'a str, other: &'a str, report: &'a ComparisonReport, timestamp: impl Into<String>) -> Self {
        Self { base, other, report, conflicts: &[], strategies: &[], merged: None, timestamp: timestamp.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportDocument {
    pub inputs: (String, String),
    pub timestamp: String,
    pub lines: Vec<String>,
}

impl ReportDocument {
    /// Lines joined with LF, ending in a newline.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

fn strategy_label(s: MergeStrategy) -> &'static str {
    match s {
        MergeStrategy::Common => "Comum",
        MergeStrategy::Additional => "União",
        MergeStrategy::Formal => "Intersecção",
        MergeStrategy::Partial => "Diferença",
        MergeStrategy::Complementary => "Complemento",
        MergeStrategy::Null => "Nula",
    }
}

fn conflict_line(c: &Conflict) -> String {
    let kind = match c.kind {
        ConflictKind::Name => "Nome",
        ConflictKind::RelationshipKind => "Relacionamento",
        ConflictKind::Structural => "Estrutura",
    };
    let decision = match (c.kind, c.status) {
        (ConflictKind::Structural, _) => "somente relatório",
        (_, ConflictStatus::Unresolved) => "pendente",
        (_, ConflictStatus::Resolved(Choice::KeepBase)) => "manter referência",
        (_, ConflictStatus::Resolved(Choice::KeepOther)) => "manter comparado",
    };
    format!("#{} {}: {} | {} -> {}", c.id, kind, c.base_value, c.other_value, decision)
}

fn names_in_preorder(m: &FeatureModel) -> String {
    let names: Vec<_> = m.preorder().into_iter().map(|id| m.name_of(id)).collect();
    format!("[{}]", names.join(", "))
}

pub fn render_report(input: &ReportInput<'_>) -> ReportDocument {
    let r = input.report;
    let mut lines = Vec::new();
    let mut line = |s: String| lines.push(format!("{LINE_PREFIX}{s}"));
    line(format!("Modelo de Referência: {}", input.base));
    line(format!("Modelo Comparado: {}", input.other));
    line(format!("Data: {}", input.timestamp));
    line(format!("Vetor de Comparação Sintática: {}", format_vector(&r.syntactic_vector)));
    line(format!("Grau de Equivalência Sintática: {}", format_score(r.estsin)));
    line(format!("Vetor de Comparação Semântica: {}", format_vector(&r.semantic_vector)));
    line(format!("Grau de Equivalência Semântica: {}", format_score(r.estsem)));
    line(format!("Vetor de Comparação Estrutural: {}", format_vector(&r.structural_vector)));
    line(format!("Grau de Equivalência Estrutural: {}", format_score(r.estest)));
    line(format!("Cálculo de Equivalência Global: {}", format_score(r.cee)));
    line(format!(
        "Modo de Integração: {}",
        match r.recommended_mode {
            IntegrationMode::Automatic => "Automática",
            IntegrationMode::SemiAutomatic => "Semiautomática",
        }
    ));
    line("Conflitos:".to_owned());
    if input.conflicts.is_empty() {
        line("none".to_owned());
    }
    for c in input.conflicts {
        line(conflict_line(c));
    }
    for out in input.strategies {
        line(format!("{}: [{}]", strategy_label(out.strategy), out.ordered_names().join(", ")));
    }
    if let Some((merged, post)) = input.merged {
        line(format!("Modelo de Feature Pretendido: {}", names_in_preorder(merged)));
        line(format!("Novo Vetor de Comparação Sintática: {}", format_vector(&post.syntactic_vector)));
        line(format!("Novo Vetor de Comparação Semântica: {}", format_vector(&post.semantic_vector)));
        line(format!("Novo Vetor de Comparação Estrutural: {}", format_vector(&post.structural_vector)));
        line(format!("Grau de Equivalência: {}", format_score(post.cee)));
    }
    ReportDocument {
        inputs: (input.base.to_owned(), input.other.to_owned()),
        timestamp: input.timestamp.clone(),
        lines,
    }
}
