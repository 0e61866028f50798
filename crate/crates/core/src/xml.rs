//! Reader and writer for the FeatureIDE-style XML feature-model dialect.
//!
//! Supported vocabulary: `featureModel`, `struct`, `and`, `or`, `alt`,
//! `feature`, `description`, `constraints`, `rule`, `imp`, `not`, `conj`,
//! `disj`, `var`; attributes `name`, `mandatory`, `abstract`. Anything else is
//! skipped with a warning.

use std::fmt::{self, Write as _};

use roxmltree::{Document, Node};
use serde::Serialize;

use crate::model::{
    ConstraintKind, CrossTreeConstraint, Feature, FeatureId, FeatureModel, RelationshipKind, Severity,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    /// `line:column` (1-based) or an element path when no position is known.
    pub location: String,
    pub message: String,
}

impl ParseDiagnostic {
    fn error(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, location: location.into(), message: message.into() }
    }

    fn warning(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, location: location.into(), message: message.into() }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at {}: {}", self.location, self.message)
    }
}

/// A successfully parsed model plus any warnings raised on the way.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub model: FeatureModel,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parse failure; holds at least one error-severity diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseFailure {
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.diagnostics {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseFailure {}

const MAX_DEPTH: usize = 256;

const FEATURE_TAGS: [&str; 4] = ["and", "or", "alt", "feature"];

struct Reader<'a, 'input> {
    doc: &'a Document<'input>,
    features: Vec<Feature>,
    constraints: Vec<CrossTreeConstraint>,
    diagnostics: Vec<ParseDiagnostic>,
}

impl<'a, 'input> Reader<'a, 'input> {
    fn at(&self, node: Node<'a, 'input>) -> String {
        let pos = self.doc.text_pos_at(node.range().start);
        format!("{}:{}", pos.row, pos.col)
    }

    fn warn(&mut self, node: Node<'a, 'input>, msg: impl Into<String>) {
        let loc = self.at(node);
        self.diagnostics.push(ParseDiagnostic::warning(loc, msg));
    }

    fn error(&mut self, node: Node<'a, 'input>, msg: impl Into<String>) {
        let loc = self.at(node);
        self.diagnostics.push(ParseDiagnostic::error(loc, msg));
    }

    fn flag(&mut self, node: Node<'a, 'input>, attr: &str) -> bool {
        match node.attribute(attr) {
            None | Some("false") => false,
            Some("true") => true,
            Some(other) => {
                self.warn(node, format!("attribute {attr}={other:?} is not a boolean; read as false"));
                false
            }
        }
    }

    fn feature(&mut self, node: Node<'a, 'input>, parent: Option<(FeatureId, &str)>, depth: usize) {
        if depth > MAX_DEPTH {
            self.error(node, format!("feature nesting deeper than {MAX_DEPTH} levels"));
            return;
        }
        for attr in node.attributes() {
            if !matches!(attr.name(), "name" | "mandatory" | "abstract") {
                self.warn(node, format!("unsupported attribute {:?} ignored", attr.name()));
            }
        }
        let name = match node.attribute("name") {
            Some(n) if !n.trim().is_empty() => n.to_owned(),
            Some(_) => {
                self.error(node, "feature name is blank");
                return;
            }
            None => {
                self.error(node, format!("<{}> is missing the name attribute", node.tag_name().name()));
                return;
            }
        };
        let mandatory = self.flag(node, "mandatory");
        let is_abstract = self.flag(node, "abstract");
        let rel_kind = match parent {
            None => RelationshipKind::Mandatory,
            Some((_, "or")) | Some((_, "alt")) => {
                if mandatory {
                    self.warn(node, "mandatory attribute inside a group is ignored");
                }
                if parent.is_some_and(|(_, t)| t == "or") {
                    RelationshipKind::OrMember
                } else {
                    RelationshipKind::XorMember
                }
            }
            Some(_) if mandatory => RelationshipKind::Mandatory,
            Some(_) => RelationshipKind::Optional,
        };
        let id = FeatureId(self.features.len() as u32);
        if let Some((p, _)) = parent {
            self.features[p.0 as usize].children.push(id);
        }
        self.features.push(Feature {
            id,
            name,
            parent: parent.map(|(p, _)| p),
            rel_kind,
            is_abstract,
            children: Vec::new(),
        });

        let mut tag = node.tag_name().name();
        for child in node.children().filter(Node::is_element) {
            let child_tag = child.tag_name().name();
            if FEATURE_TAGS.contains(&child_tag) {
                if tag == "feature" {
                    self.warn(node, "<feature> with child features is read as <and>");
                    tag = "and";
                }
                self.feature(child, Some((id, tag)), depth + 1);
            } else if child_tag != "description" {
                self.warn(child, format!("unknown element <{child_tag}> skipped"));
            }
        }
    }

    fn var(&mut self, node: Node<'a, 'input>) -> Option<String> {
        if node.tag_name().name() != "var" {
            return None;
        }
        let text = node.text().unwrap_or("").trim();
        if text.is_empty() {
            self.error(node, "<var> is empty");
            return None;
        }
        Some(text.to_owned())
    }

    fn elements<'n>(node: Node<'n, 'input>) -> Vec<Node<'n, 'input>> {
        node.children().filter(|c| c.is_element() && c.tag_name().name() != "description").collect()
    }

    /// Recognises `imp(a, b)`, `not(conj(a, b))`, `imp(a, not b)` and
    /// `disj(not a, not b)`.
    fn rule_shape(&mut self, expr: Node<'a, 'input>) -> Option<(ConstraintKind, String, String)> {
        let parts = Self::elements(expr);
        let negated = |n: Node<'a, 'input>| -> Option<Node<'a, 'input>> {
            let inner = Self::elements(n);
            (n.tag_name().name() == "not" && inner.len() == 1).then(|| inner[0])
        };
        match (expr.tag_name().name(), parts.as_slice()) {
            ("imp", [a, b]) => {
                let lhs = self.var(*a)?;
                if let Some(inner) = negated(*b) {
                    let rhs = self.var(inner)?;
                    return Some((ConstraintKind::Excludes, lhs, rhs));
                }
                let rhs = self.var(*b)?;
                Some((ConstraintKind::Requires, lhs, rhs))
            }
            ("not", [conj]) if conj.tag_name().name() == "conj" => match Self::elements(*conj).as_slice() {
                [a, b] => Some((ConstraintKind::Excludes, self.var(*a)?, self.var(*b)?)),
                _ => None,
            },
            ("disj", [a, b]) => {
                let (a, b) = (negated(*a)?, negated(*b)?);
                Some((ConstraintKind::Excludes, self.var(a)?, self.var(b)?))
            }
            _ => None,
        }
    }

    fn constraints(&mut self, node: Node<'a, 'input>) {
        for rule in node.children().filter(Node::is_element) {
            if rule.tag_name().name() != "rule" {
                self.warn(rule, format!("unknown element <{}> skipped", rule.tag_name().name()));
                continue;
            }
            let exprs = Self::elements(rule);
            let errors_before = self.error_count();
            let shape = match exprs.as_slice() {
                [expr] => self.rule_shape(*expr),
                _ => None,
            };
            let Some((kind, lhs, rhs)) = shape else {
                if self.error_count() == errors_before {
                    self.warn(rule, "unsupported constraint rule skipped");
                }
                continue;
            };
            let find = |name: &str| self.features.iter().find(|f| f.name == name).map(|f| f.id);
            match (find(&lhs), find(&rhs)) {
                (Some(l), Some(r)) if l == r => {
                    self.error(rule, format!("constraint relates {lhs:?} to itself"))
                }
                (Some(l), Some(r)) => self.constraints.push(CrossTreeConstraint { kind, lhs: l, rhs: r }),
                (l, _) => {
                    let missing = if l.is_none() { lhs } else { rhs };
                    self.error(rule, format!("constraint references unknown feature {missing:?}"));
                }
            }
        }
    }

    fn error_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error).count()
    }
}

/// Reads a model from raw bytes. Never panics; every problem is a diagnostic.
pub fn parse_xml(bytes: &[u8]) -> Result<Parsed, ParseFailure> {
    let fail = |d: ParseDiagnostic| Err(ParseFailure { diagnostics: vec![d] });
    if bytes.is_empty() {
        return fail(ParseDiagnostic::error("1:1", "empty document"));
    }
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t.strip_prefix('\u{feff}').unwrap_or(t),
        Err(e) => {
            return fail(ParseDiagnostic::error(
                format!("byte {}", e.valid_up_to()),
                "document is not valid UTF-8",
            ))
        }
    };
    let doc = match Document::parse(text) {
        Ok(d) => d,
        Err(e) => {
            let pos = e.pos();
            return fail(ParseDiagnostic::error(format!("{}:{}", pos.row, pos.col), e.to_string()));
        }
    };

    let mut reader = Reader { doc: &doc, features: Vec::new(), constraints: Vec::new(), diagnostics: Vec::new() };
    let top = doc.root_element();
    let mut roots = Vec::new();
    let mut constraint_nodes = Vec::new();
    match top.tag_name().name() {
        "featureModel" => {
            for child in top.children().filter(Node::is_element) {
                match child.tag_name().name() {
                    "struct" => roots.extend(child.children().filter(|c| {
                        c.is_element() && FEATURE_TAGS.contains(&c.tag_name().name())
                    })),
                    "constraints" => constraint_nodes.push(child),
                    other => reader.warn(child, format!("unknown element <{other}> skipped")),
                }
            }
        }
        "struct" => roots.extend(
            top.children().filter(|c| c.is_element() && FEATURE_TAGS.contains(&c.tag_name().name())),
        ),
        tag if FEATURE_TAGS.contains(&tag) => roots.push(top),
        other => {
            reader.error(top, format!("unexpected document element <{other}>"));
        }
    }

    match roots.as_slice() {
        [root] => reader.feature(*root, None, 0),
        [] if reader.error_count() == 0 => reader.error(top, "no root feature found"),
        [] => {}
        [_, second, ..] => reader.error(*second, "struct holds more than one root feature"),
    }
    if reader.error_count() == 0 {
        for node in constraint_nodes {
            reader.constraints(node);
        }
    }

    let Reader { features, constraints, mut diagnostics, .. } = reader;
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(ParseFailure { diagnostics });
    }
    let root_name = features[0].name.clone();
    let model = FeatureModel::from_parts(root_name, FeatureId(0), features, constraints);
    for v in model.validate() {
        let d = ParseDiagnostic {
            severity: v.severity(),
            location: "struct".to_owned(),
            message: v.to_string(),
        };
        diagnostics.push(d);
    }
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(ParseFailure { diagnostics });
    }
    Ok(Parsed { model, warnings: diagnostics })
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn write_feature(model: &FeatureModel, id: FeatureId, depth: usize, out: &mut String) {
    let f = model.feature(id).expect("preorder ids exist");
    let pad = "  ".repeat(depth);
    let tag = if f.children.is_empty() {
        "feature"
    } else {
        match model.group_kind(id) {
            Some(RelationshipKind::OrMember) => "or",
            Some(RelationshipKind::XorMember) => "alt",
            _ => "and",
        }
    };
    let _ = write!(out, "{pad}<{tag}");
    if f.is_abstract {
        out.push_str(" abstract=\"true\"");
    }
    if f.rel_kind == RelationshipKind::Mandatory {
        out.push_str(" mandatory=\"true\"");
    }
    let _ = write!(out, " name=\"{}\"", escape(&f.name));
    if f.children.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");
    for c in &f.children {
        write_feature(model, *c, depth + 1, out);
    }
    let _ = writeln!(out, "{pad}</{tag}>");
}

/// Deterministic UTF-8 output: fixed attribute order (`abstract`,
/// `mandatory`, `name`), two-space indentation, LF line endings.
pub fn serialize_xml(model: &FeatureModel) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    out.push_str("<featureModel>\n");
    out.push_str("  <struct>\n");
    write_feature(model, model.root(), 2, &mut out);
    out.push_str("  </struct>\n");
    if model.constraints().is_empty() {
        out.push_str("  <constraints/>\n");
    } else {
        out.push_str("  <constraints>\n");
        for c in model.constraints() {
            let lhs = escape(model.name_of(c.lhs));
            let rhs = escape(model.name_of(c.rhs));
            out.push_str("    <rule>\n");
            match c.kind {
                ConstraintKind::Requires => {
                    out.push_str("      <imp>\n");
                    let _ = writeln!(out, "        <var>{lhs}</var>");
                    let _ = writeln!(out, "        <var>{rhs}</var>");
                    out.push_str("      </imp>\n");
                }
                ConstraintKind::Excludes => {
                    out.push_str("      <not>\n        <conj>\n");
                    let _ = writeln!(out, "          <var>{lhs}</var>");
                    let _ = writeln!(out, "          <var>{rhs}</var>");
                    out.push_str("        </conj>\n      </not>\n");
                }
            }
            out.push_str("    </rule>\n");
        }
        out.push_str("  </constraints>\n");
    }
    out.push_str("</featureModel>\n");
    out.into_bytes()
}

/// Convenience for callers that hold text.
pub fn parse_str(text: &str) -> Result<Parsed, ParseFailure> {
    parse_xml(text.as_bytes())
}

pub fn to_string(model: &FeatureModel) -> String {
    String::from_utf8(serialize_xml(model)).expect("serializer emits UTF-8")
}
