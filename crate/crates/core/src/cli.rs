//! The `fmit` command line.
//!
//! Exit codes: 0 success, 1 model/parse/merge failure, 2 bad usage.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::compare::{compare, CompareOptions, DEFAULT_NAME_THRESHOLD};
use crate::logic::{enumerate_configurations, DEFAULT_CONFIGURATION_CAP};
use crate::merge::{
    auto_integrate, detect_conflicts, integrate, Choice, Conflict, IntegrationMode, MergeStrategy, Session,
    DEFAULT_MODE_THRESHOLD,
};
use crate::model::{FeatureModel, Severity};
use crate::report::{default_report_name, render_report, ReportInput};
use crate::scenarios::run_all;
use crate::server::{ServerConfig, DEFAULT_CAPACITY, DEFAULT_HOST, DEFAULT_PORT};
use crate::xml::{parse_xml, serialize_xml};

#[derive(Debug, Parser)]
#[command(name = "fmit", version, about = "Compare and integrate feature models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score two models and print the equivalence report.
    Compare(CompareArgs),
    /// Integrate two models automatically or by resolving conflicts.
    Merge(MergeArgs),
    /// List every valid configuration of a model.
    Enumerate {
        model: PathBuf,
        /// Give up past this many configurations.
        #[arg(long = "max", default_value_t = DEFAULT_CONFIGURATION_CAP)]
        max: usize,
    },
    /// Check a model and print its violations.
    Validate { model: PathBuf },
    /// Run every scenario in a directory of `base.xml`/`other.xml` pairs.
    Bench {
        #[arg(long)]
        scenarios: PathBuf,
        #[command(flatten)]
        scoring: Scoring,
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = DEFAULT_HOST)]
        host: String,
        /// Allow cross-origin requests from anywhere.
        #[arg(long)]
        cors: bool,
        /// Directory with the UI bundle, served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAPACITY)]
        capacity: usize,
    },
}

#[derive(Debug, Clone, Args)]
struct Scoring {
    /// CEE at or above which integration is automatic.
    #[arg(long, env = "FMIT_THRESHOLD", default_value_t = DEFAULT_MODE_THRESHOLD)]
    threshold: f64,
    /// Minimum name similarity for two features to pair.
    #[arg(long, default_value_t = DEFAULT_NAME_THRESHOLD)]
    tau: f64,
}

impl Scoring {
    fn options(&self) -> Result<CompareOptions, CliError> {
        for (name, v) in [("--threshold", self.threshold), ("--tau", self.tau)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(CliError::Usage(format!("{name} must be in (0, 1], got {v}")));
            }
        }
        Ok(CompareOptions { name_threshold: self.tau, mode_threshold: self.threshold })
    }
}

#[derive(Debug, Args)]
struct Pair {
    base: PathBuf,
    other: PathBuf,
    #[command(flatten)]
    scoring: Scoring,
    /// Write the text report; without a path it goes to `<base>_<other>_fmit.txt`.
    #[arg(long, num_args = 0..=1)]
    report: Option<Option<PathBuf>>,
    /// Timestamp printed in the report (defaults to now).
    #[arg(long, hide = true)]
    timestamp: Option<String>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    pair: Pair,
    /// Print JSON instead of the text report.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Semi,
}

#[derive(Debug, Args)]
struct MergeArgs {
    #[command(flatten)]
    pair: Pair,
    /// Defaults to the mode the comparison recommends.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Automatic mode only; without it all four strategies are written.
    #[arg(long, value_parser = parse_strategy)]
    strategy: Option<MergeStrategy>,
    /// Output file (single result) or stem (four results).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Semi-automatic mode: file of `<conflict id> <b|o>` lines.
    #[arg(long)]
    decisions: Option<PathBuf>,
}

fn parse_strategy(s: &str) -> Result<MergeStrategy, String> {
    s.parse()
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Failure(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

/// Terminal streams, swappable for tests.
pub struct Streams<'a> {
    pub input: &'a mut dyn BufRead,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Runs with the process's own stdin/stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    run_with(args, Streams { input: &mut input, out: &mut out, err: &mut err })
}

pub fn run_with<I, T>(args: I, io: Streams<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { io.err.write_all(text.as_bytes()) } else { io.out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compare(a) => cmd_compare(a, io.out, io.err),
        Command::Merge(a) => cmd_merge(a, io.input, io.out, io.err),
        Command::Enumerate { model, max } => cmd_enumerate(&model, max, io.out, io.err),
        Command::Validate { model } => cmd_validate(&model, io.out, io.err),
        Command::Bench { scenarios, scoring, json } => cmd_bench(&scenarios, &scoring, json, io.out),
        Command::Serve { port, host, cors, static_dir, capacity } => {
            let config = ServerConfig { host, port, capacity, permissive_cors: cors, static_dir, ..Default::default() };
            cmd_serve(config)
        }
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            2
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            1
        }
    }
}

fn load(path: &Path, err: &mut dyn Write) -> Result<FeatureModel, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Failure(format!("cannot read {}: {e}", path.display())))?;
    match parse_xml(&bytes) {
        Ok(parsed) => {
            for w in &parsed.warnings {
                writeln!(err, "{}:{w}", path.display())?;
            }
            Ok(parsed.model)
        }
        Err(failure) => {
            for d in &failure.diagnostics {
                writeln!(err, "{}:{d}", path.display())?;
            }
            Err(CliError::Failure(format!("{} is not a valid feature model", path.display())))
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "model".into())
}

fn timestamp(given: &Option<String>) -> String {
    given.clone().unwrap_or_else(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}

fn write_report(pair: &Pair, text: &str, out: &mut dyn Write) -> CliResult {
    if let Some(target) = &pair.report {
        let path = target
            .clone()
            .unwrap_or_else(|| PathBuf::from(default_report_name(&stem(&pair.base), &stem(&pair.other))));
        fs::write(&path, text)?;
        writeln!(out, "report written to {}", path.display())?;
    }
    Ok(())
}

fn cmd_compare(a: CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let options = a.pair.scoring.options()?;
    let base = load(&a.pair.base, err)?;
    let other = load(&a.pair.other, err)?;
    let cmp = compare(&base, &other, &options);
    let conflicts = detect_conflicts(&base, &other, &cmp.matching);
    let ts = timestamp(&a.pair.timestamp);
    let mut input = ReportInput::new(base.name(), other.name(), &cmp.report, ts.clone());
    input.conflicts = &conflicts;
    let text = render_report(&input).to_text();
    if a.json {
        let pairs: Vec<_> = cmp
            .matching
            .pairs
            .iter()
            .map(|p| json!({ "base": base.name_of(p.base), "other": other.name_of(p.other), "name_score": p.name_score }))
            .collect();
        let doc = json!({
            "base": base.name(),
            "other": other.name(),
            "timestamp": ts,
            "report": cmp.report,
            "pairs": pairs,
            "conflicts": conflicts,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("report serializes"))?;
    } else {
        out.write_all(text.as_bytes())?;
    }
    write_report(&a.pair, &text, out)
}

fn output_path(out: &Option<PathBuf>, default_stem: &str, suffix: &str, single: bool) -> PathBuf {
    match out {
        Some(p) if single => p.clone(),
        Some(p) => {
            let s = p.with_extension("");
            PathBuf::from(format!("{}_{suffix}.xml", s.display()))
        }
        None => PathBuf::from(format!("{default_stem}_{suffix}.xml")),
    }
}

fn cmd_merge(a: MergeArgs, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let options = a.pair.scoring.options()?;
    let base = load(&a.pair.base, err)?;
    let other = load(&a.pair.other, err)?;
    let default_stem = format!("{}_{}", stem(&a.pair.base), stem(&a.pair.other));
    let cmp = compare(&base, &other, &options);
    let mode = match a.mode {
        Some(ModeArg::Auto) => IntegrationMode::Automatic,
        Some(ModeArg::Semi) => IntegrationMode::SemiAutomatic,
        None => cmp.report.recommended_mode,
    };
    let ts = timestamp(&a.pair.timestamp);

    match mode {
        IntegrationMode::Automatic => {
            if a.decisions.is_some() {
                return Err(CliError::Usage("--decisions only applies to --mode semi".into()));
            }
            let outputs = match a.strategy {
                Some(s) => integrate(&base, &other, &cmp.matching, s).map(|o| vec![o]),
                None => auto_integrate(&base, &other, &cmp.matching).map(Vec::from),
            }
            .map_err(|e| CliError::Failure(e.to_string()))?;
            let conflicts = detect_conflicts(&base, &other, &cmp.matching);
            let mut input = ReportInput::new(base.name(), other.name(), &cmp.report, ts);
            input.conflicts = &conflicts;
            input.strategies = &outputs;
            let text = render_report(&input).to_text();
            out.write_all(text.as_bytes())?;
            let single = outputs.len() == 1;
            for o in &outputs {
                let path = output_path(&a.out, &default_stem, o.strategy.as_str(), single);
                fs::write(&path, serialize_xml(&o.model))?;
                writeln!(out, "wrote {}", path.display())?;
            }
            write_report(&a.pair, &text, out)
        }
        IntegrationMode::SemiAutomatic => {
            if a.strategy.is_some() {
                return Err(CliError::Usage("--strategy only applies to --mode auto".into()));
            }
            let mut session =
                Session::start(base, other, options).map_err(|e| CliError::Failure(e.to_string()))?;
            let pending = session.pending();
            let choices = match &a.decisions {
                Some(path) => read_decisions(path, &session.conflicts)?,
                None => prompt_decisions(&session, &pending, input, out)?,
            };
            for (id, choice) in choices {
                session.resolve(id, choice).map_err(|e| CliError::Failure(e.to_string()))?;
            }
            let merged = session.finalize().map_err(|e| CliError::Failure(e.to_string()))?.clone();
            let post = session.post_report.clone().expect("finalized session has a post report");
            let mut input = ReportInput::new(session.base.name(), session.other.name(), &session.report, ts);
            input.conflicts = &session.conflicts;
            input.merged = Some((&merged, &post));
            let text = render_report(&input).to_text();
            out.write_all(text.as_bytes())?;
            let path = output_path(&a.out, &default_stem, "merged", true);
            fs::write(&path, serialize_xml(&merged))?;
            writeln!(out, "wrote {}", path.display())?;
            write_report(&a.pair, &text, out)
        }
    }
}

/// Parses `<id> <choice>` lines. Blank lines and `#` comments are skipped.
/// Every resolvable conflict needs exactly one entry.
fn read_decisions(path: &Path, conflicts: &[Conflict]) -> Result<Vec<(u32, Choice)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Failure(format!("cannot read {}: {e}", path.display())))?;
    let bad = |n: usize, msg: String| CliError::Failure(format!("{}:{n}: {msg}", path.display()));
    let mut choices: Vec<(u32, Choice)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(id), Some(choice), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(i + 1, format!("expected `<id> <choice>`, got `{line}`")));
        };
        let id: u32 = id.parse().map_err(|_| bad(i + 1, format!("`{id}` is not a conflict id")))?;
        let choice: Choice = choice.parse().map_err(|e| bad(i + 1, e))?;
        match conflicts.iter().find(|c| c.id == id) {
            None => return Err(bad(i + 1, format!("no conflict with id {id}"))),
            Some(c) if !c.is_resolvable() => return Err(bad(i + 1, format!("conflict {id} is structural"))),
            Some(_) if choices.iter().any(|(x, _)| *x == id) => {
                return Err(bad(i + 1, format!("conflict {id} decided twice")))
            }
            Some(_) => choices.push((id, choice)),
        }
    }
    let missing: Vec<_> = conflicts
        .iter()
        .filter(|c| c.is_resolvable() && !choices.iter().any(|(id, _)| *id == c.id))
        .map(|c| c.id.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Failure(format!(
            "{} has no decision for conflict(s) {}",
            path.display(),
            missing.join(", ")
        )));
    }
    Ok(choices)
}

fn prompt_decisions(
    session: &Session,
    pending: &[u32],
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<Vec<(u32, Choice)>, CliError> {
    let mut choices = Vec::new();
    for id in pending {
        let c = session.conflict(*id).expect("pending ids exist");
        writeln!(out, "Conflict #{} ({}): base has `{}`, other has `{}`.", c.id, c.kind, c.base_value, c.other_value)?;
        loop {
            write!(out, "Keep the base value (b) or the other value (o)? ")?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                return Err(CliError::Failure(format!("input ended before conflict {} was decided", c.id)));
            }
            match line.trim() {
                "b" | "B" => break choices.push((c.id, Choice::KeepBase)),
                "o" | "O" => break choices.push((c.id, Choice::KeepOther)),
                _ => writeln!(out, "Invalid choice, answer b or o.")?,
            }
        }
    }
    Ok(choices)
}

fn cmd_enumerate(path: &Path, max: usize, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if max == 0 {
        return Err(CliError::Usage("--max must be positive".into()));
    }
    let model = load(path, err)?;
    let configs = enumerate_configurations(&model, max).map_err(|e| CliError::Failure(e.to_string()))?;
    writeln!(out, "{} configurations", configs.len())?;
    for c in &configs {
        writeln!(out, "{c}")?;
    }
    Ok(())
}

fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let model = load(path, err)?;
    let violations = model.validate();
    for v in &violations {
        let sev = match v.severity() {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        writeln!(out, "{sev}: {v}")?;
    }
    if violations.iter().any(|v| v.severity() == Severity::Error) {
        return Err(CliError::Failure(format!("{} has errors", path.display())));
    }
    writeln!(out, "{}: ok ({} features, {} constraints)", path.display(), model.len(), model.constraints().len())?;
    Ok(())
}

fn cmd_bench(dir: &Path, scoring: &Scoring, json: bool, out: &mut dyn Write) -> CliResult {
    let options = scoring.options()?;
    let outcomes = run_all(dir, &options).map_err(|e| CliError::Failure(e.to_string()))?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&outcomes).expect("outcomes serialize"))?;
        return Ok(());
    }
    writeln!(out, "scenario\tbase NF/NR\tother NF/NR\tconflicts\tcee\tmode")?;
    for o in &outcomes {
        writeln!(
            out,
            "{}\t{}/{}\t{}/{}\t{}\t{:.4}\t{}",
            o.name, o.base.features, o.base.relationships, o.other.features, o.other.relationships, o.conflicts, o.cee, o.mode
        )?;
    }
    Ok(())
}

fn cmd_serve(config: ServerConfig) -> CliResult {
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(crate::server::serve(config))?;
    Ok(())
}
