//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verdict mismatch (regression or `--strict`),
//! 2 unknown name or invalid query, 3 hypothesis violated,
//! 4 catalog parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::catalog::{self, Catalog};
use crate::error::Error;
use crate::repcat::RuleTrace;
use crate::spaces::{self, Classification, SpinTypeStatus};
use crate::template::{eval_bool, render, Binding, IntExpr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_CATALOG: i32 = 4;

const TABLE1: &str = include_str!("../catalog/table1.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "spinr", version, about = "Invariant spin^r structures on homogeneous spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "md")]
    pub format: Format,
    /// Catalog file; defaults to $SPINR_CATALOG, then the bundled catalog.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Treat a "bounded" spin type or "unknown" verdict as a failure.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute the spin types of the homogeneous spheres and compare
    /// with the regression fixture.
    Table1 {
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Classify invariant spin^r structures on a space, e.g. `S4:SO(5)`.
    Classify {
        space: String,
        #[arg(long)]
        r: u32,
    },
    /// Invariant spin type of a space.
    SpinType { space: String },
    /// Whether a holonomy representation lifts to Spin^r(m).
    Holonomy {
        group: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: u32,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub space: Option<String>,
    pub group: Option<String>,
    pub m: Option<u32>,
    pub r: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassOut {
    pub family: String,
    pub origin: String,
    pub constraint: Option<String>,
    pub extends_to: Option<String>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessOut {
    pub family: String,
    pub param: Option<i64>,
    pub generator: String,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceOut {
    pub space: String,
    pub expected: u32,
    pub got: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub space: String,
    pub group: String,
    pub value: String,
    pub instances: Vec<InstanceOut>,
    pub ok: bool,
}

/// Everything a command reports; the JSON form round-trips exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub command: String,
    pub query: Query,
    pub verdict: String,
    pub status: Option<String>,
    pub bounds: Option<[u32; 2]>,
    pub complete: Option<bool>,
    pub count: Option<String>,
    pub classes: Vec<ClassOut>,
    pub witnesses: Vec<WitnessOut>,
    pub certificate: Option<String>,
    pub trace: Vec<String>,
    pub citations: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl OutputRecord {
    fn new(command: &str, query: Query, verdict: String) -> Self {
        OutputRecord {
            command: command.into(),
            query,
            verdict,
            status: None,
            bounds: None,
            complete: None,
            count: None,
            classes: Vec::new(),
            witnesses: Vec::new(),
            certificate: None,
            trace: Vec::new(),
            citations: Vec::new(),
            rows: Vec::new(),
        }
    }

    fn with_classification(mut self, c: &Classification) -> Self {
        self.complete = Some(c.complete);
        self.count = Some(c.count.to_string());
        self.certificate = Some(c.certificate.clone());
        self.classes = c
            .classes
            .iter()
            .map(|k| ClassOut {
                family: k.family.clone(),
                origin: k.origin.to_string(),
                constraint: k.constraint.as_ref().map(ToString::to_string),
                extends_to: k.extends_to.clone(),
                provenance: k.provenance.clone(),
            })
            .collect();
        self.witnesses = c
            .rejected
            .iter()
            .flat_map(|rej| {
                rej.witnesses.iter().map(|w| WitnessOut {
                    family: rej.family.clone(),
                    param: rej.param,
                    generator: w.generator.clone(),
                    image: w.image.to_string(),
                })
            })
            .collect();
        if c.is_empty() {
            if let Some(t) = &c.trace {
                self.trace = trace_lines(t);
            }
        }
        let mut cites: Vec<String> = Vec::new();
        let all = c.classes.iter().map(|k| &k.provenance).chain(c.rejected.iter().map(|r| &r.provenance));
        for p in all {
            if !cites.contains(p) {
                cites.push(p.clone());
            }
        }
        self.citations = cites;
        self
    }
}

fn trace_lines(t: &RuleTrace) -> Vec<String> {
    std::iter::once(t.summary.clone()).chain(t.steps.iter().cloned()).collect()
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotInCatalog { .. } | Error::Rejected(_) => EXIT_UNKNOWN,
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        Error::Catalog { .. } => EXIT_CATALOG,
    }
}

// ---- sphere table fixture -------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fixture {
    row: Vec<FixtureRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureRow {
    space: String,
    group: String,
    display: String,
    pattern: String,
    expected: Vec<Piece>,
    #[serde(default)]
    instances: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Piece {
    when: Option<String>,
    value: IntExpr,
}

fn fixture_err(msg: String) -> Error {
    Error::Catalog { line: 0, message: format!("table fixture: {msg}") }
}

fn expected_value(pieces: &[Piece], b: &Binding) -> Result<u32, Error> {
    for p in pieces {
        let holds = match &p.when {
            Some(w) => eval_bool(w, b).map_err(fixture_err)?,
            None => true,
        };
        if holds {
            let v = p.value.eval(b).map_err(fixture_err)?;
            return u32::try_from(v).map_err(|_| fixture_err(format!("expected value {v} is negative")));
        }
    }
    Err(fixture_err("no piece of `expected` applies".into()))
}

/// Recomputes every fixture row; rows are reported in fixture order.
pub fn table1(catalog: &Catalog, fixture: Option<&str>) -> Result<OutputRecord, Error> {
    let fx: Fixture = toml::from_str(fixture.unwrap_or(TABLE1)).map_err(|e| fixture_err(e.message().to_owned()))?;
    let mut rows = Vec::new();
    for row in &fx.row {
        let bindings: Vec<Binding> = if row.instances.is_empty() {
            vec![Binding::none()]
        } else {
            row.instances.iter().map(|&v| Binding::new("n", v)).collect()
        };
        let mut instances = Vec::new();
        for b in &bindings {
            let name = render(&row.pattern, b).map_err(fixture_err)?;
            let expected = expected_value(&row.expected, b)?;
            let st = spaces::invariant_spin_type(catalog, &catalog.space(&name)?)?;
            instances.push(InstanceOut {
                space: name,
                expected,
                got: st.to_string(),
                ok: st.value() == Some(expected),
            });
        }
        rows.push(TableRow {
            space: row.space.clone(),
            group: row.group.clone(),
            value: row.display.clone(),
            ok: instances.iter().all(|i| i.ok),
            instances,
        });
    }
    let ok = rows.iter().all(|r| r.ok);
    let mut rec = OutputRecord::new("table1", Query::default(), if ok { "match" } else { "mismatch" }.into());
    rec.status = Some(if ok { "exact" } else { "mismatch" }.into());
    rec.rows = rows;
    Ok(rec)
}

// ---- commands -------------------------------------------------------------

pub fn cmd_classify(catalog: &Catalog, space: &str, r: u32) -> Result<OutputRecord, Error> {
    let s = catalog.space(space)?;
    let c = spaces::classify(catalog, &s, r)?;
    let verdict = if c.is_empty() {
        "no invariant structure".to_owned()
    } else {
        match c.count {
            crate::spaces::ClassCount::Infinite => "infinite family".to_owned(),
            crate::spaces::ClassCount::Finite(1) => "1 class".to_owned(),
            crate::spaces::ClassCount::Finite(k) => format!("{k} classes"),
        }
    };
    let query = Query {
        space: Some(s.name.clone()),
        r: Some(r),
        ..Query::default()
    };
    let mut rec = OutputRecord::new("classify", query, verdict).with_classification(&c);
    rec.status = Some(if c.complete { "complete" } else { "incomplete" }.into());
    rec.citations.insert(0, s.provenance);
    Ok(rec)
}

pub fn cmd_spin_type(catalog: &Catalog, space: &str) -> Result<OutputRecord, Error> {
    let s = catalog.space(space)?;
    let st = spaces::invariant_spin_type(catalog, &s)?;
    let query = Query {
        space: Some(s.name.clone()),
        ..Query::default()
    };
    let verdict = match st.value() {
        Some(v) => v.to_string(),
        None => format!("[{}, {}]", st.lo, st.hi),
    };
    let mut rec = OutputRecord::new("spin-type", query, verdict);
    rec.status = Some(st.status.to_string());
    rec.bounds = Some([st.lo, st.hi]);
    rec.complete = Some(st.status == SpinTypeStatus::Exact);
    rec.classes = st
        .witnesses
        .iter()
        .map(|k| ClassOut {
            family: k.family.clone(),
            origin: k.origin.to_string(),
            constraint: k.constraint.as_ref().map(ToString::to_string),
            extends_to: k.extends_to.clone(),
            provenance: k.provenance.clone(),
        })
        .collect();
    rec.citations = vec![s.provenance];
    Ok(rec)
}

pub fn cmd_holonomy(catalog: &Catalog, group: &str, m: u32, r: u32) -> Result<OutputRecord, Error> {
    let v = spaces::holonomy_lift(catalog, group, m, r)?;
    let query = Query {
        group: Some(v.group.clone()),
        m: Some(m),
        r: Some(r),
        ..Query::default()
    };
    let mut rec = OutputRecord::new("holonomy", query, v.verdict.to_string()).with_classification(&v.classification);
    rec.status = Some(if v.classification.complete { "complete" } else { "incomplete" }.into());
    rec.citations.insert(0, v.provenance);
    Ok(rec)
}

// ---- rendering ------------------------------------------------------------

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn render_md(rec: &OutputRecord) -> String {
    let mut out = String::new();
    if rec.command == "table1" {
        out.push_str("| Space | Group | Σ(M,G) | Checked instances | Status |\n");
        out.push_str("|---|---|---|---|---|\n");
        for row in &rec.rows {
            let inst: Vec<String> = row
                .instances
                .iter()
                .map(|i| {
                    if i.ok {
                        format!("{} → {}", i.space, i.expected)
                    } else {
                        format!("{} → {}, expected {}", i.space, i.got, i.expected)
                    }
                })
                .collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                md_cell(&row.space),
                md_cell(&row.group),
                md_cell(&row.value),
                md_cell(&inst.join("; ")),
                if row.ok { "ok" } else { "MISMATCH" }
            );
        }
        return out;
    }

    let q = &rec.query;
    let subject = q.space.clone().or_else(|| q.group.clone()).unwrap_or_default();
    let mut head = format!("## {} {subject}", rec.command);
    if let Some(m) = q.m {
        let _ = write!(head, " m = {m}");
    }
    if let Some(r) = q.r {
        let _ = write!(head, " r = {r}");
    }
    let _ = writeln!(out, "{head}\n");
    let _ = write!(out, "**Result:** {}", rec.verdict);
    if let Some(s) = &rec.status {
        let _ = write!(out, " ({s})");
    }
    out.push_str("\n\n");
    if let Some(c) = &rec.certificate {
        let _ = writeln!(out, "**Certificate:** {c}\n");
    }
    if !rec.classes.is_empty() {
        out.push_str("| Family | Constraint | Origin | Extends to |\n|---|---|---|---|\n");
        for c in &rec.classes {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                md_cell(&c.family),
                md_cell(c.constraint.as_deref().unwrap_or("—")),
                md_cell(&c.origin),
                md_cell(c.extends_to.as_deref().unwrap_or("—"))
            );
        }
        out.push('\n');
    }
    if !rec.witnesses.is_empty() {
        out.push_str("**Non-lifting families:**\n\n");
        for w in &rec.witnesses {
            let at = w.param.map(|p| format!(" at s = {p}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "- {}{at}: generator `{}` maps to {} outside the covering subgroup",
                w.family, w.generator, w.image
            );
        }
        out.push('\n');
    }
    if !rec.trace.is_empty() {
        out.push_str("**Rule engine:**\n\n");
        for t in &rec.trace {
            let _ = writeln!(out, "- {t}");
        }
        out.push('\n');
    }
    if !rec.citations.is_empty() {
        out.push_str("**Sources:**\n\n");
        for c in &rec.citations {
            let _ = writeln!(out, "- {c}");
        }
    }
    out
}

pub fn render_json(rec: &OutputRecord) -> String {
    serde_json::to_string_pretty(rec).expect("output records serialize")
}

fn load_catalog(path: Option<&Path>) -> Result<std::borrow::Cow<'static, Catalog>, Error> {
    catalog::resolve(path)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_UNKNOWN;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = load_catalog(cli.catalog.as_deref()).and_then(|cat| {
        let fixture = match &cli.command {
            Command::Table1 { fixture: Some(p) } => Some(
                std::fs::read_to_string(p).map_err(|e| fixture_err(format!("cannot read {}: {e}", p.display())))?,
            ),
            _ => None,
        };
        match &cli.command {
            Command::Table1 { .. } => table1(&cat, fixture.as_deref()),
            Command::Classify { space, r } => cmd_classify(&cat, space, *r),
            Command::SpinType { space } => cmd_spin_type(&cat, space),
            Command::Holonomy { group, m, r } => cmd_holonomy(&cat, group, *m, *r),
        }
    });
    let rec = match result {
        Ok(rec) => rec,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = match cli.format {
        Format::Md => render_md(&rec),
        Format::Json => render_json(&rec) + "\n",
    };
    let _ = out.write_all(text.as_bytes());

    if rec.command == "table1" && rec.verdict != "match" {
        for row in rec.rows.iter().filter(|r| !r.ok) {
            for i in row.instances.iter().filter(|i| !i.ok) {
                let _ = writeln!(err, "- {}: expected {}\n+ {}: got {}", i.space, i.expected, i.space, i.got);
            }
        }
        return EXIT_MISMATCH;
    }
    if cli.strict && matches!(rec.status.as_deref(), Some("bounded")) || cli.strict && rec.verdict == "unknown" {
        let _ = writeln!(err, "strict mode: result is not exact");
        return EXIT_MISMATCH;
    }
    EXIT_OK
}
