//! The `algcic` command line.
//!
//! Command-line switches are fixed for the whole run; `#flag` pragmas in a
//! file can change any flag that was not given on the command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::corpus::{parse_manifest, run_entry};
use crate::session::{CheckedDef, LoadError, Positivity, Session};
use crate::surface::pretty;
use crate::typing::Flags;

#[derive(Debug, Parser)]
#[command(name = "algcic", version, about = "Check, evaluate and query algebraic CIC source files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-check files and print the type of every definition.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// One JSON object per definition.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Print the normal form of a definition.
    Eval {
        path: PathBuf,
        #[arg(long = "def")]
        def: String,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Check strict positivity of the family a definition denotes.
    Positivity {
        path: PathBuf,
        #[arg(long = "def")]
        def: String,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Run every entry of a corpus manifest.
    Corpus { manifest: PathBuf },
}

/// Switches shared by every command that checks code.
#[derive(Clone, Debug, Default, PartialEq, Eq, Args)]
pub struct FlagArgs {
    /// Allow products into Set over any domain, and `[A]set`.
    #[arg(long)]
    pub impredicative_set: bool,
    /// Dependent elimination for co-inductive families.
    #[arg(long)]
    pub cofix_dep_elim: bool,
    /// Refuse properly indexed families in Prop over an index in Type.
    #[arg(long)]
    pub no_singleton_proper_index: bool,
    /// Turn off η in conversion.
    #[arg(long)]
    pub no_eta: bool,
    /// Reduction step budget per definition.
    #[arg(long, value_name = "N")]
    pub fuel: Option<u64>,
}

#[derive(Parser)]
#[command(no_binary_name = true)]
struct Switches {
    #[command(flatten)]
    flags: FlagArgs,
}

impl FlagArgs {
    /// Parses switches written as on the command line.
    pub fn from_switches<S: AsRef<str>>(switches: &[S]) -> Result<FlagArgs, clap::Error> {
        Switches::try_parse_from(switches.iter().map(AsRef::as_ref)).map(|s| s.flags)
    }

    pub fn flags(&self) -> Flags {
        let mut f = Flags::default();
        for (name, on) in self.locked() {
            f.set(name, on);
        }
        if let Some(fuel) = self.fuel {
            f.fuel = fuel;
        }
        f
    }

    /// Flags given explicitly, with their values.
    fn locked(&self) -> Vec<(&'static str, bool)> {
        let mut out = Vec::new();
        if self.impredicative_set {
            out.push(("impredicative-set", true));
        }
        if self.cofix_dep_elim {
            out.push(("cofix-dep-elim", true));
        }
        if self.no_singleton_proper_index {
            out.push(("singleton-proper-index", false));
        }
        if self.no_eta {
            out.push(("eta", false));
        }
        out
    }

    pub fn session(&self) -> Session {
        Session::with_locked(self.flags(), self.locked().into_iter().map(|(n, _)| n))
    }
}

#[derive(Serialize)]
struct JsonError<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    name: Option<&'a str>,
    #[serde(rename = "type")]
    ty: Option<String>,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<JsonError<'a>>,
}

/// Runs a command, writing its report to `out`. Returns the exit status.
pub fn run(command: &Command, out: &mut dyn Write) -> io::Result<i32> {
    match command {
        Command::Check { paths, json, flags } => check(paths, *json, flags, out),
        Command::Eval { path, def, flags } => eval(path, def, flags, out),
        Command::Positivity { path, def, flags } => positivity(path, def, flags, out),
        Command::Corpus { manifest } => corpus(manifest, out),
    }
}

/// `Kind: file:line: in `def`: message (at path)`
pub fn render_error(e: &LoadError) -> String {
    match e {
        LoadError::Type { error, .. } => format!("error[{}]: {e}", error.kind.name()),
        _ => format!("error[{}]: {e}", e.kind_name()),
    }
}

fn check(paths: &[PathBuf], json: bool, flags: &FlagArgs, out: &mut dyn Write) -> io::Result<i32> {
    let mut session = flags.session();
    for path in paths {
        let mut defs = Vec::new();
        let result = session.load_file(path, &mut defs);
        for d in &defs {
            if json {
                let rec = JsonRecord { name: Some(&d.name), ty: Some(pretty(&d.ty)), status: "ok", error: None };
                writeln!(out, "{}", serde_json::to_string(&rec).map_err(io::Error::other)?)?;
            } else {
                writeln!(out, "{}", render_def(d))?;
            }
        }
        if let Err(e) = result {
            if json {
                let rec = JsonRecord {
                    name: e.definition(),
                    ty: None,
                    status: "error",
                    error: Some(JsonError { kind: e.kind_name(), message: e.to_string() }),
                };
                writeln!(out, "{}", serde_json::to_string(&rec).map_err(io::Error::other)?)?;
            } else {
                writeln!(out, "{}", render_error(&e))?;
            }
            return Ok(e.exit_code());
        }
    }
    Ok(0)
}

fn render_def(d: &CheckedDef) -> String {
    format!("{} : {}", d.name, pretty(&d.ty))
}

fn eval(path: &Path, def: &str, flags: &FlagArgs, out: &mut dyn Write) -> io::Result<i32> {
    let mut session = flags.session();
    if let Err(e) = session.load_file(path, &mut Vec::new()) {
        writeln!(out, "{}", render_error(&e))?;
        return Ok(e.exit_code());
    }
    match session.eval(def) {
        None => {
            writeln!(out, "error: no definition `{def}`")?;
            Ok(1)
        }
        Some(Err(e)) => {
            writeln!(out, "error[FuelExhausted]: {e}")?;
            Ok(1)
        }
        Some(Ok(nf)) => {
            writeln!(out, "{}", pretty(&nf))?;
            Ok(0)
        }
    }
}

fn positivity(path: &Path, def: &str, flags: &FlagArgs, out: &mut dyn Write) -> io::Result<i32> {
    let mut session = flags.session();
    let body = match session.load_until(path, def) {
        Err(e) => {
            writeln!(out, "{}", render_error(&e))?;
            return Ok(e.exit_code());
        }
        Ok(None) => {
            writeln!(out, "error: no definition `{def}`")?;
            return Ok(1);
        }
        Ok(Some(body)) => body,
    };
    match session.positivity(&body) {
        Ok(Some(Positivity::Ok)) => {
            writeln!(out, "ok")?;
            Ok(0)
        }
        Ok(Some(Positivity::Violation(why))) => {
            writeln!(out, "violation: {why}")?;
            Ok(1)
        }
        Ok(None) => {
            writeln!(out, "error: `{def}` does not denote an inductive or co-inductive family")?;
            Ok(1)
        }
        Err(e) => {
            writeln!(out, "error[FuelExhausted]: {e}")?;
            Ok(1)
        }
    }
}

fn corpus(manifest: &Path, out: &mut dyn Write) -> io::Result<i32> {
    let text = match fs::read_to_string(manifest) {
        Ok(t) => t,
        Err(e) => {
            writeln!(out, "error[IoError]: {}: {e}", manifest.display())?;
            return Ok(2);
        }
    };
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = match parse_manifest(&text, base, manifest) {
        Ok(entries) => entries,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(1);
        }
    };
    let (mut passed, mut failed) = (0usize, 0usize);
    for entry in &entries {
        let shown = entry.path.strip_prefix(base).unwrap_or(&entry.path).display().to_string();
        let outcome = match FlagArgs::from_switches(&entry.flags) {
            Ok(flags) => run_entry(entry, &mut flags.session()),
            Err(e) => crate::corpus::Outcome { passed: false, detail: format!("bad flags: {}", e.kind()) },
        };
        let mark = if outcome.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{mark} {shown}: {} ({})", entry.expectation, outcome.detail)?;
        if outcome.passed {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    writeln!(out, "{passed} passed, {failed} failed")?;
    Ok(if failed == 0 { 0 } else { 1 })
}
