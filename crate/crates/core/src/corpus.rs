//! Batch runner for a manifest of source files with expected outcomes.
//!
//! Each non-blank line of a manifest that does not start with `#` reads
//! `path TAB expectation TAB flags`. Expectations:
//!
//! * `accept`, or `accept NAME : TYPE` to also pin one definition's type;
//! * `reject KIND`, where `KIND` is an error kind name such as
//!   `EliminationRestricted`;
//! * `normalizes NAME ~> TERM`.
//!
//! The flags column holds command-line switches such as `--cofix-dep-elim`,
//! or `-` for none.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::conversion::Converter;
use crate::kernel::alpha_eq;
use crate::reduce::Reducer;
use crate::session::{CheckedDef, Session};
use crate::surface::{desugar, parse_expr, pretty};

#[derive(Clone, Debug, PartialEq)]
pub enum Expectation {
    Accept(Option<(String, String)>),
    Reject(String),
    NormalizesTo(String, String),
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Accept(None) => f.write_str("accept"),
            Expectation::Accept(Some((name, ty))) => write!(f, "accept {name} : {ty}"),
            Expectation::Reject(kind) => write!(f, "reject {kind}"),
            Expectation::NormalizesTo(name, term) => write!(f, "normalizes {name} ~> {term}"),
        }
    }
}

/// One manifest line. `flags` are command-line switches.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub expectation: Expectation,
    pub flags: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Error)]
#[error("{}:{line}: {message}", path.display())]
pub struct ManifestError {
    pub path: PathBuf,
    pub line: usize,
    pub message: String,
}

/// Parses a manifest. Entry paths are resolved against `base`.
pub fn parse_manifest(text: &str, base: &Path, manifest: &Path) -> Result<Vec<CorpusEntry>, ManifestError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |message: String| ManifestError { path: manifest.to_path_buf(), line, message };
        let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
        let [path, expectation, flags] = cols.as_slice() else {
            return Err(bad(format!("expected 3 tab-separated columns, found {}", cols.len())));
        };
        let expectation = parse_expectation(expectation).map_err(bad)?;
        let flags = match *flags {
            "-" | "" => Vec::new(),
            f => f.split_whitespace().map(str::to_string).collect(),
        };
        out.push(CorpusEntry { path: base.join(path), expectation, flags, line });
    }
    Ok(out)
}

fn parse_expectation(s: &str) -> Result<Expectation, String> {
    let (word, rest) = s.split_once(' ').map_or((s, ""), |(w, r)| (w, r.trim()));
    match word {
        "accept" if rest.is_empty() => Ok(Expectation::Accept(None)),
        "accept" => match rest.split_once(':') {
            Some((name, ty)) => Ok(Expectation::Accept(Some((name.trim().into(), ty.trim().into())))),
            None => Err(format!("expected `accept NAME : TYPE`, found `{s}`")),
        },
        "reject" if !rest.is_empty() && !rest.contains(' ') => Ok(Expectation::Reject(rest.into())),
        "normalizes" => match rest.split_once("~>") {
            Some((name, term)) => Ok(Expectation::NormalizesTo(name.trim().into(), term.trim().into())),
            None => Err(format!("expected `normalizes NAME ~> TERM`, found `{s}`")),
        },
        _ => Err(format!("unknown expectation `{s}`")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub passed: bool,
    /// Why the entry failed, or what happened when it passed.
    pub detail: String,
}

/// Runs one entry in a fresh session built by `session`.
pub fn run_entry(entry: &CorpusEntry, session: &mut Session) -> Outcome {
    let mut defs: Vec<CheckedDef> = Vec::new();
    let loaded = session.load_file(&entry.path, &mut defs);
    let fail = |detail: String| Outcome { passed: false, detail };
    let pass = |detail: String| Outcome { passed: true, detail };
    match (&entry.expectation, loaded) {
        (Expectation::Reject(kind), Err(e)) if e.kind_name() == kind => pass(e.to_string()),
        (Expectation::Reject(kind), Err(e)) => fail(format!("expected {kind}, got {}: {e}", e.kind_name())),
        (Expectation::Reject(kind), Ok(())) => fail(format!("expected {kind}, but the file was accepted")),
        (_, Err(e)) => fail(e.to_string()),
        (Expectation::Accept(None), Ok(())) => pass(format!("{} definitions", defs.len())),
        (Expectation::Accept(Some((name, ty))), Ok(())) => {
            let Some(def) = defs.iter().find(|d| &d.name == name) else {
                return fail(format!("no definition `{name}`"));
            };
            let expected = match parse_expr(ty).map_err(|e| e.to_string()).and_then(|e| desugar(&e).map_err(|e| e.0)) {
                Ok(t) => t,
                Err(e) => return fail(format!("bad expected type: {e}")),
            };
            let red = Reducer::with_fuel(session.env(), session.flags().fuel);
            match Converter::new(&red, session.flags().eta).convertible(&def.ty, &expected) {
                Ok(true) => pass(format!("{name} : {}", pretty(&def.ty))),
                Ok(false) => fail(format!("{name} : {}, expected {ty}", pretty(&def.ty))),
                Err(e) => fail(e.to_string()),
            }
        }
        (Expectation::NormalizesTo(name, term), Ok(())) => {
            let expected = match parse_expr(term).map_err(|e| e.to_string()).and_then(|e| desugar(&e).map_err(|e| e.0)) {
                Ok(t) => t,
                Err(e) => return fail(format!("bad expected term: {e}")),
            };
            match session.eval(name) {
                None => fail(format!("no definition `{name}`")),
                Some(Err(e)) => fail(e.to_string()),
                Some(Ok(nf)) if alpha_eq(&nf, &expected) => pass(pretty(&nf)),
                Some(Ok(nf)) => fail(format!("{name} normalizes to {}", pretty(&nf))),
            }
        }
    }
}
