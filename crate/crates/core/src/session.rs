//! Loading source files into a checked global environment.
//!
//! A session owns the environment and the current flags. `#flag` pragmas
//! change the flags for the rest of the file they appear in, except for
//! flags that were fixed on the command line, which always win.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::kernel::{GlobalEnv, Term};
use crate::positivity::strictly_positive;
use crate::reduce::{ReduceError, Reducer};
use crate::surface::ast::{Decl, Expr};
use crate::surface::{desugar, elaborate, parse_file, ParseError};
use crate::typing::{check_definition, Flags, TypeError, FLAG_NAMES};

/// A definition accepted into the environment.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckedDef {
    pub name: String,
    pub ty: Term,
    pub line: usize,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{file}:{error}")]
    Parse { file: String, error: ParseError },
    #[error("{file}:{line}: {message}")]
    Scope { file: String, line: usize, message: String },
    #[error("{file}:{line}: in `{name}`: {error}")]
    Type { file: String, line: usize, name: String, error: Box<TypeError> },
}

impl LoadError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Io { .. } => 2,
            _ => 1,
        }
    }

    /// Stable kind name: the type error kind, or the stage that failed.
    pub fn kind_name(&self) -> &'static str {
        match self {
            LoadError::Io { .. } => "IoError",
            LoadError::Parse { .. } => "ParseError",
            LoadError::Scope { .. } => "ScopeError",
            LoadError::Type { error, .. } => error.kind.name(),
        }
    }

    pub fn definition(&self) -> Option<&str> {
        match self {
            LoadError::Type { name, .. } => Some(name),
            _ => None,
        }
    }
}

/// Result of a positivity query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    Ok,
    Violation(String),
}

pub struct Session {
    env: GlobalEnv,
    flags: Flags,
    locked: HashSet<String>,
    loaded: HashSet<PathBuf>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(Flags::default())
    }
}

impl Session {
    pub fn new(flags: Flags) -> Self {
        Session { env: GlobalEnv::new(), flags, locked: HashSet::new(), loaded: HashSet::new() }
    }

    /// `locked` names flags whose value in `flags` came from the command
    /// line; pragmas for them are ignored.
    pub fn with_locked<I, S>(flags: Flags, locked: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut s = Session::new(flags);
        s.locked = locked.into_iter().map(Into::into).collect();
        s
    }

    pub fn env(&self) -> &GlobalEnv {
        &self.env
    }

    pub fn flags(&self) -> &Flags {
        &self.flags
    }

    /// Loads a file and everything it requires. Only the file's own
    /// definitions are reported in `out`, even when loading fails midway.
    pub fn load_file(&mut self, path: &Path, out: &mut Vec<CheckedDef>) -> Result<(), LoadError> {
        let src = read(path)?;
        if let Ok(canon) = path.canonicalize() {
            self.loaded.insert(canon);
        }
        self.load_source(&src, &path.display().to_string(), path.parent(), out, None).map(|_| ())
    }

    /// Loads source text. `base` resolves `#require` paths.
    pub fn load_str(
        &mut self,
        src: &str,
        file: &str,
        base: Option<&Path>,
        out: &mut Vec<CheckedDef>,
    ) -> Result<(), LoadError> {
        self.load_source(src, file, base, out, None).map(|_| ())
    }

    /// Loads the file up to the definition `name` and returns that
    /// definition's body without checking it.
    pub fn load_until(&mut self, path: &Path, name: &str) -> Result<Option<Term>, LoadError> {
        let src = read(path)?;
        self.load_source(&src, &path.display().to_string(), path.parent(), &mut Vec::new(), Some(name))
    }

    fn load_source(
        &mut self,
        src: &str,
        file: &str,
        base: Option<&Path>,
        out: &mut Vec<CheckedDef>,
        stop_at: Option<&str>,
    ) -> Result<Option<Term>, LoadError> {
        let decls = parse_file(src).map_err(|error| LoadError::Parse { file: file.into(), error })?;
        let saved = self.flags;
        let result = self.load_decls(&decls, file, base, out, stop_at);
        self.flags = saved;
        result
    }

    fn load_decls(
        &mut self,
        decls: &[Decl],
        file: &str,
        base: Option<&Path>,
        out: &mut Vec<CheckedDef>,
        stop_at: Option<&str>,
    ) -> Result<Option<Term>, LoadError> {
        let scope = |line: usize, message: String| LoadError::Scope { file: file.into(), line, message };
        for decl in decls {
            match decl {
                Decl::Def { name, ty, body, line } => {
                    if stop_at == Some(name.as_str()) {
                        return desugar(body).map(Some).map_err(|e| scope(*line, e.0));
                    }
                    out.push(self.define(file, name, ty.as_ref(), body, *line)?);
                }
                Decl::Inductive(block) => {
                    let emitted = elaborate(block).map_err(|e| scope(e.line, e.message))?;
                    for e in emitted {
                        if stop_at == Some(e.name.as_str()) {
                            return desugar(&e.body).map(Some).map_err(|err| scope(e.line, err.0));
                        }
                        out.push(self.define(file, &e.name, Some(&e.ty), &e.body, e.line)?);
                    }
                }
                Decl::Flag { name, on, line } => {
                    if !FLAG_NAMES.contains(&name.as_str()) {
                        return Err(scope(*line, format!("unknown flag `{name}`")));
                    }
                    if !self.locked.contains(name) {
                        self.flags.set(name, *on);
                    }
                }
                Decl::Require { path, .. } => {
                    let full = base.map_or_else(|| PathBuf::from(path), |b| b.join(path));
                    let canon = full.canonicalize().map_err(|source| LoadError::Io { path: full.clone(), source })?;
                    if self.loaded.insert(canon) {
                        let src = read(&full)?;
                        let label = full.display().to_string();
                        self.load_source(&src, &label, full.parent(), &mut Vec::new(), None)?;
                    }
                }
            }
        }
        Ok(None)
    }

    fn define(
        &mut self,
        file: &str,
        name: &str,
        ty: Option<&Expr>,
        body: &Expr,
        line: usize,
    ) -> Result<CheckedDef, LoadError> {
        let scope = |message: String| LoadError::Scope { file: file.into(), line, message };
        let ty = ty.map(desugar).transpose().map_err(|e| scope(e.0))?;
        let body = desugar(body).map_err(|e| scope(e.0))?;
        let ty = check_definition(&self.env, &self.flags, name, ty.as_ref(), &body).map_err(|error| {
            LoadError::Type { file: file.into(), line, name: name.into(), error: Box::new(error) }
        })?;
        self.env.insert(name, ty.clone(), body);
        Ok(CheckedDef { name: name.into(), ty, line })
    }

    /// Normal form of a global definition's body.
    pub fn eval(&self, name: &str) -> Option<Result<Term, ReduceError>> {
        let def = self.env.get(name)?;
        Some(Reducer::with_fuel(&self.env, self.flags.fuel).normalize(&def.body))
    }

    /// Strict positivity of the family that `body` denotes. Definitions are
    /// unfolded and parameters and arguments peeled off until a `μ` or `ν`
    /// appears; `None` if none does.
    pub fn positivity(&self, body: &Term) -> Result<Option<Positivity>, ReduceError> {
        let red = Reducer::with_fuel(&self.env, self.flags.fuel);
        let mut t = body.clone();
        let mut unfolded = HashSet::new();
        loop {
            t = match &t {
                Term::Lam(_, _, b) => (**b).clone(),
                Term::App(..) => t.spine().0.clone(),
                Term::Ascribe(inner, _) => (**inner).clone(),
                Term::Def(name) if unfolded.insert(name.clone()) => match self.env.get(name) {
                    Some(def) => def.body.clone(),
                    None => return Ok(None),
                },
                Term::Mu(f) | Term::Nu(f) => {
                    return Ok(Some(if strictly_positive(&red, 0, &f.body)? {
                        Positivity::Ok
                    } else {
                        Positivity::Violation(format!(
                            "{} occurs in a position that is not strictly positive",
                            f.name
                        ))
                    }))
                }
                _ => {
                    let w = red.whnf(&t)?;
                    if w == t {
                        return Ok(None);
                    }
                    w
                }
            };
        }
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })
}
