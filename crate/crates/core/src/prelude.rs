//! The bundled corpus of encodings.

use std::path::{Path, PathBuf};

use crate::session::{LoadError, Session};

/// Directory holding the corpus manifest, `prelude/` and `negative/`.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Loads every hand-written encoding into `session`.
pub fn load_prelude(session: &mut Session) -> Result<(), LoadError> {
    session.load_file(&corpus_dir().join("prelude/all.alg"), &mut Vec::new())
}
