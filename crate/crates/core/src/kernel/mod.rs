//! Terms, contexts and the global environment.

mod context;
mod env;
mod path;
mod subst;
mod term;

pub use context::Context;
pub use env::{Definition, GlobalEnv};
pub use path::TermPath;
pub use subst::{alpha_eq, ShiftUnderflow};
pub use term::*;
