//! The typing judgment and the checking of whole programs.

mod check;
mod error;
mod flags;

pub use check::{axiom_sort, check, infer, product_sort, Checker};
pub use error::{TypeError, TypeErrorKind};
pub use flags::{CofixElim, Flags, FLAG_NAMES};

use crate::kernel::{Context, GlobalEnv, Term, TermPath};

/// A definition awaiting checking.
#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub name: String,
    pub ty: Option<Term>,
    pub body: Term,
}

/// Checks one definition against `env` and returns its type. The
/// environment is not modified.
pub fn check_definition(
    env: &GlobalEnv,
    flags: &Flags,
    name: &str,
    ty: Option<&Term>,
    body: &Term,
) -> Result<Term, TypeError> {
    let root = TermPath::root();
    if env.contains(name) {
        return Err(TypeError { kind: TypeErrorKind::DuplicateDefinition(name.to_string()), path: root });
    }
    let checker = Checker::new(env, *flags);
    let ctx = Context::new();
    match ty {
        Some(ty) => {
            checker.infer_sort(&ctx, ty, &root.child("type"))?;
            checker.check(&ctx, body, ty, &root)?;
            Ok(ty.clone())
        }
        None => checker.infer(&ctx, body, &root),
    }
}

/// Checks definitions left to right, extending `env` with each. The first
/// failure is returned with the name of the definition it occurred in.
pub fn check_program(
    mut env: GlobalEnv,
    flags: &Flags,
    items: &[Item],
) -> Result<GlobalEnv, (String, TypeError)> {
    for item in items {
        let ty = check_definition(&env, flags, &item.name, item.ty.as_ref(), &item.body)
            .map_err(|e| (item.name.clone(), e))?;
        env.insert(item.name.clone(), ty, item.body.clone());
    }
    Ok(env)
}
