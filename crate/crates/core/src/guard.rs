//! Syntactic termination and productivity checks for fixed points.
//!
//! Inside a fixed point body the self reference is bound first, followed by
//! the parameters. Variables are tracked by level (distance from the self
//! binder) so that marks survive descent under further binders.

use std::collections::HashSet;

use thiserror::Error;

use crate::kernel::*;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{reason} (at {path})")]
pub struct GuardViolation {
    pub path: TermPath,
    pub reason: String,
}

fn violation(path: &TermPath, reason: impl Into<String>) -> Result<(), GuardViolation> {
    Err(GuardViolation { path: path.clone(), reason: reason.into() })
}

/// Level of `Var(index)` when `depth` binders (self and parameters
/// included) are in scope, or `None` for variables bound outside the body.
fn level(depth: usize, index: usize) -> Option<usize> {
    depth.checked_sub(index + 1)
}

/// Does `t`, sitting under `depth` binders, mention the self reference?
fn mentions_self(t: &Term, depth: usize) -> bool {
    t.has_free(depth - 1)
}

/// Checks that every recursive call is on a strict subterm of the
/// structural parameter.
pub fn check_fix(rec: &RecDef, struct_idx: usize) -> Result<(), GuardViolation> {
    let mut walker = FixWalker { struct_idx, structural: struct_idx + 1, marks: HashSet::new() };
    walker.walk(&rec.body, rec.params.len() + 1, &TermPath::root().child("body"))
}

struct FixWalker {
    struct_idx: usize,
    /// Level of the structural parameter.
    structural: usize,
    marks: HashSet<usize>,
}

impl FixWalker {
    fn is_small_or_structural(&self, t: &Term, depth: usize) -> bool {
        match t.unascribed() {
            Term::Var(i) => {
                level(depth, *i).is_some_and(|l| l == self.structural || self.marks.contains(&l))
            }
            _ => false,
        }
    }

    fn is_small(&self, t: &Term, depth: usize) -> bool {
        match t.unascribed() {
            Term::Var(i) => level(depth, *i).is_some_and(|l| self.marks.contains(&l)),
            _ => false,
        }
    }

    fn walk(&mut self, t: &Term, depth: usize, path: &TermPath) -> Result<(), GuardViolation> {
        if !mentions_self(t, depth) {
            return Ok(());
        }
        match t {
            Term::Var(_) => violation(path, "recursive reference is not applied to its structural argument"),
            Term::App(..) => {
                let (head, args) = t.spine();
                if let Term::Var(i) = head.unascribed() {
                    if level(depth, *i) == Some(0) {
                        if args.len() <= self.struct_idx {
                            return violation(path, "recursive call is missing its structural argument");
                        }
                        if !self.is_small(args[self.struct_idx], depth) {
                            return violation(
                                path,
                                "recursive call is not on a strict subterm of the structural argument",
                            );
                        }
                        for a in &args {
                            self.walk(a, depth, &path.child("argument"))?;
                        }
                        return Ok(());
                    }
                }
                self.walk_children(t, depth, path)
            }
            Term::MatchSum(m) if self.is_small_or_structural(&m.scrut, depth) => {
                self.walk(&m.motive.body, depth + 1, &path.child("motive"))?;
                self.marked(depth, 1, |w| w.walk(&m.left.body, depth + 1, &path.child("inl-branch")))?;
                self.marked(depth, 1, |w| w.walk(&m.right.body, depth + 1, &path.child("inr-branch")))
            }
            Term::MatchSigma(m) if self.is_small_or_structural(&m.scrut, depth) => {
                self.walk(&m.motive, depth + 2, &path.child("motive"))?;
                self.marked(depth, 2, |w| w.walk(&m.branch, depth + 2, &path.child("branch")))
            }
            Term::MatchCoerce(_, m) if self.is_small_or_structural(&m.scrut, depth) => {
                self.walk(&m.motive.body, depth + 1, &path.child("motive"))?;
                self.marked(depth, 1, |w| w.walk(&m.branch.body, depth + 1, &path.child("branch")))
            }
            _ => self.walk_children(t, depth, path),
        }
    }

    /// Runs `f` with the `count` binders introduced at `depth` marked small.
    fn marked(
        &mut self,
        depth: usize,
        count: usize,
        f: impl FnOnce(&mut Self) -> Result<(), GuardViolation>,
    ) -> Result<(), GuardViolation> {
        let fresh: Vec<usize> = (depth..depth + count).filter(|l| self.marks.insert(*l)).collect();
        let r = f(self);
        for l in fresh {
            self.marks.remove(&l);
        }
        r
    }

    fn walk_children(&mut self, t: &Term, depth: usize, path: &TermPath) -> Result<(), GuardViolation> {
        let mut result = Ok(());
        t.for_each_labeled_child(|label, c, k| {
            if result.is_ok() {
                result = self.walk(c, depth + k, &path.child(label));
            }
        });
        result
    }
}

/// Checks that every co-recursive call is guarded by a `forced`
/// constructor and sits only in positions that cannot consume it.
pub fn check_cofix(rec: &RecDef) -> Result<(), GuardViolation> {
    cowalk(&rec.body, rec.params.len() + 1, false, &TermPath::root().child("body"))
}

fn forbid(t: &Term, depth: usize, path: &TermPath) -> Result<(), GuardViolation> {
    if mentions_self(t, depth) {
        return violation(path, "co-recursive reference in a position that may consume it");
    }
    Ok(())
}

fn cowalk(t: &Term, depth: usize, guarded: bool, path: &TermPath) -> Result<(), GuardViolation> {
    if !mentions_self(t, depth) {
        return Ok(());
    }
    let unguarded = |p: &TermPath| violation(p, "co-recursive call is not guarded by forced");
    match t {
        Term::Var(i) if level(depth, *i) == Some(0) => {
            if guarded {
                Ok(())
            } else {
                unguarded(path)
            }
        }
        Term::App(..) if matches!(t.spine().0, Term::Var(i) if level(depth, *i) == Some(0)) => {
            if !guarded {
                return unguarded(path);
            }
            for a in t.spine().1 {
                forbid(a, depth, &path.child("argument"))?;
            }
            Ok(())
        }
        Term::Forced(u) => cowalk(u, depth, true, &path.child("argument")),
        Term::Inl(u) | Term::Inr(u) | Term::CoerceIntro(_, u) => {
            cowalk(u, depth, guarded, &path.child("argument"))
        }
        Term::Lam(_, dom, body) => {
            forbid(dom, depth, &path.child("domain"))?;
            cowalk(body, depth + 1, guarded, &path.child("body"))
        }
        Term::PairF(p) => {
            if let Some(s) = &p.annot {
                forbid(&Term::SigmaF(Box::new(s.clone())), depth, &path.child("annotation"))?;
            }
            cowalk(&p.fst, depth, guarded, &path.child("first"))?;
            cowalk(&p.snd, depth, guarded, &path.child("second"))
        }
        Term::Ascribe(u, ty) => {
            forbid(ty, depth, &path.child("type"))?;
            cowalk(u, depth, guarded, &path.child("term"))
        }
        Term::MatchSum(m) => {
            forbid(&m.scrut, depth, &path.child("scrutinee"))?;
            forbid(&m.motive.body, depth + 1, &path.child("motive"))?;
            cowalk(&m.left.body, depth + 1, guarded, &path.child("inl-branch"))?;
            cowalk(&m.right.body, depth + 1, guarded, &path.child("inr-branch"))
        }
        Term::MatchUnit(m) => {
            forbid(&m.scrut, depth, &path.child("scrutinee"))?;
            forbid(&m.motive.body, depth + 1, &path.child("motive"))?;
            cowalk(&m.branch, depth, guarded, &path.child("branch"))
        }
        Term::MatchSigma(m) => {
            forbid(&m.scrut, depth, &path.child("scrutinee"))?;
            forbid(&m.motive, depth + 2, &path.child("motive"))?;
            cowalk(&m.branch, depth + 2, guarded, &path.child("branch"))
        }
        Term::MatchNu(m) | Term::MatchCoerce(_, m) => {
            forbid(&m.scrut, depth, &path.child("scrutinee"))?;
            forbid(&m.motive.body, depth + 1, &path.child("motive"))?;
            cowalk(&m.branch.body, depth + 1, guarded, &path.child("branch"))
        }
        _ => {
            let mut result = Ok(());
            t.for_each_labeled_child(|label, c, k| {
                if result.is_ok() {
                    result = forbid(c, depth + k, &path.child(label));
                }
            });
            result
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> Term {
        Term::def("Nat")
    }

    fn rec(params: Vec<(&str, Term)>, body: Term) -> RecDef {
        RecDef {
            name: "f".into(),
            params: params.into_iter().map(|(n, t)| (n.to_string(), t)).collect(),
            ret: nat(),
            body,
        }
    }

    #[test]
    fn call_on_parameter_is_rejected() {
        // fix f (x:Nat) => f x
        let r = rec(vec![("x", nat())], Term::app(Term::Var(1), Term::Var(0)));
        let err = check_fix(&r, 0).unwrap_err();
        assert!(err.reason.contains("strict subterm"));
    }

    #[test]
    fn call_on_match_binder_is_accepted() {
        // fix f (x:Nat) => match x with inl _ => x | inr y => f y
        let body = Term::MatchSum(Box::new(MatchSum {
            scrut: Term::Var(0),
            motive: Motive { binder: "_".into(), body: nat() },
            left: Branch { binder: "_".into(), body: Term::Var(1) },
            right: Branch { binder: "y".into(), body: Term::app(Term::Var(2), Term::Var(0)) },
        }));
        assert_eq!(check_fix(&rec(vec![("x", nat())], body), 0), Ok(()));
    }

    #[test]
    fn unapplied_self_reference_is_rejected() {
        let r = rec(vec![("x", nat())], Term::Var(1));
        assert!(check_fix(&r, 0).is_err());
    }

    #[test]
    fn forced_self_is_productive() {
        assert_eq!(check_cofix(&rec(vec![], Term::forced(Term::Var(0)))), Ok(()));
    }

    #[test]
    fn bare_self_is_not_productive() {
        let err = check_cofix(&rec(vec![], Term::Var(0))).unwrap_err();
        assert!(err.path.is_root() || err.path.0 == ["body"]);
    }

    #[test]
    fn self_in_scrutinee_is_rejected() {
        let body = Term::MatchNu(Box::new(MatchOne {
            scrut: Term::Var(0),
            motive: Motive { binder: "_".into(), body: nat() },
            branch: Branch { binder: "y".into(), body: Term::forced(Term::Var(0)) },
        }));
        let err = check_cofix(&rec(vec![], body)).unwrap_err();
        assert_eq!(err.path.0, ["body", "scrutinee"]);
    }
}
