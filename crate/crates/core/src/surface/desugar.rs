//! Scope resolution and expansion of derived forms into kernel terms.
//!
//! Names bound by an enclosing binder become de Bruijn indices; every other
//! name is a reference to a global definition.

use thiserror::Error;

use crate::kernel::*;

use super::ast::*;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct DesugarError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, DesugarError> {
    Err(DesugarError(msg.into()))
}

/// Desugars a closed expression.
pub fn desugar(e: &Expr) -> Result<Term, DesugarError> {
    Scope::default().expr(e)
}

/// Desugars under local names given outermost first.
pub fn desugar_in(e: &Expr, names: &[String]) -> Result<Term, DesugarError> {
    Scope { names: names.to_vec() }.expr(e)
}

/// `(Σ^(() : 1) (x : A). B) ()`; `fiber` binds `x`.
pub fn dependent_sum(binder: impl Into<Name>, domain: Term, fiber: Term) -> Term {
    Term::app(
        Term::sigma_f(SigmaF {
            binder: binder.into(),
            domain,
            fiber,
            index_fn: Term::UnitVal,
            codomain: Term::Unit,
        }),
        Term::UnitVal,
    )
}

/// `A × B`, with both components in the outer context.
pub fn product(a: Term, b: Term) -> Term {
    dependent_sum("_", a, b.shift(1, 0))
}

/// `μX:s. F` as `(μY^{1→s}. λ_:1. F[X\Y ()]) ()`; `body` binds `X`.
pub fn nullary_family(mu: bool, name: impl Into<Name>, sort: Sort, body: Term) -> Term {
    let inner = body.shift(1, 1).subst(0, &Term::app(Term::Var(0), Term::UnitVal)).shift(1, 0);
    let fam = Family { name: name.into(), index: Term::Unit, sort, body: Term::lam("_", Term::Unit, inner) };
    let head = if mu { Term::Mu(Box::new(fam)) } else { Term::Nu(Box::new(fam)) };
    Term::app(head, Term::UnitVal)
}

/// `λ(A : Type) (x : A). Σ^(x : A) (_ : 1). 1`
pub fn eq_template() -> Term {
    Term::lam(
        "A",
        Term::Sort(Sort::Type),
        Term::lam(
            "x",
            Term::Var(0),
            Term::sigma_f(SigmaF {
                binder: "_".into(),
                domain: Term::Unit,
                fiber: Term::Unit,
                index_fn: Term::Var(1),
                codomain: Term::Var(1),
            }),
        ),
    )
}

/// `λ(A : Type) (x : A). ((), ())^(x : A) (_ : 1). 1`
pub fn eq_refl_template() -> Term {
    let annot = SigmaF {
        binder: "_".into(),
        domain: Term::Unit,
        fiber: Term::Unit,
        index_fn: Term::Var(1),
        codomain: Term::Var(1),
    };
    Term::lam(
        "A",
        Term::Sort(Sort::Type),
        Term::lam("x", Term::Var(0), Term::pair(Term::UnitVal, Term::UnitVal, Some(annot))),
    )
}

#[derive(Default)]
struct Scope {
    /// Innermost last.
    names: Vec<String>,
}

impl Scope {
    fn lookup(&self, x: &str) -> Option<usize> {
        self.names.iter().rev().position(|n| n == x)
    }

    fn under<R>(&mut self, names: &[&str], f: impl FnOnce(&mut Self) -> R) -> R {
        let n = self.names.len();
        self.names.extend(names.iter().map(|s| {
            // `_` can never be referenced.
            if *s == "_" { "\u{0}".to_string() } else { s.to_string() }
        }));
        let r = f(self);
        self.names.truncate(n);
        r
    }

    /// Desugars a telescope, returning binder names and types, and runs `f`
    /// under all of it.
    fn telescope<R>(
        &mut self,
        bs: &[Binder],
        f: impl FnOnce(&mut Self) -> Result<R, DesugarError>,
    ) -> Result<(Vec<(Name, Term)>, R), DesugarError> {
        let start = self.names.len();
        let mut out = Vec::with_capacity(bs.len());
        for b in bs {
            let ty = match self.expr(&b.ty) {
                Ok(t) => t,
                Err(e) => {
                    self.names.truncate(start);
                    return Err(e);
                }
            };
            out.push((b.name.clone(), ty));
            self.names.push(if b.name == "_" { "\u{0}".to_string() } else { b.name.clone() });
        }
        let r = f(self);
        self.names.truncate(start);
        Ok((out, r?))
    }

    fn sigma(&mut self, s: &SigmaAnnot) -> Result<SigmaF, DesugarError> {
        let codomain = self.expr(&s.codomain)?;
        let domain = self.expr(&s.binder.ty)?;
        let x = s.binder.name.as_str();
        let (index_fn, fiber) = self.under(&[x], |sc| Ok::<_, DesugarError>((sc.expr(&s.index)?, sc.expr(&s.body)?)))?;
        Ok(SigmaF { binder: s.binder.name.clone(), domain, fiber, index_fn, codomain })
    }

    fn family(&mut self, mu: bool, name: &str, kind: &Expr, body: &Expr) -> Result<Term, DesugarError> {
        let kind = self.expr(kind)?;
        let body = self.under(&[name], |sc| sc.expr(body))?;
        match kind {
            Term::Sort(s) => Ok(nullary_family(mu, name, s, body)),
            Term::Pi(_, index, cod) if !cod.has_free(0) => match *cod {
                Term::Sort(s) => {
                    let fam = Family { name: name.to_string(), index: *index, sort: s, body };
                    Ok(if mu { Term::Mu(Box::new(fam)) } else { Term::Nu(Box::new(fam)) })
                }
                _ => err(format!("the kind of `{name}` must end in a sort")),
            },
            _ => err(format!("the kind of `{name}` must be a sort or `A → sort`")),
        }
    }

    fn rec(&mut self, r: &RecExpr, is_fix: bool) -> Result<Term, DesugarError> {
        let struct_idx = if is_fix {
            Some(match &r.structural {
                Some(y) => match r.params.iter().rposition(|b| &b.name == y) {
                    Some(k) => k,
                    None => return err(format!("`{y}` is not a parameter of `{}`", r.name)),
                },
                // The last parameter is structural unless stated otherwise.
                None if !r.params.is_empty() => r.params.len() - 1,
                None => return err(format!("`{}` needs at least one parameter", r.name)),
            })
        } else {
            if r.structural.is_some() {
                return err("co-recursive definitions have no structural argument");
            }
            None
        };
        if is_fix && r.params.is_empty() {
            return err(format!("`{}` needs at least one parameter", r.name));
        }
        let (params, ret) = self.telescope(&r.params, |sc| sc.expr(&r.ret))?;
        let mut names: Vec<&str> = vec![r.name.as_str()];
        names.extend(r.params.iter().map(|b| b.name.as_str()));
        let body = self.under(&names, |sc| sc.expr(&r.body))?;
        let def = Box::new(RecDef { name: r.name.clone(), params, ret, body });
        Ok(match struct_idx {
            Some(k) => Term::Fix(def, k),
            None => Term::Cofix(def),
        })
    }

    fn expr(&mut self, e: &Expr) -> Result<Term, DesugarError> {
        Ok(match e {
            Expr::Sort(s) => Term::Sort(*s),
            Expr::Var(x) => match self.lookup(x) {
                Some(i) => Term::Var(i),
                None => Term::Def(x.clone()),
            },
            Expr::Pi(bs, body) => {
                let (tele, body) = self.telescope(bs, |sc| sc.expr(body))?;
                tele.into_iter().rev().fold(body, |acc, (x, a)| Term::pi(x, a, acc))
            }
            Expr::Lam(bs, body) => {
                let (tele, body) = self.telescope(bs, |sc| sc.expr(body))?;
                tele.into_iter().rev().fold(body, |acc, (x, a)| Term::lam(x, a, acc))
            }
            Expr::Arrow(a, b) => Term::arrow(self.expr(a)?, self.expr(b)?),
            Expr::App(f, a) => Term::app(self.expr(f)?, self.expr(a)?),
            Expr::Fix(r) => self.rec(r, true)?,
            Expr::Cofix(r) => self.rec(r, false)?,
            Expr::Sum(a, b) => Term::sum(self.expr(a)?, self.expr(b)?),
            Expr::Times(a, b) => product(self.expr(a)?, self.expr(b)?),
            Expr::DepSum(b, body) => {
                let domain = self.expr(&b.ty)?;
                let fiber = self.under(&[b.name.as_str()], |sc| sc.expr(body))?;
                dependent_sum(b.name.clone(), domain, fiber)
            }
            Expr::SigmaF(s) => Term::sigma_f(self.sigma(s)?),
            Expr::Pair(u, v, annot) => {
                let annot = match annot {
                    Some(s) => Some(self.sigma(s)?),
                    None => None,
                };
                Term::pair(self.expr(u)?, self.expr(v)?, annot)
            }
            Expr::Inl(u) => Term::inl(self.expr(u)?),
            Expr::Inr(u) => Term::inr(self.expr(u)?),
            Expr::Forced(u) => Term::forced(self.expr(u)?),
            Expr::Unit => Term::Unit,
            Expr::UnitVal => Term::UnitVal,
            Expr::Empty => Term::Empty,
            Expr::Mu(x, k, body) => self.family(true, x, k, body)?,
            Expr::Nu(x, k, body) => self.family(false, x, k, body)?,
            Expr::Coerce(c, a) => Term::coerce(*c, self.expr(a)?),
            Expr::Intro(c, u) => Term::coerce_intro(*c, self.expr(u)?),
            Expr::Ascribe(u, t) => Term::ascribe(self.expr(u)?, self.expr(t)?),
            Expr::Match(m) => self.match_expr(m)?,
        })
    }

    fn match_expr(&mut self, m: &MatchExpr) -> Result<Term, DesugarError> {
        let scrut = self.expr(&m.scrut)?;
        let as_name = m.as_name.clone().unwrap_or_else(|| "_".to_string());
        let is_pair = matches!(m.arms.first(), Some((Pattern::Pair(..), _)));
        if m.in_name.is_some() && !is_pair {
            return err("an `in` clause is only allowed when matching a pair");
        }
        let motive = |sc: &mut Self| -> Result<Motive, DesugarError> {
            let body = sc.under(&[as_name.as_str()], |sc| sc.expr(&m.ret))?;
            Ok(Motive { binder: as_name.clone(), body })
        };
        let arm1 = |sc: &mut Self, y: &str, body: &Expr| -> Result<Branch, DesugarError> {
            Ok(Branch { binder: y.to_string(), body: sc.under(&[y], |sc| sc.expr(body))? })
        };
        match m.arms.as_slice() {
            [] => {
                if m.as_name.is_some() {
                    return err("a match with no branches cannot bind its scrutinee");
                }
                let ret = self.expr(&m.ret)?;
                Ok(Term::MatchEmpty(Box::new(scrut), Box::new(ret)))
            }
            [(Pattern::Inl(y), v), (Pattern::Inr(z), w)] | [(Pattern::Inr(z), w), (Pattern::Inl(y), v)] => {
                let motive = motive(self)?;
                let left = arm1(self, y, v)?;
                let right = arm1(self, z, w)?;
                Ok(Term::MatchSum(Box::new(MatchSum { scrut, motive, left, right })))
            }
            [(Pattern::Unit, v)] => {
                let motive = motive(self)?;
                let branch = self.expr(v)?;
                Ok(Term::MatchUnit(Box::new(MatchUnit { scrut, motive, branch })))
            }
            [(Pattern::Pair(i, j), v)] => {
                let in_name = m.in_name.clone().unwrap_or_else(|| "_".to_string());
                let motive = self.under(&[in_name.as_str(), as_name.as_str()], |sc| sc.expr(&m.ret))?;
                let branch = self.under(&[i.as_str(), j.as_str()], |sc| sc.expr(v))?;
                Ok(Term::MatchSigma(Box::new(MatchSigma {
                    scrut,
                    as_name,
                    in_name,
                    motive,
                    fst_name: i.clone(),
                    snd_name: j.clone(),
                    branch,
                })))
            }
            [(Pattern::Forced(y), v)] => {
                let motive = motive(self)?;
                let branch = arm1(self, y, v)?;
                Ok(Term::MatchNu(Box::new(MatchOne { scrut, motive, branch })))
            }
            [(Pattern::Intro(c, y), v)] => {
                let motive = motive(self)?;
                let branch = arm1(self, y, v)?;
                Ok(Term::MatchCoerce(*c, Box::new(MatchOne { scrut, motive, branch })))
            }
            _ => err("match branches do not cover exactly one type former"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::parse_expr;

    fn ds(s: &str) -> Term {
        desugar(&parse_expr(s).unwrap()).unwrap()
    }

    #[test]
    fn dependent_sum_is_trivially_indexed() {
        let t = ds("Σ (x : A). B x");
        let expected = dependent_sum("x", Term::def("A"), Term::app(Term::def("B"), Term::Var(0)));
        assert_eq!(t, expected);
    }

    #[test]
    fn nullary_mu_uses_unit_index() {
        let t = ds("mu X : Type. 1 + X");
        let body = Term::lam("_", Term::Unit, Term::sum(Term::Unit, Term::app(Term::Var(1), Term::UnitVal)));
        let expected = Term::app(Term::mu("X", Term::Unit, Sort::Type, body), Term::UnitVal);
        assert!(alpha_eq(&t, &expected));
    }

    #[test]
    fn arrow_binder_does_not_occur() {
        let t = ds("forall (A : Type), A -> A");
        assert_eq!(t, Term::pi("A", Term::Sort(Sort::Type), Term::arrow(Term::Var(0), Term::Var(0))));
        let Term::Pi(_, _, b) = t else { unreachable!() };
        assert!(matches!(*b, Term::Pi(_, _, ref c) if !c.has_free(0)));
    }

    #[test]
    fn locals_shadow_globals() {
        assert_eq!(ds("fun (Nat : Type) => Nat"), Term::lam("Nat", Term::Sort(Sort::Type), Term::Var(0)));
        assert_eq!(ds("Nat"), Term::def("Nat"));
    }

    #[test]
    fn underscore_cannot_be_referenced() {
        assert_eq!(ds("fun (_ : Type) => _x"), Term::lam("_", Term::Sort(Sort::Type), Term::def("_x")));
    }
}
