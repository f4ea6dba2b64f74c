//! Structural traversal, de Bruijn shifting, substitution and α-equivalence.

use std::convert::Infallible;

use thiserror::Error;

use super::term::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("shifting variable {index} by {amount} underflows")]
pub struct ShiftUnderflow {
    pub index: usize,
    pub amount: isize,
}

impl Term {
    /// Rebuilds the node, replacing each immediate child by `f(child, k)`
    /// where `k` is the number of binders the child sits under.
    pub fn try_map_children<E>(
        &self,
        mut f: impl FnMut(&Term, usize) -> Result<Term, E>,
    ) -> Result<Term, E> {
        let motive = |m: &Motive, f: &mut dyn FnMut(&Term, usize) -> Result<Term, E>| {
            Ok::<_, E>(Motive { binder: m.binder.clone(), body: f(&m.body, 1)? })
        };
        let branch = |b: &Branch, f: &mut dyn FnMut(&Term, usize) -> Result<Term, E>| {
            Ok::<_, E>(Branch { binder: b.binder.clone(), body: f(&b.body, 1)? })
        };
        let sigma = |s: &SigmaF, f: &mut dyn FnMut(&Term, usize) -> Result<Term, E>| {
            Ok::<_, E>(SigmaF {
                binder: s.binder.clone(),
                domain: f(&s.domain, 0)?,
                fiber: f(&s.fiber, 1)?,
                index_fn: f(&s.index_fn, 1)?,
                codomain: f(&s.codomain, 0)?,
            })
        };
        let rec = |r: &RecDef, f: &mut dyn FnMut(&Term, usize) -> Result<Term, E>| {
            let n = r.params.len();
            let params = r
                .params
                .iter()
                .enumerate()
                .map(|(i, (x, ty))| Ok((x.clone(), f(ty, i)?)))
                .collect::<Result<Vec<_>, E>>()?;
            Ok::<_, E>(RecDef {
                name: r.name.clone(),
                params,
                ret: f(&r.ret, n)?,
                body: f(&r.body, n + 1)?,
            })
        };
        let family = |fam: &Family, f: &mut dyn FnMut(&Term, usize) -> Result<Term, E>| {
            Ok::<_, E>(Family {
                name: fam.name.clone(),
                index: f(&fam.index, 0)?,
                sort: fam.sort,
                body: f(&fam.body, 1)?,
            })
        };
        let one = |m: &MatchOne, f: &mut dyn FnMut(&Term, usize) -> Result<Term, E>| {
            Ok::<_, E>(MatchOne {
                scrut: f(&m.scrut, 0)?,
                motive: Motive { binder: m.motive.binder.clone(), body: f(&m.motive.body, 1)? },
                branch: Branch { binder: m.branch.binder.clone(), body: f(&m.branch.body, 1)? },
            })
        };
        let f = &mut f;
        Ok(match self {
            Term::Sort(_) | Term::Var(_) | Term::Def(_) | Term::Unit | Term::UnitVal | Term::Empty => {
                self.clone()
            }
            Term::Pi(x, a, b) => Term::Pi(x.clone(), Box::new(f(a, 0)?), Box::new(f(b, 1)?)),
            Term::Lam(x, a, b) => Term::Lam(x.clone(), Box::new(f(a, 0)?), Box::new(f(b, 1)?)),
            Term::App(a, b) => Term::App(Box::new(f(a, 0)?), Box::new(f(b, 0)?)),
            Term::Fix(r, k) => Term::Fix(Box::new(rec(r, f)?), *k),
            Term::Cofix(r) => Term::Cofix(Box::new(rec(r, f)?)),
            Term::Sum(a, b) => Term::Sum(Box::new(f(a, 0)?), Box::new(f(b, 0)?)),
            Term::Inl(a) => Term::Inl(Box::new(f(a, 0)?)),
            Term::Inr(a) => Term::Inr(Box::new(f(a, 0)?)),
            Term::MatchSum(m) => Term::MatchSum(Box::new(MatchSum {
                scrut: f(&m.scrut, 0)?,
                motive: motive(&m.motive, f)?,
                left: branch(&m.left, f)?,
                right: branch(&m.right, f)?,
            })),
            Term::MatchUnit(m) => Term::MatchUnit(Box::new(MatchUnit {
                scrut: f(&m.scrut, 0)?,
                motive: motive(&m.motive, f)?,
                branch: f(&m.branch, 0)?,
            })),
            Term::MatchEmpty(u, a) => Term::MatchEmpty(Box::new(f(u, 0)?), Box::new(f(a, 0)?)),
            Term::Mu(fam) => Term::Mu(Box::new(family(fam, f)?)),
            Term::Nu(fam) => Term::Nu(Box::new(family(fam, f)?)),
            Term::Forced(a) => Term::Forced(Box::new(f(a, 0)?)),
            Term::MatchNu(m) => Term::MatchNu(Box::new(one(m, f)?)),
            Term::SigmaF(s) => Term::SigmaF(Box::new(sigma(s, f)?)),
            Term::PairF(p) => Term::PairF(Box::new(Pair {
                fst: f(&p.fst, 0)?,
                snd: f(&p.snd, 0)?,
                annot: p.annot.as_ref().map(|s| sigma(s, f)).transpose()?,
            })),
            Term::MatchSigma(m) => Term::MatchSigma(Box::new(MatchSigma {
                scrut: f(&m.scrut, 0)?,
                as_name: m.as_name.clone(),
                in_name: m.in_name.clone(),
                motive: f(&m.motive, 2)?,
                fst_name: m.fst_name.clone(),
                snd_name: m.snd_name.clone(),
                branch: f(&m.branch, 2)?,
            })),
            Term::Coerce(c, a) => Term::Coerce(*c, Box::new(f(a, 0)?)),
            Term::CoerceIntro(c, a) => Term::CoerceIntro(*c, Box::new(f(a, 0)?)),
            Term::MatchCoerce(c, m) => Term::MatchCoerce(*c, Box::new(one(m, f)?)),
            Term::Ascribe(a, b) => Term::Ascribe(Box::new(f(a, 0)?), Box::new(f(b, 0)?)),
        })
    }

    pub fn map_children(&self, mut f: impl FnMut(&Term, usize) -> Term) -> Term {
        match self.try_map_children(|t, k| Ok::<_, Infallible>(f(t, k))) {
            Ok(t) => t,
            Err(never) => match never {},
        }
    }

    /// Visits each immediate child with its binder depth, in source order.
    pub fn for_each_child(&self, mut f: impl FnMut(&Term, usize)) {
        let mut visit = |t: &Term, k: usize| {
            f(t, k);
            Ok::<_, Infallible>(Term::UnitVal)
        };
        let _ = self.try_map_children(&mut visit);
    }

    /// Displaces every free index `>= cutoff` by `amount`.
    pub fn try_shift(&self, amount: isize, cutoff: usize) -> Result<Term, ShiftUnderflow> {
        if amount == 0 {
            return Ok(self.clone());
        }
        match self {
            Term::Var(i) if *i >= cutoff => {
                let moved = *i as isize + amount;
                if moved < 0 {
                    Err(ShiftUnderflow { index: *i, amount })
                } else {
                    Ok(Term::Var(moved as usize))
                }
            }
            Term::Var(_) => Ok(self.clone()),
            _ => self.try_map_children(|t, k| t.try_shift(amount, cutoff + k)),
        }
    }

    /// Like [`Term::try_shift`]; an underflow is a broken kernel invariant.
    pub fn shift(&self, amount: isize, cutoff: usize) -> Term {
        self.try_shift(amount, cutoff)
            .unwrap_or_else(|e| panic!("internal invariant violated: {e}"))
    }

    /// Replaces `Var(target)` by `value` and closes the gap left by the
    /// removed variable. `value` lives in the resulting context.
    pub fn subst(&self, target: usize, value: &Term) -> Term {
        self.subst_at(target, value, 0)
    }

    fn subst_at(&self, target: usize, value: &Term, depth: usize) -> Term {
        match self {
            Term::Var(i) if *i < depth => self.clone(),
            Term::Var(i) => {
                let free = i - depth;
                match free.cmp(&target) {
                    std::cmp::Ordering::Equal => value.shift(depth as isize, 0),
                    std::cmp::Ordering::Greater => Term::Var(i - 1),
                    std::cmp::Ordering::Less => self.clone(),
                }
            }
            _ => self.map_children(|t, k| t.subst_at(target, value, depth + k)),
        }
    }

    /// Instantiates the innermost `values.len()` binders of `self`;
    /// `values[0]` replaces the outermost of them. All values live in the
    /// context outside those binders.
    pub fn instantiate(&self, values: &[Term]) -> Term {
        values
            .iter()
            .enumerate()
            .rev()
            .fold(self.clone(), |body, (i, v)| body.subst(0, &v.shift(i as isize, 0)))
    }

    /// Whether `Var(index)` occurs free.
    pub fn has_free(&self, index: usize) -> bool {
        match self {
            Term::Var(i) => *i == index,
            _ => {
                let mut found = false;
                self.for_each_child(|t, k| found = found || t.has_free(index + k));
                found
            }
        }
    }

    /// Whether any free variable occurs at all.
    pub fn is_closed(&self) -> bool {
        self.is_closed_above(0)
    }

    fn is_closed_above(&self, depth: usize) -> bool {
        match self {
            Term::Var(i) => *i < depth,
            _ => {
                let mut closed = true;
                self.for_each_child(|t, k| closed = closed && t.is_closed_above(depth + k));
                closed
            }
        }
    }

    /// Whether the global `name` is referenced.
    pub fn mentions_def(&self, name: &str) -> bool {
        match self {
            Term::Def(n) => n == name,
            _ => {
                let mut found = false;
                self.for_each_child(|t, _| found = found || t.mentions_def(name));
                found
            }
        }
    }

    /// Removes every ascription and pair annotation.
    pub fn erase_annotations(&self) -> Term {
        match self {
            Term::Ascribe(t, _) => t.erase_annotations(),
            Term::PairF(p) => Term::pair(p.fst.erase_annotations(), p.snd.erase_annotations(), None),
            _ => self.map_children(|t, _| t.erase_annotations()),
        }
    }
}

/// Structural equality modulo binder names. Ascriptions and pair
/// annotations carry no computational content and are looked through.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    let (t, u) = (t.unascribed(), u.unascribed());
    use Term::*;
    match (t, u) {
        (Sort(a), Sort(b)) => a == b,
        (Var(a), Var(b)) => a == b,
        (Def(a), Def(b)) => a == b,
        (Unit, Unit) | (UnitVal, UnitVal) | (Empty, Empty) => true,
        (Pi(_, a1, b1), Pi(_, a2, b2)) | (Lam(_, a1, b1), Lam(_, a2, b2)) => {
            alpha_eq(a1, a2) && alpha_eq(b1, b2)
        }
        (App(a1, b1), App(a2, b2)) | (Sum(a1, b1), Sum(a2, b2)) => {
            alpha_eq(a1, a2) && alpha_eq(b1, b2)
        }
        (MatchEmpty(a1, b1), MatchEmpty(a2, b2)) => alpha_eq(a1, a2) && alpha_eq(b1, b2),
        (Fix(r1, k1), Fix(r2, k2)) => k1 == k2 && rec_eq(r1, r2),
        (Cofix(r1), Cofix(r2)) => rec_eq(r1, r2),
        (Inl(a), Inl(b)) | (Inr(a), Inr(b)) | (Forced(a), Forced(b)) => alpha_eq(a, b),
        (MatchSum(m1), MatchSum(m2)) => {
            alpha_eq(&m1.scrut, &m2.scrut)
                && alpha_eq(&m1.motive.body, &m2.motive.body)
                && alpha_eq(&m1.left.body, &m2.left.body)
                && alpha_eq(&m1.right.body, &m2.right.body)
        }
        (MatchUnit(m1), MatchUnit(m2)) => {
            alpha_eq(&m1.scrut, &m2.scrut)
                && alpha_eq(&m1.motive.body, &m2.motive.body)
                && alpha_eq(&m1.branch, &m2.branch)
        }
        (Mu(f1), Mu(f2)) | (Nu(f1), Nu(f2)) => {
            f1.sort == f2.sort && alpha_eq(&f1.index, &f2.index) && alpha_eq(&f1.body, &f2.body)
        }
        (MatchNu(m1), MatchNu(m2)) => one_eq(m1, m2),
        (SigmaF(s1), SigmaF(s2)) => sigma_eq(s1, s2),
        (PairF(p1), PairF(p2)) => alpha_eq(&p1.fst, &p2.fst) && alpha_eq(&p1.snd, &p2.snd),
        (MatchSigma(m1), MatchSigma(m2)) => {
            alpha_eq(&m1.scrut, &m2.scrut)
                && alpha_eq(&m1.motive, &m2.motive)
                && alpha_eq(&m1.branch, &m2.branch)
        }
        (Coerce(c1, a), Coerce(c2, b)) | (CoerceIntro(c1, a), CoerceIntro(c2, b)) => {
            c1 == c2 && alpha_eq(a, b)
        }
        (MatchCoerce(c1, m1), MatchCoerce(c2, m2)) => c1 == c2 && one_eq(m1, m2),
        _ => false,
    }
}

fn rec_eq(r1: &RecDef, r2: &RecDef) -> bool {
    r1.params.len() == r2.params.len()
        && r1.params.iter().zip(&r2.params).all(|((_, a), (_, b))| alpha_eq(a, b))
        && alpha_eq(&r1.ret, &r2.ret)
        && alpha_eq(&r1.body, &r2.body)
}

fn one_eq(m1: &MatchOne, m2: &MatchOne) -> bool {
    alpha_eq(&m1.scrut, &m2.scrut)
        && alpha_eq(&m1.motive.body, &m2.motive.body)
        && alpha_eq(&m1.branch.body, &m2.branch.body)
}

fn sigma_eq(s1: &SigmaF, s2: &SigmaF) -> bool {
    alpha_eq(&s1.domain, &s2.domain)
        && alpha_eq(&s1.fiber, &s2.fiber)
        && alpha_eq(&s1.index_fn, &s2.index_fn)
        && alpha_eq(&s1.codomain, &s2.codomain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_lam(body: Term) -> Term {
        Term::lam("x", Term::Unit, body)
    }

    #[test]
    fn shift_free_and_bound() {
        assert_eq!(Term::Var(0).shift(1, 0), Term::Var(1));
        assert_eq!(unit_lam(Term::Var(0)).shift(1, 0), unit_lam(Term::Var(0)));
        assert_eq!(unit_lam(Term::Var(1)).shift(2, 0), unit_lam(Term::Var(3)));
    }

    #[test]
    fn shift_underflow_is_reported() {
        let err = Term::Var(0).try_shift(-1, 0).unwrap_err();
        assert_eq!(err, ShiftUnderflow { index: 0, amount: -1 });
    }

    #[test]
    fn subst_examples() {
        assert_eq!(Term::Var(0).subst(0, &Term::UnitVal), Term::UnitVal);
        let t = unit_lam(Term::app(Term::Var(1), Term::Var(0)));
        assert_eq!(t.subst(0, &Term::UnitVal), unit_lam(Term::app(Term::UnitVal, Term::Var(0))));
    }

    #[test]
    fn subst_unrolls_mu() {
        // μX^{1→Type}. λ_:1. 1 + X ()
        let body = Term::lam("_", Term::Unit, Term::sum(Term::Unit, Term::app(Term::Var(1), Term::UnitVal)));
        let mu = Term::mu("X", Term::Unit, Sort::Type, body.clone());
        let unrolled = body.subst(0, &mu);
        let expected = Term::lam("_", Term::Unit, Term::sum(Term::Unit, Term::app(mu.clone(), Term::UnitVal)));
        assert_eq!(unrolled, expected);
    }

    #[test]
    fn alpha_eq_ignores_names() {
        let a = Term::lam("x", Term::Unit, Term::Var(0));
        let b = Term::lam("y", Term::Unit, Term::Var(0));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&Term::inl(Term::UnitVal), &Term::inr(Term::UnitVal)));
        let fam = |n: &str| {
            Term::mu(n, Term::Unit, Sort::Type, Term::lam("_", Term::Unit, Term::app(Term::Var(1), Term::UnitVal)))
        };
        assert!(alpha_eq(&fam("X"), &fam("Y")));
    }

    #[test]
    fn alpha_eq_looks_through_ascriptions() {
        let t = Term::ascribe(Term::UnitVal, Term::Unit);
        assert!(alpha_eq(&t, &Term::UnitVal));
    }

    #[test]
    fn instantiate_two_binders() {
        // Under y, z: the pair (y, z) becomes (a, b).
        let body = Term::app(Term::Var(1), Term::Var(0));
        let out = body.instantiate(&[Term::def("a"), Term::def("b")]);
        assert_eq!(out, Term::app(Term::def("a"), Term::def("b")));
        // Outer variables are lowered past both binders.
        assert_eq!(Term::Var(2).instantiate(&[Term::Unit, Term::Unit]), Term::Var(0));
    }
}
