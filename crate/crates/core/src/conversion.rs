//! Definitional equality: β, ι, δ, η, and rolling/unrolling of inductive
//! and co-inductive fixed points.

use crate::kernel::*;
use crate::reduce::{ReduceError, Reducer};

/// Decides convertibility using the fuel of `red`.
pub struct Converter<'r, 'e> {
    red: &'r Reducer<'e>,
    eta: bool,
}

impl<'r, 'e> Converter<'r, 'e> {
    pub fn new(red: &'r Reducer<'e>, eta: bool) -> Self {
        Converter { red, eta }
    }

    pub fn convertible(&self, t: &Term, u: &Term) -> Result<bool, ReduceError> {
        self.conv(t, u, true)
    }

    fn conv(&self, t: &Term, u: &Term, may_unroll: bool) -> Result<bool, ReduceError> {
        if alpha_eq(t, u) {
            return Ok(true);
        }
        let t = self.red.whnf(t)?;
        let u = self.red.whnf(u)?;
        if alpha_eq(&t, &u) || self.structural(&t, &u)? {
            return Ok(true);
        }
        if self.eta {
            match (&t, &u) {
                (Term::Lam(_, _, body), other) | (other, Term::Lam(_, _, body))
                    if !matches!(other, Term::Lam(..)) =>
                {
                    let expanded = Term::app(other.shift(1, 0), Term::Var(0));
                    return self.conv(body, &expanded, true);
                }
                _ => {}
            }
        }
        if !may_unroll {
            return Ok(false);
        }
        let tu = unroll(&t);
        let uu = unroll(&u);
        if let Some(t2) = &tu {
            if self.conv(t2, &u, false)? {
                return Ok(true);
            }
        }
        if let Some(u2) = &uu {
            if self.conv(&t, u2, false)? {
                return Ok(true);
            }
        }
        if let (Some(t2), Some(u2)) = (&tu, &uu) {
            return self.conv(t2, u2, false);
        }
        Ok(false)
    }

    fn c(&self, t: &Term, u: &Term) -> Result<bool, ReduceError> {
        self.conv(t, u, true)
    }

    fn structural(&self, t: &Term, u: &Term) -> Result<bool, ReduceError> {
        use Term::*;
        Ok(match (t, u) {
            (Sort(a), Sort(b)) => a == b,
            (Var(i), Var(j)) => i == j,
            (Def(a), Def(b)) => a == b,
            (Pi(_, a1, b1), Pi(_, a2, b2)) => self.c(a1, a2)? && self.c(b1, b2)?,
            (Lam(_, _, b1), Lam(_, _, b2)) => self.c(b1, b2)?,
            (App(..), App(..)) => {
                let (h1, a1) = t.spine();
                let (h2, a2) = u.spine();
                if a1.len() != a2.len() || !self.c(h1, h2)? {
                    return Ok(false);
                }
                for (x, y) in a1.iter().zip(a2.iter()) {
                    if !self.c(x, y)? {
                        return Ok(false);
                    }
                }
                true
            }
            (Fix(r1, k1), Fix(r2, k2)) => k1 == k2 && self.rec(r1, r2)?,
            (Cofix(r1), Cofix(r2)) => self.rec(r1, r2)?,
            (Sum(a1, b1), Sum(a2, b2)) => self.c(a1, a2)? && self.c(b1, b2)?,
            (Inl(a), Inl(b)) | (Inr(a), Inr(b)) | (Forced(a), Forced(b)) => self.c(a, b)?,
            (Unit, Unit) | (UnitVal, UnitVal) | (Empty, Empty) => true,
            (MatchSum(m1), MatchSum(m2)) => {
                self.c(&m1.scrut, &m2.scrut)?
                    && self.c(&m1.motive.body, &m2.motive.body)?
                    && self.c(&m1.left.body, &m2.left.body)?
                    && self.c(&m1.right.body, &m2.right.body)?
            }
            (MatchUnit(m1), MatchUnit(m2)) => {
                self.c(&m1.scrut, &m2.scrut)?
                    && self.c(&m1.motive.body, &m2.motive.body)?
                    && self.c(&m1.branch, &m2.branch)?
            }
            (MatchEmpty(s1, r1), MatchEmpty(s2, r2)) => self.c(s1, s2)? && self.c(r1, r2)?,
            (Mu(f1), Mu(f2)) | (Nu(f1), Nu(f2)) => {
                f1.sort == f2.sort && self.c(&f1.index, &f2.index)? && self.c(&f1.body, &f2.body)?
            }
            (MatchNu(m1), MatchNu(m2)) => self.one(m1, m2)?,
            (SigmaF(s1), SigmaF(s2)) => {
                self.c(&s1.domain, &s2.domain)?
                    && self.c(&s1.fiber, &s2.fiber)?
                    && self.c(&s1.index_fn, &s2.index_fn)?
                    && self.c(&s1.codomain, &s2.codomain)?
            }
            (PairF(p1), PairF(p2)) => self.c(&p1.fst, &p2.fst)? && self.c(&p1.snd, &p2.snd)?,
            (MatchSigma(m1), MatchSigma(m2)) => {
                self.c(&m1.scrut, &m2.scrut)?
                    && self.c(&m1.motive, &m2.motive)?
                    && self.c(&m1.branch, &m2.branch)?
            }
            (Coerce(c1, a), Coerce(c2, b)) | (CoerceIntro(c1, a), CoerceIntro(c2, b)) => {
                c1 == c2 && self.c(a, b)?
            }
            (MatchCoerce(c1, m1), MatchCoerce(c2, m2)) => c1 == c2 && self.one(m1, m2)?,
            _ => false,
        })
    }

    fn rec(&self, r1: &RecDef, r2: &RecDef) -> Result<bool, ReduceError> {
        if r1.params.len() != r2.params.len() {
            return Ok(false);
        }
        for ((_, a), (_, b)) in r1.params.iter().zip(&r2.params) {
            if !self.c(a, b)? {
                return Ok(false);
            }
        }
        Ok(self.c(&r1.ret, &r2.ret)? && self.c(&r1.body, &r2.body)?)
    }

    fn one(&self, m1: &MatchOne, m2: &MatchOne) -> Result<bool, ReduceError> {
        Ok(self.c(&m1.scrut, &m2.scrut)?
            && self.c(&m1.motive.body, &m2.motive.body)?
            && self.c(&m1.branch.body, &m2.branch.body)?)
    }
}

/// `(μX.F) a⃗ ↦ F[X\μX.F] a⃗`, likewise for `ν`.
pub fn unroll(t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    let head = head.unascribed();
    let family = match head {
        Term::Mu(f) | Term::Nu(f) => f,
        _ => return None,
    };
    if args.is_empty() {
        return None;
    }
    let body = family.body.subst(0, head);
    Some(Term::apps(body, args.into_iter().cloned()))
}

pub fn convertible(env: &GlobalEnv, t: &Term, u: &Term, eta: bool) -> Result<bool, ReduceError> {
    let red = Reducer::new(env);
    Converter::new(&red, eta).convertible(t, u)
}
