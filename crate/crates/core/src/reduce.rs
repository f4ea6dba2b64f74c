//! One-step reduction, weak-head normalization and full normalization.
//!
//! The strategy is normal order with call-by-name unfolding of global
//! definitions. Rolling and unrolling of inductive fixed points is not a
//! reduction; it is part of conversion.

use std::cell::Cell;

use thiserror::Error;

use crate::kernel::*;

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RedexKind {
    Beta,
    IotaSum,
    IotaUnit,
    IotaSigma,
    FixUnfold,
    CofixUnderMatch,
    IotaNu,
    IotaBrace,
    IotaBracket,
    IotaSetBrace,
    IotaSetBracket,
    Delta,
}

impl RedexKind {
    fn for_coercion(c: Coercion) -> RedexKind {
        match c {
            Coercion::Brace => RedexKind::IotaBrace,
            Coercion::Bracket => RedexKind::IotaBracket,
            Coercion::SetBrace => RedexKind::IotaSetBrace,
            Coercion::SetBracket => RedexKind::IotaSetBracket,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("reduction exceeded the fuel bound of {0} steps")]
    FuelExhausted(u64),
}

/// A reduction engine over a fixed environment with a step budget shared by
/// every call made through it.
pub struct Reducer<'e> {
    env: &'e GlobalEnv,
    limit: u64,
    used: Cell<u64>,
}

impl<'e> Reducer<'e> {
    pub fn new(env: &'e GlobalEnv) -> Self {
        Self::with_fuel(env, DEFAULT_FUEL)
    }

    pub fn with_fuel(env: &'e GlobalEnv, limit: u64) -> Self {
        Reducer { env, limit, used: Cell::new(0) }
    }

    pub fn env(&self) -> &'e GlobalEnv {
        self.env
    }

    pub fn steps_used(&self) -> u64 {
        self.used.get()
    }

    fn tick(&self) -> Result<(), ReduceError> {
        let used = self.used.get() + 1;
        if used > self.limit {
            return Err(ReduceError::FuelExhausted(self.limit));
        }
        self.used.set(used);
        Ok(())
    }

    fn delta(&self, name: &str) -> Option<Term> {
        self.env.get(name).map(|d| d.body.clone())
    }

    /// Weak-head normal form.
    pub fn whnf(&self, t: &Term) -> Result<Term, ReduceError> {
        let mut t = t.unascribed().clone();
        loop {
            let next = match &t {
                Term::Def(name) => match self.delta(name) {
                    Some(body) => body,
                    None => return Ok(t),
                },
                Term::App(..) => {
                    let (head, args) = t.spine();
                    let head = self.whnf(head)?;
                    let mut args: Vec<Term> = args.into_iter().cloned().collect();
                    match head {
                        Term::Lam(_, _, body) => {
                            let rest = args.split_off(1);
                            Term::apps(body.subst(0, &args[0]), rest)
                        }
                        Term::Fix(ref r, k) if args.len() >= r.params.len() => {
                            let arg = self.whnf(&args[k])?;
                            if !arg.is_constructor_shaped() {
                                args[k] = arg;
                                return Ok(Term::apps(head, args));
                            }
                            args[k] = arg;
                            unfold_fix(&head, r, &args)
                        }
                        _ => return Ok(Term::apps(head, args)),
                    }
                }
                Term::MatchSum(m) => match self.whnf(&m.scrut)? {
                    Term::Inl(u) => m.left.body.subst(0, &u),
                    Term::Inr(u) => m.right.body.subst(0, &u),
                    s => return Ok(Term::MatchSum(Box::new(MatchSum { scrut: s, ..(**m).clone() }))),
                },
                Term::MatchUnit(m) => match self.whnf(&m.scrut)? {
                    Term::UnitVal => m.branch.clone(),
                    s => return Ok(Term::MatchUnit(Box::new(MatchUnit { scrut: s, ..(**m).clone() }))),
                },
                Term::MatchSigma(m) => match self.whnf(&m.scrut)? {
                    Term::PairF(p) => m.branch.instantiate(&[p.fst, p.snd]),
                    s => {
                        return Ok(Term::MatchSigma(Box::new(MatchSigma { scrut: s, ..(**m).clone() })))
                    }
                },
                Term::MatchNu(m) => {
                    let s = self.whnf(&m.scrut)?;
                    match s {
                        Term::Forced(u) => m.branch.body.subst(0, &u),
                        _ => match unfold_cofix(&s) {
                            Some(unfolded) => {
                                Term::MatchNu(Box::new(MatchOne { scrut: unfolded, ..(**m).clone() }))
                            }
                            None => {
                                return Ok(Term::MatchNu(Box::new(MatchOne { scrut: s, ..(**m).clone() })))
                            }
                        },
                    }
                }
                Term::MatchCoerce(c, m) => match self.whnf(&m.scrut)? {
                    Term::CoerceIntro(c2, u) if c2 == *c => m.branch.body.subst(0, &u),
                    s => {
                        return Ok(Term::MatchCoerce(*c, Box::new(MatchOne { scrut: s, ..(**m).clone() })))
                    }
                },
                Term::Ascribe(inner, _) => inner.unascribed().clone(),
                _ => return Ok(t),
            };
            self.tick()?;
            t = next.unascribed().clone();
        }
    }

    /// Full normal form. Bodies of co-recursive fixed points are values and
    /// are left untouched; ascriptions are dropped.
    pub fn normalize(&self, t: &Term) -> Result<Term, ReduceError> {
        let w = self.whnf(t)?;
        match &w {
            Term::Cofix(_) => Ok(w),
            Term::App(..) => {
                let (head, args) = w.spine();
                let head = match head {
                    Term::Cofix(_) => head.clone(),
                    _ => self.normalize(head)?,
                };
                let args = args
                    .into_iter()
                    .map(|a| self.normalize(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::apps(head, args))
            }
            _ => w.try_map_children(|c, _| self.normalize(c)),
        }
    }

    /// The leftmost-outermost redex and its contractum, if any.
    pub fn step(&self, t: &Term) -> Option<(Term, RedexKind)> {
        if let Some(r) = self.head_step(t) {
            return Some(r);
        }
        let t = t.unascribed();
        match t {
            Term::Cofix(_) => None,
            Term::App(..) => {
                let (head, args) = t.spine();
                // A fixed point waiting for its structural argument reduces it first.
                if let Term::Fix(r, k) = head.unascribed() {
                    if args.len() >= r.params.len() {
                        if let Some((a, kind)) = self.step(args[*k]) {
                            let mut args: Vec<Term> = args.into_iter().cloned().collect();
                            args[*k] = a;
                            return Some((Term::apps(head.clone(), args), kind));
                        }
                    }
                }
                if !matches!(head.unascribed(), Term::Cofix(_)) {
                    if let Some((h, kind)) = self.step(head) {
                        let args = args.into_iter().cloned();
                        return Some((Term::apps(h, args), kind));
                    }
                }
                for (i, a) in args.iter().enumerate() {
                    if let Some((a2, kind)) = self.step(a) {
                        let mut args: Vec<Term> = args.iter().map(|x| (*x).clone()).collect();
                        args[i] = a2;
                        return Some((Term::apps(head.clone(), args), kind));
                    }
                }
                None
            }
            _ => {
                let mut found: Option<RedexKind> = None;
                let rebuilt = t.map_children(|c, _| {
                    if found.is_some() {
                        return c.clone();
                    }
                    match self.step(c) {
                        Some((c2, kind)) => {
                            found = Some(kind);
                            c2
                        }
                        None => c.clone(),
                    }
                });
                found.map(|kind| (rebuilt, kind))
            }
        }
    }

    fn head_step(&self, t: &Term) -> Option<(Term, RedexKind)> {
        let t = t.unascribed();
        match t {
            Term::Def(name) => self.delta(name).map(|b| (b, RedexKind::Delta)),
            Term::App(..) => {
                let (head, args) = t.spine();
                match head.unascribed() {
                    Term::Lam(_, _, body) => {
                        let rest = args[1..].iter().map(|a| (*a).clone());
                        Some((Term::apps(body.subst(0, args[0]), rest), RedexKind::Beta))
                    }
                    Term::Fix(r, k) if args.len() >= r.params.len() => {
                        if args[*k].unascribed().is_constructor_shaped() {
                            let args: Vec<Term> = args.into_iter().cloned().collect();
                            Some((unfold_fix(head.unascribed(), r, &args), RedexKind::FixUnfold))
                        } else {
                            None
                        }
                    }
                    _ => None,
                }
            }
            Term::MatchSum(m) => match m.scrut.unascribed() {
                Term::Inl(u) => Some((m.left.body.subst(0, u), RedexKind::IotaSum)),
                Term::Inr(u) => Some((m.right.body.subst(0, u), RedexKind::IotaSum)),
                _ => None,
            },
            Term::MatchUnit(m) => {
                matches!(m.scrut.unascribed(), Term::UnitVal).then(|| (m.branch.clone(), RedexKind::IotaUnit))
            }
            Term::MatchSigma(m) => match m.scrut.unascribed() {
                Term::PairF(p) => Some((
                    m.branch.instantiate(&[p.fst.clone(), p.snd.clone()]),
                    RedexKind::IotaSigma,
                )),
                _ => None,
            },
            Term::MatchNu(m) => match m.scrut.unascribed() {
                Term::Forced(u) => Some((m.branch.body.subst(0, u), RedexKind::IotaNu)),
                s => unfold_cofix(s).map(|scrut| {
                    (
                        Term::MatchNu(Box::new(MatchOne { scrut, ..(**m).clone() })),
                        RedexKind::CofixUnderMatch,
                    )
                }),
            },
            Term::MatchCoerce(c, m) => match m.scrut.unascribed() {
                Term::CoerceIntro(c2, u) if c2 == c => {
                    Some((m.branch.body.subst(0, u), RedexKind::for_coercion(*c)))
                }
                _ => None,
            },
            _ => None,
        }
    }
}

/// `(fix f x₁…xₙ ⇒ u) v₁ … vₙ vₙ₊₁ … ⤳ u[f\fix, xᵢ\vᵢ] vₙ₊₁ …`
fn unfold_fix(fix: &Term, r: &RecDef, args: &[Term]) -> Term {
    let n = r.params.len();
    let mut values = Vec::with_capacity(n + 1);
    values.push(fix.clone());
    values.extend(args[..n].iter().cloned());
    Term::apps(r.body.instantiate(&values), args[n..].iter().cloned())
}

/// Unfolds a fully applied co-recursive fixed point.
fn unfold_cofix(t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    let Term::Cofix(r) = head.unascribed() else {
        return None;
    };
    if args.len() < r.params.len() {
        return None;
    }
    let n = r.params.len();
    let mut values = Vec::with_capacity(n + 1);
    values.push(head.unascribed().clone());
    values.extend(args[..n].iter().map(|a| (*a).clone()));
    Some(Term::apps(r.body.instantiate(&values), args[n..].iter().map(|a| (*a).clone())))
}

pub fn step(env: &GlobalEnv, t: &Term) -> Option<(Term, RedexKind)> {
    Reducer::new(env).step(t)
}

pub fn whnf(env: &GlobalEnv, t: &Term) -> Result<Term, ReduceError> {
    Reducer::new(env).whnf(t)
}

pub fn normalize(env: &GlobalEnv, t: &Term) -> Result<Term, ReduceError> {
    Reducer::new(env).normalize(t)
}
