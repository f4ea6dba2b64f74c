//! Bidirectional type checking. Introduction forms are only ever checked
//! against a known type; everything else is inferred and compared by
//! conversion.

use crate::conversion::{unroll, Converter};
use crate::guard;
use crate::kernel::*;
use crate::positivity::strictly_positive;
use crate::reduce::{ReduceError, Reducer};
use crate::surface::pretty_in;

use super::error::{TypeError, TypeErrorKind};
use super::flags::{CofixElim, Flags};

type R<T> = Result<T, TypeError>;

/// How many times an inductive head is unrolled while looking for the
/// shape an introduction form needs.
const UNROLL_LIMIT: usize = 32;

pub fn axiom_sort(s: Sort) -> Result<Sort, TypeErrorKind> {
    match s {
        Sort::Type => Ok(Sort::Box),
        Sort::Prop | Sort::Set => Ok(Sort::Type),
        Sort::Box => Err(TypeErrorKind::NoAxiom(Sort::Box)),
    }
}

/// Sort of `Π x:A. B` when `A : s1` and `B : s2`.
pub fn product_sort(s1: Sort, s2: Sort, flags: &Flags) -> Result<Sort, TypeErrorKind> {
    use Sort::*;
    match (s1, s2) {
        (Type | Box, Type | Box) => Ok(if s1 == Box || s2 == Box { Box } else { Type }),
        (_, Prop) => Ok(Prop),
        (Set, Set) => Ok(Set),
        (_, Set) if flags.impredicative_set => Ok(Set),
        _ => Err(TypeErrorKind::NoProductRule(s1, s2)),
    }
}

fn fuel(e: ReduceError, path: &TermPath) -> TypeError {
    let ReduceError::FuelExhausted(n) = e;
    TypeError { kind: TypeErrorKind::FuelExhausted(n), path: path.clone() }
}

fn fail<T>(path: &TermPath, kind: TypeErrorKind) -> R<T> {
    Err(TypeError { kind, path: path.clone() })
}

/// The head of an application spine when it is a co-inductive family.
fn nu_applied(t: &Term) -> bool {
    let (head, args) = t.spine();
    matches!(head.unascribed(), Term::Nu(_)) && !args.is_empty()
}

/// `App(Σ^f …, b)` split into its family and index.
fn sigma_applied(t: &Term) -> Option<(&SigmaF, &Term)> {
    match t {
        Term::App(f, b) => match f.unascribed() {
            Term::SigmaF(s) => Some((s, b)),
            _ => None,
        },
        _ => None,
    }
}

/// The motive `P` (binding one variable) instantiated with a value that
/// itself lives under one fresh binder.
fn motive_under_binder(motive: &Term, value: Term) -> Term {
    motive.shift(1, 1).subst(0, &value)
}

/// A checker for one definition: owns the reduction budget.
pub struct Checker<'e> {
    env: &'e GlobalEnv,
    flags: Flags,
    red: Reducer<'e>,
}

impl<'e> Checker<'e> {
    pub fn new(env: &'e GlobalEnv, flags: Flags) -> Self {
        Checker { env, flags, red: Reducer::with_fuel(env, flags.fuel) }
    }

    pub fn reducer(&self) -> &Reducer<'e> {
        &self.red
    }

    pub fn flags(&self) -> &Flags {
        &self.flags
    }

    fn render(&self, ctx: &Context, t: &Term) -> String {
        let names: Vec<&str> = ctx.names().collect();
        pretty_in(t, &names)
    }

    fn whnf(&self, t: &Term, path: &TermPath) -> R<Term> {
        self.red.whnf(t).map_err(|e| fuel(e, path))
    }

    /// Weak-head normal form, unrolling inductive heads until something
    /// else shows up.
    fn whnf_unroll(&self, t: &Term, path: &TermPath) -> R<Term> {
        let mut w = self.whnf(t, path)?;
        for _ in 0..UNROLL_LIMIT {
            let (head, args) = w.spine();
            if !matches!(head, Term::Mu(_)) || args.is_empty() {
                break;
            }
            w = self.whnf(&unroll(&w).expect("applied family unrolls"), path)?;
        }
        Ok(w)
    }

    pub fn convertible(&self, t: &Term, u: &Term, path: &TermPath) -> R<bool> {
        Converter::new(&self.red, self.flags.eta).convertible(t, u).map_err(|e| fuel(e, path))
    }

    fn expect_conv(&self, ctx: &Context, expected: &Term, got: &Term, path: &TermPath) -> R<()> {
        if self.convertible(expected, got, path)? {
            Ok(())
        } else {
            fail(
                path,
                TypeErrorKind::NotConvertible {
                    expected: self.render(ctx, expected),
                    got: self.render(ctx, got),
                },
            )
        }
    }

    /// The sort of a type.
    pub fn infer_sort(&self, ctx: &Context, t: &Term, path: &TermPath) -> R<Sort> {
        let ty = self.infer(ctx, t, path)?;
        match self.whnf(&ty, path)? {
            Term::Sort(s) => Ok(s),
            _ => fail(path, TypeErrorKind::NotASort(self.render(ctx, t))),
        }
    }

    /// Checks `t : s`, using the rules for each type former directly so
    /// that formers living in several sorts can be placed in any of them.
    pub fn check_sort(&self, ctx: &Context, t: &Term, s: Sort, path: &TermPath) -> R<()> {
        match t {
            Term::Unit | Term::Empty if s != Sort::Box => Ok(()),
            Term::Sum(a, b) => {
                if !matches!(s, Sort::Type | Sort::Set) {
                    return fail(path, TypeErrorKind::NoFormationRule(format!("sums do not live in {s}")));
                }
                self.check_sort(ctx, a, s, &path.child("left"))?;
                self.check_sort(ctx, b, s, &path.child("right"))
            }
            Term::Pi(x, a, b) if s != Sort::Box => {
                let inner = ctx.extended(x.clone(), (**a).clone());
                self.check_sort(&inner, b, s, &path.child("codomain"))?;
                let dpath = path.child("domain");
                let s1 = self.infer_sort(ctx, a, &dpath)?;
                if product_sort(s1, s, &self.flags) == Ok(s) {
                    return Ok(());
                }
                for alt in [Sort::Set, Sort::Prop, Sort::Type] {
                    if alt != s1
                        && product_sort(alt, s, &self.flags) == Ok(s)
                        && self.check_sort(ctx, a, alt, &dpath).is_ok()
                    {
                        return Ok(());
                    }
                }
                fail(path, TypeErrorKind::NoProductRule(s1, s))
            }
            Term::Coerce(c, a) => {
                self.coercion_formation(*c, path)?;
                if c.target() != s {
                    return fail(
                        path,
                        TypeErrorKind::NotConvertible {
                            expected: s.to_string(),
                            got: c.target().to_string(),
                        },
                    );
                }
                self.check_sort(ctx, a, c.source(), &path.child("argument"))
            }
            _ => {
                if let Some((sigma, b)) = sigma_applied(t) {
                    self.sigma_formation(ctx, sigma, s, &path.child("function"))?;
                    return self.check(ctx, b, &sigma.codomain, &path.child("argument"));
                }
                let got = self.infer_sort(ctx, t, path)?;
                if got == s {
                    Ok(())
                } else {
                    fail(
                        path,
                        TypeErrorKind::NotConvertible { expected: s.to_string(), got: got.to_string() },
                    )
                }
            }
        }
    }

    fn coercion_formation(&self, c: Coercion, path: &TermPath) -> R<()> {
        if c == Coercion::SetBracket && !self.flags.impredicative_set {
            return fail(
                path,
                TypeErrorKind::NoFormationRule("[A]set requires impredicative Set".to_string()),
            );
        }
        Ok(())
    }

    /// The premises of `Σ^f_{x:A} T : B → s`.
    fn sigma_formation(&self, ctx: &Context, sigma: &SigmaF, s: Sort, path: &TermPath) -> R<()> {
        let parts = match s {
            Sort::Type | Sort::Set | Sort::Prop => s,
            Sort::Box => {
                return fail(path, TypeErrorKind::NoFormationRule("Σ^f does not live in Box".to_string()))
            }
        };
        self.check_sort(ctx, &sigma.domain, parts, &path.child("domain"))?;
        let cpath = path.child("codomain");
        if s == Sort::Prop {
            if let Err(e) = self.check_sort(ctx, &sigma.codomain, Sort::Prop, &cpath) {
                if !self.flags.singleton_proper_index {
                    if self.check_sort(ctx, &sigma.codomain, Sort::Type, &cpath).is_ok() {
                        return fail(
                            &cpath,
                            TypeErrorKind::NoFormationRule(
                                "a proposition indexed over a Type needs the singleton rule for proper indices"
                                    .to_string(),
                            ),
                        );
                    }
                    return Err(e);
                }
                self.check_sort(ctx, &sigma.codomain, Sort::Type, &cpath)?;
            }
        } else {
            self.check_sort(ctx, &sigma.codomain, parts, &cpath)?;
        }
        let inner = ctx.extended(sigma.binder.clone(), sigma.domain.clone());
        self.check_sort(&inner, &sigma.fiber, parts, &path.child("fiber"))?;
        self.check(&inner, &sigma.index_fn, &sigma.codomain.shift(1, 0), &path.child("index-function"))
    }

    /// Sort of `Π x:A. B`, given as a whole term `t`.
    fn pi_sort(&self, ctx: &Context, t: &Term, path: &TermPath) -> R<Sort> {
        let Term::Pi(x, a, b) = t else { unreachable!("pi_sort on a non-product") };
        let s1 = self.infer_sort(ctx, a, &path.child("domain"))?;
        let inner = ctx.extended(x.clone(), (**a).clone());
        let s2 = self.infer_sort(&inner, b, &path.child("codomain"))?;
        match product_sort(s1, s2, &self.flags) {
            Ok(s) => Ok(s),
            Err(kind) => {
                for alt in [Sort::Prop, Sort::Set] {
                    if self.check_sort(ctx, t, alt, path).is_ok() {
                        return Ok(alt);
                    }
                }
                fail(path, kind)
            }
        }
    }

    fn family(&self, ctx: &Context, t: &Term, fam: &Family, nu: bool, path: &TermPath) -> R<Term> {
        let allowed: &[Sort] = if nu { &[Sort::Type, Sort::Set] } else { &[Sort::Type, Sort::Prop, Sort::Set] };
        if !allowed.contains(&fam.sort) {
            let what = if nu { "co-inductive" } else { "inductive" };
            return fail(
                path,
                TypeErrorKind::NoFormationRule(format!("{what} families cannot live in {}", fam.sort)),
            );
        }
        self.infer_sort(ctx, &fam.index, &path.child("index"))?;
        let kind = fam.kind();
        let inner = ctx.extended(fam.name.clone(), kind.clone());
        let bpath = path.child("body");
        self.check(&inner, &fam.body, &kind.shift(1, 0), &bpath)?;
        if !strictly_positive(&self.red, 0, &fam.body).map_err(|e| fuel(e, &bpath))? {
            return fail(&bpath, TypeErrorKind::PositivityViolation(self.render(ctx, t)));
        }
        Ok(kind)
    }

    /// Checks the telescope and return type of a fixed point, returning its
    /// full type and the context of its parameters.
    fn rec_header(&self, ctx: &Context, rec: &RecDef, path: &TermPath) -> R<(Term, Context)> {
        let mut inner = ctx.clone();
        for (x, ty) in &rec.params {
            self.infer_sort(&inner, ty, &path.child("parameter"))?;
            inner.push(x.clone(), ty.clone());
        }
        self.infer_sort(&inner, &rec.ret, &path.child("return-type"))?;
        let full = rec.telescope_type();
        self.infer_sort(ctx, &full, path)?;
        Ok((full, inner))
    }

    fn rec_body(&self, ctx: &Context, rec: &RecDef, full: &Term, path: &TermPath) -> R<()> {
        let n = rec.params.len();
        let mut inner = ctx.extended(rec.name.clone(), full.clone());
        for (i, (x, ty)) in rec.params.iter().enumerate() {
            inner.push(x.clone(), ty.shift(1, i));
        }
        self.check(&inner, &rec.body, &rec.ret.shift(1, n), &path.child("body"))
    }

    fn fix(&self, ctx: &Context, rec: &RecDef, k: usize, path: &TermPath) -> R<Term> {
        if k >= rec.params.len() {
            return fail(
                path,
                TypeErrorKind::NoFormationRule("fixed point without a structural parameter".to_string()),
            );
        }
        let (full, _) = self.rec_header(ctx, rec, path)?;
        let mut before = ctx.clone();
        for (x, ty) in &rec.params[..k] {
            before.push(x.clone(), ty.clone());
        }
        let sty = &rec.params[k].1;
        let shape = self.whnf_unroll(sty, &path.child("parameter"))?;
        let bearing = matches!(shape, Term::Sum(..) | Term::Unit | Term::Empty | Term::Coerce(..))
            || sigma_applied(&shape).is_some();
        if !bearing {
            return fail(&path.child("parameter"), TypeErrorKind::NotInductive(self.render(&before, sty)));
        }
        guard::check_fix(rec, k).map_err(|v| TypeError {
            path: path.join(&v.path),
            kind: TypeErrorKind::GuardViolation(v),
        })?;
        self.rec_body(ctx, rec, &full, path)?;
        Ok(full)
    }

    fn cofix(&self, ctx: &Context, rec: &RecDef, path: &TermPath) -> R<Term> {
        let (full, inner) = self.rec_header(ctx, rec, path)?;
        let rpath = path.child("return-type");
        if !nu_applied(&self.whnf(&rec.ret, &rpath)?) {
            return fail(&rpath, TypeErrorKind::NotAFamily(self.render(&inner, &rec.ret)));
        }
        guard::check_cofix(rec).map_err(|v| TypeError {
            path: path.join(&v.path),
            kind: TypeErrorKind::GuardViolation(v),
        })?;
        self.rec_body(ctx, rec, &full, path)?;
        Ok(full)
    }

    fn scrutinee_mismatch<T>(&self, ctx: &Context, expected: &str, got: &Term, path: &TermPath) -> R<T> {
        fail(
            path,
            TypeErrorKind::ScrutineeMismatch { expected: expected.to_string(), got: self.render(ctx, got) },
        )
    }

    /// Checks a one-variable motive over `scrut_ty` and returns its sort.
    fn motive(&self, ctx: &Context, scrut_ty: &Term, m: &Motive, path: &TermPath) -> R<Sort> {
        let inner = ctx.extended(m.binder.clone(), scrut_ty.clone());
        self.infer_sort(&inner, &m.body, &path.child("motive"))
    }

    /// Checks a branch binding `y : dom` against the motive at `value`,
    /// where `value` mentions `y` as `Var(0)`.
    fn branch(
        &self,
        ctx: &Context,
        b: &Branch,
        dom: &Term,
        motive: &Term,
        value: Term,
        path: &TermPath,
    ) -> R<()> {
        let inner = ctx.extended(b.binder.clone(), dom.clone());
        self.check(&inner, &b.body, &motive_under_binder(motive, value), path)
    }

    pub fn infer(&self, ctx: &Context, t: &Term, path: &TermPath) -> R<Term> {
        match t {
            Term::Sort(s) => axiom_sort(*s).map(Term::Sort).or_else(|k| fail(path, k)),
            Term::Var(i) => match ctx.lookup(*i) {
                Some(ty) => Ok(ty),
                None => fail(path, TypeErrorKind::UnboundVariable(format!("#{i}"))),
            },
            Term::Def(name) => match self.env.get(name) {
                Some(d) => Ok(d.ty.clone()),
                None => fail(path, TypeErrorKind::UnboundVariable(name.clone())),
            },
            Term::Pi(..) => self.pi_sort(ctx, t, path).map(Term::Sort),
            Term::Lam(x, a, b) => {
                self.infer_sort(ctx, a, &path.child("domain"))?;
                let inner = ctx.extended(x.clone(), (**a).clone());
                let bt = self.infer(&inner, b, &path.child("body"))?;
                let pi = Term::Pi(x.clone(), a.clone(), Box::new(bt));
                self.pi_sort(ctx, &pi, path)?;
                Ok(pi)
            }
            Term::App(f, a) => {
                let ft = self.infer(ctx, f, &path.child("function"))?;
                match self.whnf(&ft, path)? {
                    Term::Pi(_, dom, cod) => {
                        self.check(ctx, a, &dom, &path.child("argument"))?;
                        Ok(cod.subst(0, a))
                    }
                    _ => fail(path, TypeErrorKind::NotAFunction(self.render(ctx, f))),
                }
            }
            Term::Fix(rec, k) => self.fix(ctx, rec, *k, path),
            Term::Cofix(rec) => self.cofix(ctx, rec, path),
            Term::Sum(a, b) => {
                let sa = self.infer_sort(ctx, a, &path.child("left"))?;
                let sb = self.infer_sort(ctx, b, &path.child("right"))?;
                let s = if sa == Sort::Set || sb == Sort::Set { Sort::Set } else { Sort::Type };
                self.check_sort(ctx, t, s, path)?;
                Ok(Term::Sort(s))
            }
            Term::Unit | Term::Empty => Ok(Term::Sort(Sort::Type)),
            Term::UnitVal => Ok(Term::Unit),
            Term::Inl(_) | Term::Inr(_) | Term::Forced(_) | Term::CoerceIntro(..) => {
                fail(path, TypeErrorKind::ConstructorNeedsAnnotation(self.render(ctx, t)))
            }
            Term::PairF(p) => {
                let Some(sigma) = &p.annot else {
                    return fail(path, TypeErrorKind::ConstructorNeedsAnnotation(self.render(ctx, t)));
                };
                let family = Term::sigma_f(sigma.clone());
                self.infer(ctx, &family, path)?;
                self.check(ctx, &p.fst, &sigma.domain, &path.child("first"))?;
                self.check(ctx, &p.snd, &sigma.fiber.subst(0, &p.fst), &path.child("second"))?;
                Ok(Term::app(family, sigma.index_fn.subst(0, &p.fst)))
            }
            Term::SigmaF(sigma) => {
                let dom_sort = self.infer_sort(ctx, &sigma.domain, &path.child("domain"))?;
                let mut order = vec![dom_sort];
                order.extend([Sort::Type, Sort::Prop, Sort::Set].into_iter().filter(|s| *s != dom_sort));
                let mut first_err = None;
                for s in order {
                    match self.sigma_formation(ctx, sigma, s, path) {
                        Ok(()) => return Ok(Term::arrow(sigma.codomain.clone(), Term::Sort(s))),
                        Err(e) => {
                            first_err.get_or_insert(e);
                        }
                    }
                }
                Err(first_err.expect("at least one sort was tried"))
            }
            Term::Mu(fam) => self.family(ctx, t, fam, false, path),
            Term::Nu(fam) => self.family(ctx, t, fam, true, path),
            Term::Coerce(c, _) => {
                self.check_sort(ctx, t, c.target(), path)?;
                Ok(Term::Sort(c.target()))
            }
            Term::Ascribe(u, ty) => {
                self.infer_sort(ctx, ty, &path.child("type"))?;
                self.check(ctx, u, ty, &path.child("term"))?;
                Ok((**ty).clone())
            }
            Term::MatchEmpty(scrut, ret) => {
                let spath = path.child("scrutinee");
                let st = self.infer(ctx, scrut, &spath)?;
                if self.whnf_unroll(&st, &spath)? != Term::Empty {
                    return self.scrutinee_mismatch(ctx, "the empty type", &st, &spath);
                }
                self.infer_sort(ctx, ret, &path.child("motive"))?;
                Ok((**ret).clone())
            }
            Term::MatchSum(m) => {
                let spath = path.child("scrutinee");
                let st = self.infer(ctx, &m.scrut, &spath)?;
                let Term::Sum(l, r) = self.whnf_unroll(&st, &spath)? else {
                    return self.scrutinee_mismatch(ctx, "a sum type", &st, &spath);
                };
                self.motive(ctx, &st, &m.motive, path)?;
                let st1 = st.shift(1, 0);
                let p = &m.motive.body;
                let inl = Term::ascribe(Term::inl(Term::Var(0)), st1.clone());
                let inr = Term::ascribe(Term::inr(Term::Var(0)), st1);
                self.branch(ctx, &m.left, &l, p, inl, &path.child("inl-branch"))?;
                self.branch(ctx, &m.right, &r, p, inr, &path.child("inr-branch"))?;
                Ok(p.subst(0, &m.scrut))
            }
            Term::MatchUnit(m) => {
                let spath = path.child("scrutinee");
                let st = self.infer(ctx, &m.scrut, &spath)?;
                if self.whnf_unroll(&st, &spath)? != Term::Unit {
                    return self.scrutinee_mismatch(ctx, "the unit type", &st, &spath);
                }
                self.motive(ctx, &st, &m.motive, path)?;
                let p = &m.motive.body;
                self.check(ctx, &m.branch, &p.subst(0, &Term::UnitVal), &path.child("branch"))?;
                Ok(p.subst(0, &m.scrut))
            }
            Term::MatchNu(m) => {
                let spath = path.child("scrutinee");
                let st = self.infer(ctx, &m.scrut, &spath)?;
                let w = self.whnf(&st, &spath)?;
                if !nu_applied(&w) {
                    return self.scrutinee_mismatch(ctx, "an applied co-inductive family", &st, &spath);
                }
                let p = &m.motive.body;
                if self.flags.cofix_elim == CofixElim::Weak && p.has_free(0) {
                    return fail(
                        &path.child("motive"),
                        TypeErrorKind::EliminationRestricted {
                            construct: "a co-inductive family".to_string(),
                            allowed: "return types independent of the matched term".to_string(),
                            actual: self.render(
                                &ctx.extended(m.motive.binder.clone(), st.clone()),
                                p,
                            ),
                        },
                    );
                }
                self.motive(ctx, &st, &m.motive, path)?;
                let dom = unroll(&w).expect("applied family unrolls");
                let forced = Term::ascribe(Term::forced(Term::Var(0)), st.shift(1, 0));
                self.branch(ctx, &m.branch, &dom, p, forced, &path.child("branch"))?;
                Ok(p.subst(0, &m.scrut))
            }
            Term::MatchCoerce(c, m) => {
                let spath = path.child("scrutinee");
                let st = self.infer(ctx, &m.scrut, &spath)?;
                let a = match self.whnf_unroll(&st, &spath)? {
                    Term::Coerce(c2, a) if c2 == *c => *a,
                    _ => {
                        let expected = format!("a {} type", c.describe());
                        return self.scrutinee_mismatch(ctx, &expected, &st, &spath);
                    }
                };
                let p = &m.motive.body;
                if let Some(allowed) = c.restricted_to() {
                    let inner = ctx.extended(m.motive.binder.clone(), st.clone());
                    let mpath = path.child("motive");
                    if self.check_sort(&inner, p, allowed, &mpath).is_err() {
                        let actual = self.infer_sort(&inner, p, &mpath)?;
                        return fail(
                            &mpath,
                            TypeErrorKind::EliminationRestricted {
                                construct: format!("a {} type", c.describe()),
                                allowed: allowed.to_string(),
                                actual: actual.to_string(),
                            },
                        );
                    }
                } else {
                    self.motive(ctx, &st, &m.motive, path)?;
                }
                let intro = Term::ascribe(Term::coerce_intro(*c, Term::Var(0)), st.shift(1, 0));
                self.branch(ctx, &m.branch, &a, p, intro, &path.child("branch"))?;
                Ok(p.subst(0, &m.scrut))
            }
            Term::MatchSigma(m) => self.match_sigma(ctx, m, path),
        }
    }

    fn match_sigma(&self, ctx: &Context, m: &MatchSigma, path: &TermPath) -> R<Term> {
        let spath = path.child("scrutinee");
        let st = self.infer(ctx, &m.scrut, &spath)?;
        let w = self.whnf_unroll(&st, &spath)?;
        let Some((sigma, b)) = sigma_applied(&w) else {
            return self.scrutinee_mismatch(ctx, "an applied Σ^f family", &st, &spath);
        };
        let family = Term::sigma_f(sigma.clone());
        let with_y = ctx.extended(m.in_name.clone(), sigma.codomain.clone());
        let with_z = with_y.extended(m.as_name.clone(), Term::app(family.shift(1, 0), Term::Var(0)));
        self.infer_sort(&with_z, &m.motive, &path.child("motive"))?;
        let with_i = ctx.extended(m.fst_name.clone(), sigma.domain.clone());
        let with_j = with_i.extended(m.snd_name.clone(), sigma.fiber.clone());
        let pair = Term::pair(
            Term::Var(1),
            Term::Var(0),
            match family.shift(2, 0) {
                Term::SigmaF(s) => Some(*s),
                _ => unreachable!(),
            },
        );
        let expected = m.motive.shift(2, 2).instantiate(&[sigma.index_fn.shift(1, 0), pair]);
        self.check(&with_j, &m.branch, &expected, &path.child("branch"))?;
        Ok(m.motive.instantiate(&[b.clone(), m.scrut.clone()]))
    }

    pub fn check(&self, ctx: &Context, t: &Term, expected: &Term, path: &TermPath) -> R<()> {
        match t {
            Term::Lam(x, a, b) => {
                if let Term::Pi(_, ea, eb) = self.whnf_unroll(expected, path)? {
                    let dpath = path.child("domain");
                    self.infer_sort(ctx, a, &dpath)?;
                    self.expect_conv(ctx, &ea, a, &dpath)?;
                    let inner = ctx.extended(x.clone(), (**a).clone());
                    return self.check(&inner, b, &eb, &path.child("body"));
                }
            }
            Term::Inl(u) | Term::Inr(u) => {
                let left = matches!(t, Term::Inl(_));
                return match self.whnf_unroll(expected, path)? {
                    Term::Sum(l, r) => {
                        let side = if left { l } else { r };
                        self.check(ctx, u, &side, &path.child("argument"))
                    }
                    _ => self.unexpected(ctx, if left { "inl" } else { "inr" }, expected, path),
                };
            }
            Term::Forced(u) => {
                let w = self.whnf(expected, path)?;
                if !nu_applied(&w) {
                    return self.unexpected(ctx, "forced", expected, path);
                }
                let unrolled = unroll(&w).expect("applied family unrolls");
                return self.check(ctx, u, &unrolled, &path.child("argument"));
            }
            Term::CoerceIntro(c, u) => {
                return match self.whnf_unroll(expected, path)? {
                    Term::Coerce(c2, a) if c2 == *c => self.check(ctx, u, &a, &path.child("argument")),
                    _ => self.unexpected(ctx, intro_name(*c), expected, path),
                };
            }
            Term::PairF(p) if p.annot.is_none() => {
                let w = self.whnf_unroll(expected, path)?;
                let Some((sigma, b)) = sigma_applied(&w) else {
                    return self.unexpected(ctx, "a pair", expected, path);
                };
                self.check(ctx, &p.fst, &sigma.domain, &path.child("first"))?;
                self.check(ctx, &p.snd, &sigma.fiber.subst(0, &p.fst), &path.child("second"))?;
                let index = sigma.index_fn.subst(0, &p.fst);
                return self.expect_conv(ctx, b, &index, path);
            }
            Term::SigmaF(sigma) => {
                if let Term::Pi(_, dom, cod) = self.whnf(expected, path)? {
                    if let Term::Sort(s) = self.whnf(&cod, path)? {
                        if !cod.has_free(0) {
                            self.sigma_formation(ctx, sigma, s, path)?;
                            return self.expect_conv(ctx, &dom, &sigma.codomain, &path.child("codomain"));
                        }
                    }
                }
            }
            Term::Unit | Term::Empty | Term::Sum(..) | Term::Pi(..) | Term::Coerce(..) | Term::App(..) => {
                let is_former = !matches!(t, Term::App(..)) || sigma_applied(t).is_some();
                if is_former {
                    if let Term::Sort(s) = self.whnf(expected, path)? {
                        return self.check_sort(ctx, t, s, path);
                    }
                }
            }
            _ => {}
        }
        let got = self.infer(ctx, t, path)?;
        self.expect_conv(ctx, expected, &got, path)
    }

    fn unexpected(&self, ctx: &Context, construct: &str, expected: &Term, path: &TermPath) -> R<()> {
        fail(
            path,
            TypeErrorKind::UnexpectedType {
                construct: construct.to_string(),
                expected: self.render(ctx, expected),
            },
        )
    }
}

fn intro_name(c: Coercion) -> &'static str {
    match c {
        Coercion::Brace => "prf",
        Coercion::Bracket => "<_>",
        Coercion::SetBrace => "elt",
        Coercion::SetBracket => "<_>set",
    }
}

/// Infers the type of `t` with a fresh checker.
pub fn infer(env: &GlobalEnv, ctx: &Context, flags: &Flags, t: &Term) -> Result<Term, TypeError> {
    Checker::new(env, *flags).infer(ctx, t, &TermPath::root())
}

pub fn check(env: &GlobalEnv, ctx: &Context, flags: &Flags, t: &Term, expected: &Term) -> Result<(), TypeError> {
    Checker::new(env, *flags).check(ctx, t, expected, &TermPath::root())
}
