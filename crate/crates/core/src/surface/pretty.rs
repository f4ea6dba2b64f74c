//! Rendering kernel terms back into surface syntax.
//!
//! The output parses back to an alpha-equivalent term: binder names are
//! freshened against every name in scope and every global they could hide.

use std::collections::HashSet;

use crate::kernel::*;

use super::lexer::is_keyword;

// Precedence levels, loosest first.
const BINDER: u8 = 0;
const ARROW: u8 = 1;
const PLUS: u8 = 2;
const TIMES: u8 = 3;
const APP: u8 = 4;
const ATOM: u8 = 5;

/// Renders a closed term.
pub fn pretty(t: &Term) -> String {
    pretty_in::<&str>(t, &[])
}

/// Renders `t` under a context whose names are given outermost first.
pub fn pretty_in<S: AsRef<str>>(t: &Term, names: &[S]) -> String {
    let mut avoid = HashSet::new();
    collect_defs(t, &mut avoid);
    let mut p = Printer { scope: names.iter().map(|s| s.as_ref().to_string()).collect(), avoid };
    p.term(t, BINDER)
}

fn collect_defs(t: &Term, out: &mut HashSet<String>) {
    if let Term::Def(n) = t {
        out.insert(n.clone());
    }
    t.for_each_child(|c, _| collect_defs(c, out));
}

/// Recognizes `(Σ^(() : 1) (x : A). T) ()`, the non-indexed dependent sum.
pub(crate) fn as_dependent_sum(t: &Term) -> Option<&SigmaF> {
    match t {
        Term::App(f, a) if matches!(**a, Term::UnitVal) => match &**f {
            Term::SigmaF(s) if s.index_fn == Term::UnitVal && s.codomain == Term::Unit => Some(s),
            _ => None,
        },
        _ => None,
    }
}

struct Printer {
    /// Names of bound variables, innermost last.
    scope: Vec<String>,
    avoid: HashSet<String>,
}

fn paren(s: String, needed: u8, actual: u8) -> String {
    if actual < needed {
        format!("({s})")
    } else {
        s
    }
}

impl Printer {
    fn fresh(&self, name: &str, used: bool) -> String {
        if !used {
            return "_".to_string();
        }
        let base = if name == "_" || name.is_empty() { "x" } else { name };
        let taken = |n: &str| self.scope.iter().any(|s| s == n) || self.avoid.contains(n) || is_keyword(n);
        if !taken(base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}{i}")).find(|n| !taken(n)).unwrap()
    }

    fn with<R>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> R) -> R {
        let n = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    /// Binds one name for a body, returning the chosen name.
    fn bind1(&self, name: &str, body: &Term) -> String {
        self.fresh(name, body.has_free(0))
    }

    fn term(&mut self, t: &Term, prec: u8) -> String {
        let (s, level) = self.render(t);
        paren(s, prec, level)
    }

    fn render(&mut self, t: &Term) -> (String, u8) {
        match t {
            Term::Sort(s) => (s.keyword().to_string(), ATOM),
            Term::Var(i) => {
                let s = match self.scope.len().checked_sub(i + 1) {
                    Some(pos) => self.scope[pos].clone(),
                    None => format!("?{i}"),
                };
                (s, ATOM)
            }
            Term::Def(n) => (n.clone(), ATOM),
            Term::Pi(x, a, b) if !b.has_free(0) => {
                let a = self.term(a, PLUS);
                let b = self.with(&["_".to_string()], |p| p.term(b, ARROW));
                (format!("{a} → {b}"), ARROW)
            }
            Term::Pi(..) => {
                let mut binders = Vec::new();
                let mut names = Vec::new();
                let mut cur = t;
                while let Term::Pi(x, a, b) = cur {
                    if !b.has_free(0) && !binders.is_empty() {
                        break;
                    }
                    let a = self.with(&names, |p| p.term(a, BINDER));
                    let n = self.with(&names, |p| p.bind1(x, b));
                    binders.push(format!("({n} : {a})"));
                    names.push(n);
                    cur = b;
                }
                let body = self.with(&names, |p| p.term(cur, BINDER));
                (format!("forall {}, {body}", binders.join(" ")), BINDER)
            }
            Term::Lam(..) => {
                let mut binders = Vec::new();
                let mut names = Vec::new();
                let mut cur = t;
                while let Term::Lam(x, a, b) = cur {
                    let a = self.with(&names, |p| p.term(a, BINDER));
                    let n = self.with(&names, |p| p.bind1(x, b));
                    binders.push(format!("({n} : {a})"));
                    names.push(n);
                    cur = b;
                }
                let body = self.with(&names, |p| p.term(cur, BINDER));
                (format!("fun {} => {body}", binders.join(" ")), BINDER)
            }
            Term::App(..) => {
                if let Some(s) = as_dependent_sum(t) {
                    let a = self.term(&s.domain, TIMES + 1);
                    if !s.fiber.has_free(0) {
                        let b = self.with(&["_".to_string()], |p| p.term(&s.fiber, TIMES));
                        return (format!("{a} × {b}"), TIMES);
                    }
                    let a = self.term(&s.domain, BINDER);
                    let n = self.bind1(&s.binder, &s.fiber);
                    let b = self.with(std::slice::from_ref(&n), |p| p.term(&s.fiber, BINDER));
                    return (format!("Σ ({n} : {a}). {b}"), BINDER);
                }
                let (head, args) = t.spine();
                let mut out = self.term(head, APP);
                for a in args {
                    out.push(' ');
                    out.push_str(&self.term(a, ATOM));
                }
                (out, APP)
            }
            Term::Fix(r, k) => (self.rec("fix", r, Some(*k)), BINDER),
            Term::Cofix(r) => (self.rec("cofix", r, None), BINDER),
            Term::Sum(a, b) => {
                let a = self.term(a, TIMES);
                let b = self.term(b, PLUS);
                (format!("{a} + {b}"), PLUS)
            }
            Term::Inl(u) => (format!("inl {}", self.term(u, ATOM)), APP),
            Term::Inr(u) => (format!("inr {}", self.term(u, ATOM)), APP),
            Term::Forced(u) => (format!("forced {}", self.term(u, ATOM)), APP),
            Term::Unit => ("1".to_string(), ATOM),
            Term::UnitVal => ("()".to_string(), ATOM),
            Term::Empty => ("0".to_string(), ATOM),
            Term::MatchSum(m) => {
                let head = self.match_head(&m.scrut, &m.motive);
                let l = self.branch("inl", &m.left);
                let r = self.branch("inr", &m.right);
                (format!("{head} | {l} | {r} end"), ATOM)
            }
            Term::MatchUnit(m) => {
                let head = self.match_head(&m.scrut, &m.motive);
                let v = self.term(&m.branch, BINDER);
                (format!("{head} | () => {v} end"), ATOM)
            }
            Term::MatchEmpty(u, a) => {
                let u = self.term(u, BINDER);
                let a = self.term(a, BINDER);
                (format!("match {u} return {a} with end"), ATOM)
            }
            Term::Mu(f) => (self.family("mu", f), BINDER),
            Term::Nu(f) => (self.family("nu", f), BINDER),
            Term::MatchNu(m) => {
                let head = self.match_head(&m.scrut, &m.motive);
                let b = self.branch("forced", &m.branch);
                (format!("{head} | {b} end"), ATOM)
            }
            Term::SigmaF(s) => (format!("Σ^{}", self.sigma_tail(s)), BINDER),
            Term::PairF(p) => {
                let u = self.term(&p.fst, BINDER);
                let v = self.term(&p.snd, BINDER);
                match &p.annot {
                    None => (format!("({u}, {v})"), ATOM),
                    Some(s) => (format!("({u}, {v})^{}", self.sigma_tail(s)), BINDER),
                }
            }
            Term::MatchSigma(m) => {
                let u = self.term(&m.scrut, BINDER);
                let y = self.fresh(&m.in_name, m.motive.has_free(1));
                let z = self.with(std::slice::from_ref(&y), |p| p.fresh(&m.as_name, m.motive.has_free(0)));
                let pm = self.with(&[y.clone(), z.clone()], |p| p.term(&m.motive, BINDER));
                let i = self.fresh(&m.fst_name, m.branch.has_free(1));
                let j = self.with(std::slice::from_ref(&i), |p| p.fresh(&m.snd_name, m.branch.has_free(0)));
                let v = self.with(&[i.clone(), j.clone()], |p| p.term(&m.branch, BINDER));
                let mut head = format!("match {u}");
                if z != "_" {
                    head.push_str(&format!(" as {z}"));
                }
                if y != "_" {
                    head.push_str(&format!(" in {y}"));
                }
                (format!("{head} return {pm} with | ({i}, {j}) => {v} end"), ATOM)
            }
            Term::Coerce(c, a) => {
                let a = self.term(a, BINDER);
                let s = match c {
                    Coercion::Brace => format!("{{{a}}}"),
                    Coercion::Bracket => format!("[{a}]"),
                    Coercion::SetBrace => format!("{{{a}}}set"),
                    Coercion::SetBracket => format!("[{a}]set"),
                };
                (s, ATOM)
            }
            Term::CoerceIntro(c, u) => match c {
                Coercion::Brace => (format!("prf {}", self.term(u, ATOM)), APP),
                Coercion::SetBrace => (format!("elt {}", self.term(u, ATOM)), APP),
                Coercion::Bracket => (format!("<{}>", self.term(u, BINDER)), ATOM),
                Coercion::SetBracket => (format!("<{}>set", self.term(u, BINDER)), ATOM),
            },
            Term::MatchCoerce(c, m) => {
                let head = self.match_head(&m.scrut, &m.motive);
                let y = self.bind1(&m.branch.binder, &m.branch.body);
                let v = self.with(std::slice::from_ref(&y), |p| p.term(&m.branch.body, BINDER));
                let pat = match c {
                    Coercion::Brace => format!("prf {y}"),
                    Coercion::SetBrace => format!("elt {y}"),
                    Coercion::Bracket => format!("<{y}>"),
                    Coercion::SetBracket => format!("<{y}>set"),
                };
                (format!("{head} | {pat} => {v} end"), ATOM)
            }
            Term::Ascribe(u, ty) => {
                let u = self.term(u, ARROW);
                let ty = self.term(ty, BINDER);
                (format!("({u} : {ty})"), ATOM)
            }
        }
    }

    fn match_head(&mut self, scrut: &Term, motive: &Motive) -> String {
        let u = self.term(scrut, BINDER);
        let x = self.bind1(&motive.binder, &motive.body);
        let p = self.with(std::slice::from_ref(&x), |p| p.term(&motive.body, BINDER));
        if x == "_" {
            format!("match {u} return {p} with")
        } else {
            format!("match {u} as {x} return {p} with")
        }
    }

    fn branch(&mut self, ctor: &str, b: &Branch) -> String {
        let y = self.bind1(&b.binder, &b.body);
        let v = self.with(std::slice::from_ref(&y), |p| p.term(&b.body, BINDER));
        format!("{ctor} {y} => {v}")
    }

    fn family(&mut self, kw: &str, f: &Family) -> String {
        let index = self.term(&f.index, PLUS);
        let x = self.bind1(&f.name, &f.body);
        let body = self.with(std::slice::from_ref(&x), |p| p.term(&f.body, BINDER));
        format!("{kw} {x} : {index} → {}. {body}", f.sort)
    }

    /// `(f : B) (x : A). T`
    fn sigma_tail(&mut self, s: &SigmaF) -> String {
        let b = self.term(&s.codomain, BINDER);
        let a = self.term(&s.domain, BINDER);
        let x = self.fresh(&s.binder, s.fiber.has_free(0) || s.index_fn.has_free(0));
        let (f, t) = self.with(std::slice::from_ref(&x), |p| (p.term(&s.index_fn, ARROW), p.term(&s.fiber, BINDER)));
        format!("({f} : {b}) ({x} : {a}). {t}")
    }

    fn rec(&mut self, kw: &str, r: &RecDef, struct_idx: Option<usize>) -> String {
        let n = r.params.len();
        let self_name = self.fresh(&r.name, true);
        let mut names: Vec<String> = Vec::new();
        let mut binders = Vec::new();
        for (i, (x, ty)) in r.params.iter().enumerate() {
            let ty = self.with(&names, |p| p.term(ty, BINDER));
            // Parameters must stay nameable when they are the structural one.
            let used = r.body.has_free(n - 1 - i)
                || r.ret.has_free(n - 1 - i)
                || r.params[i + 1..].iter().enumerate().any(|(j, (_, t))| t.has_free(j))
                || struct_idx == Some(i);
            let mut visible = names.clone();
            visible.push(self_name.clone());
            let name = self.with(&visible, |p| p.fresh(x, used));
            binders.push(format!("({name} : {ty})"));
            names.push(name);
        }
        let ret = self.with(&names, |p| p.term(&r.ret, BINDER));
        let mut body_scope = vec![self_name.clone()];
        body_scope.extend(names.iter().cloned());
        let body = self.with(&body_scope, |p| p.term(&r.body, BINDER));
        let mut out = format!("{kw} {self_name}");
        for b in &binders {
            out.push(' ');
            out.push_str(b);
        }
        if let Some(k) = struct_idx {
            out.push_str(&format!(" {{struct {}}}", names[k]));
        }
        out.push_str(&format!(" : {ret} => {body}"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injection_of_unit() {
        assert_eq!(pretty(&Term::inl(Term::UnitVal)), "inl ()");
    }

    #[test]
    fn arrows_associate_right() {
        let t = Term::arrow(Term::arrow(Term::Unit, Term::Unit), Term::arrow(Term::Unit, Term::Empty));
        assert_eq!(pretty(&t), "(1 → 1) → 1 → 0");
    }

    #[test]
    fn shadowed_binders_are_renamed() {
        let t = Term::lam("x", Term::Unit, Term::lam("x", Term::Unit, Term::Var(1)));
        assert_eq!(pretty(&t), "fun (x : 1) (_ : 1) => x");
        let t = Term::lam("x", Term::Unit, Term::lam("x", Term::Unit, Term::app(Term::Var(1), Term::Var(0))));
        assert_eq!(pretty(&t), "fun (x : 1) (x1 : 1) => x x1");
    }

    #[test]
    fn binder_does_not_hide_global() {
        let t = Term::lam("Nat", Term::Unit, Term::app(Term::def("Nat"), Term::Var(0)));
        assert_eq!(pretty(&t), "fun (Nat1 : 1) => Nat Nat1");
    }
}
