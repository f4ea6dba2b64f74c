//! Helpers shared by integration tests: random well-scoped terms and a
//! substitution oracle on named terms.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use algcic::kernel::{Branch, MatchSum, Motive, Sort, Term};
use proptest::prelude::*;

pub fn corpus() -> PathBuf {
    algcic::prelude::corpus_dir()
}

/// Term skeletons; variable numbers are reduced into scope when built.
#[derive(Clone, Debug)]
pub enum Shape {
    Var(usize),
    Unit,
    Sort,
    App(Box<Shape>, Box<Shape>),
    Lam(Box<Shape>, Box<Shape>),
    Pi(Box<Shape>, Box<Shape>),
    Sum(Box<Shape>, Box<Shape>),
    Inl(Box<Shape>),
    Mu(Box<Shape>, Box<Shape>),
    Match(Box<Shape>, Box<Shape>, Box<Shape>, Box<Shape>),
}

pub fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        4 => (0usize..6).prop_map(Shape::Var),
        1 => Just(Shape::Unit),
        1 => Just(Shape::Sort),
    ];
    leaf.prop_recursive(5, 48, 4, |inner| {
        let b = || inner.clone().prop_map(Box::new);
        prop_oneof![
            (b(), b()).prop_map(|(f, a)| Shape::App(f, a)),
            (b(), b()).prop_map(|(a, t)| Shape::Lam(a, t)),
            (b(), b()).prop_map(|(a, t)| Shape::Pi(a, t)),
            (b(), b()).prop_map(|(a, t)| Shape::Sum(a, t)),
            b().prop_map(Shape::Inl),
            (b(), b()).prop_map(|(a, t)| Shape::Mu(a, t)),
            (b(), b(), b(), b()).prop_map(|(s, p, l, r)| Shape::Match(s, p, l, r)),
        ]
    })
}

/// A de Bruijn term whose free variables are all below `scope`.
pub fn build(s: &Shape, scope: usize) -> Term {
    let bx = Box::new;
    match s {
        Shape::Var(i) if scope == 0 => {
            let _ = i;
            Term::Unit
        }
        Shape::Var(i) => Term::Var(i % scope),
        Shape::Unit => Term::Unit,
        Shape::Sort => Term::Sort(Sort::Type),
        Shape::App(f, a) => Term::app(build(f, scope), build(a, scope)),
        Shape::Lam(a, t) => Term::lam("x", build(a, scope), build(t, scope + 1)),
        Shape::Pi(a, t) => Term::pi("x", build(a, scope), build(t, scope + 1)),
        Shape::Sum(a, t) => Term::sum(build(a, scope), build(t, scope)),
        Shape::Inl(a) => Term::inl(build(a, scope)),
        Shape::Mu(a, t) => Term::mu("X", build(a, scope), Sort::Type, build(t, scope + 1)),
        Shape::Match(sc, p, l, r) => Term::MatchSum(bx(MatchSum {
            scrut: build(sc, scope),
            motive: Motive { binder: "z".into(), body: build(p, scope + 1) },
            left: Branch { binder: "y".into(), body: build(l, scope + 1) },
            right: Branch { binder: "w".into(), body: build(r, scope + 1) },
        })),
    }
}

/// Named terms over the same formers.
#[derive(Clone, Debug, PartialEq)]
pub enum Named {
    Var(String),
    Unit,
    Sort,
    App(Box<Named>, Box<Named>),
    Lam(String, Box<Named>, Box<Named>),
    Pi(String, Box<Named>, Box<Named>),
    Sum(Box<Named>, Box<Named>),
    Inl(Box<Named>),
    Mu(String, Box<Named>, Box<Named>),
    Match(Box<Named>, String, Box<Named>, String, Box<Named>, String, Box<Named>),
}

/// Name of the free variable at de Bruijn level `k`.
pub fn free_name(k: usize) -> String {
    format!("f{k}")
}

struct Namer {
    next: usize,
}

impl Namer {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("b{}", self.next)
    }
}

/// Converts a de Bruijn term with `scope` free variables; free variable
/// `Var(i)` becomes `f{scope-1-i}`.
pub fn to_named(t: &Term, scope: usize) -> Named {
    let mut names: Vec<String> = (0..scope).map(free_name).collect();
    to_named_in(t, &mut names, &mut Namer { next: 0 })
}

fn to_named_in(t: &Term, names: &mut Vec<String>, nm: &mut Namer) -> Named {
    let bx = Box::new;
    let under = |names: &mut Vec<String>, nm: &mut Namer, body: &Term| {
        let x = nm.fresh();
        names.push(x.clone());
        let b = to_named_in(body, names, nm);
        names.pop();
        (x, b)
    };
    match t {
        Term::Var(i) => Named::Var(names[names.len() - 1 - i].clone()),
        Term::Unit => Named::Unit,
        Term::Sort(_) => Named::Sort,
        Term::App(f, a) => Named::App(bx(to_named_in(f, names, nm)), bx(to_named_in(a, names, nm))),
        Term::Lam(_, a, b) => {
            let a = to_named_in(a, names, nm);
            let (x, b) = under(names, nm, b);
            Named::Lam(x, bx(a), bx(b))
        }
        Term::Pi(_, a, b) => {
            let a = to_named_in(a, names, nm);
            let (x, b) = under(names, nm, b);
            Named::Pi(x, bx(a), bx(b))
        }
        Term::Sum(a, b) => Named::Sum(bx(to_named_in(a, names, nm)), bx(to_named_in(b, names, nm))),
        Term::Inl(a) => Named::Inl(bx(to_named_in(a, names, nm))),
        Term::Mu(f) => {
            let a = to_named_in(&f.index, names, nm);
            let (x, b) = under(names, nm, &f.body);
            Named::Mu(x, bx(a), bx(b))
        }
        Term::MatchSum(m) => {
            let s = to_named_in(&m.scrut, names, nm);
            let (z, p) = under(names, nm, &m.motive.body);
            let (y, l) = under(names, nm, &m.left.body);
            let (w, r) = under(names, nm, &m.right.body);
            Named::Match(bx(s), z, bx(p), y, bx(l), w, bx(r))
        }
        other => panic!("former outside the oracle fragment: {other:?}"),
    }
}

/// Converts back, given the free names outermost first.
pub fn from_named(n: &Named, free: &[String]) -> Term {
    let mut names: Vec<String> = free.to_vec();
    from_named_in(n, &mut names)
}

fn from_named_in(n: &Named, names: &mut Vec<String>) -> Term {
    let under = |names: &mut Vec<String>, x: &str, b: &Named| {
        names.push(x.to_string());
        let t = from_named_in(b, names);
        names.pop();
        t
    };
    match n {
        Named::Var(x) => {
            let pos = names.iter().rposition(|y| y == x).expect("unbound name");
            Term::Var(names.len() - 1 - pos)
        }
        Named::Unit => Term::Unit,
        Named::Sort => Term::Sort(Sort::Type),
        Named::App(f, a) => Term::app(from_named_in(f, names), from_named_in(a, names)),
        Named::Lam(x, a, b) => {
            let a = from_named_in(a, names);
            Term::lam(x.as_str(), a, under(names, x, b))
        }
        Named::Pi(x, a, b) => {
            let a = from_named_in(a, names);
            Term::pi(x.as_str(), a, under(names, x, b))
        }
        Named::Sum(a, b) => Term::sum(from_named_in(a, names), from_named_in(b, names)),
        Named::Inl(a) => Term::inl(from_named_in(a, names)),
        Named::Mu(x, a, b) => {
            let a = from_named_in(a, names);
            Term::mu(x.as_str(), a, Sort::Type, under(names, x, b))
        }
        Named::Match(s, z, p, y, l, w, r) => Term::MatchSum(Box::new(MatchSum {
            scrut: from_named_in(s, names),
            motive: Motive { binder: z.clone(), body: under(names, z, p) },
            left: Branch { binder: y.clone(), body: under(names, y, l) },
            right: Branch { binder: w.clone(), body: under(names, w, r) },
        })),
    }
}

pub fn free_vars(n: &Named, out: &mut HashSet<String>) {
    let bound = |x: &str, b: &Named, out: &mut HashSet<String>| {
        let mut inner = HashSet::new();
        free_vars(b, &mut inner);
        inner.remove(x);
        out.extend(inner);
    };
    match n {
        Named::Var(x) => {
            out.insert(x.clone());
        }
        Named::Unit | Named::Sort => {}
        Named::App(a, b) | Named::Sum(a, b) => {
            free_vars(a, out);
            free_vars(b, out);
        }
        Named::Inl(a) => free_vars(a, out),
        Named::Lam(x, a, b) | Named::Pi(x, a, b) | Named::Mu(x, a, b) => {
            free_vars(a, out);
            bound(x, b, out);
        }
        Named::Match(s, z, p, y, l, w, r) => {
            free_vars(s, out);
            bound(z, p, out);
            bound(y, l, out);
            bound(w, r, out);
        }
    }
}

/// Capture-avoiding `n[x := v]`, renaming binders whose name is free in `v`.
pub fn named_subst(n: &Named, x: &str, v: &Named, counter: &mut usize) -> Named {
    let mut fv = HashSet::new();
    free_vars(v, &mut fv);
    subst_rec(n, x, v, &fv, counter)
}

fn subst_rec(n: &Named, x: &str, v: &Named, fv: &HashSet<String>, c: &mut usize) -> Named {
    let bx = Box::new;
    let binder = |y: &str, b: &Named, c: &mut usize| -> (String, Named) {
        if y == x {
            return (y.to_string(), b.clone());
        }
        if fv.contains(y) {
            *c += 1;
            let fresh = format!("r{c}");
            let renamed = subst_rec(b, y, &Named::Var(fresh.clone()), &HashSet::from([fresh.clone()]), c);
            (fresh.clone(), subst_rec(&renamed, x, v, fv, c))
        } else {
            (y.to_string(), subst_rec(b, x, v, fv, c))
        }
    };
    match n {
        Named::Var(y) if y == x => v.clone(),
        Named::Var(_) | Named::Unit | Named::Sort => n.clone(),
        Named::App(a, b) => Named::App(bx(subst_rec(a, x, v, fv, c)), bx(subst_rec(b, x, v, fv, c))),
        Named::Sum(a, b) => Named::Sum(bx(subst_rec(a, x, v, fv, c)), bx(subst_rec(b, x, v, fv, c))),
        Named::Inl(a) => Named::Inl(bx(subst_rec(a, x, v, fv, c))),
        Named::Lam(y, a, b) => {
            let a = subst_rec(a, x, v, fv, c);
            let (y, b) = binder(y, b, c);
            Named::Lam(y, bx(a), bx(b))
        }
        Named::Pi(y, a, b) => {
            let a = subst_rec(a, x, v, fv, c);
            let (y, b) = binder(y, b, c);
            Named::Pi(y, bx(a), bx(b))
        }
        Named::Mu(y, a, b) => {
            let a = subst_rec(a, x, v, fv, c);
            let (y, b) = binder(y, b, c);
            Named::Mu(y, bx(a), bx(b))
        }
        Named::Match(s, z, p, y, l, w, r) => {
            let s = subst_rec(s, x, v, fv, c);
            let (z, p) = binder(z, p, c);
            let (y, l) = binder(y, l, c);
            let (w, r) = binder(w, r, c);
            Named::Match(bx(s), z, bx(p), y, bx(l), w, bx(r))
        }
    }
}

/// Checks `t.subst(j, v)` against the oracle, for `t` with `scope` free
/// variables and `v` living in the context without `Var(j)`.
pub fn subst_agrees(t: &Term, j: usize, v: &Term, scope: usize) -> Result<(), String> {
    let got = t.subst(j, v);
    let target = free_name(scope - 1 - j);
    let named_t = to_named(t, scope);
    // `v` lives in the context where the level of `Var(j)` is removed.
    let remaining: Vec<String> = (0..scope).filter(|k| *k != scope - 1 - j).map(free_name).collect();
    let mut vnames = remaining.clone();
    let named_v = to_named_with(v, &mut vnames);
    let expected = from_named(&named_subst(&named_t, &target, &named_v, &mut 0), &remaining);
    if got == expected || algcic::kernel::alpha_eq(&got, &expected) {
        Ok(())
    } else {
        Err(format!("subst mismatch\n t = {t:?}\n j = {j}\n v = {v:?}\n got = {got:?}\n oracle = {expected:?}"))
    }
}

fn to_named_with(t: &Term, names: &mut Vec<String>) -> Named {
    to_named_in(t, names, &mut Namer { next: 1000 })
}
