//! Named surface syntax, before scope resolution.

use crate::kernel::{Coercion, Sort};

#[derive(Clone, Debug, PartialEq)]
pub struct Binder {
    pub name: String,
    pub ty: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaAnnot {
    pub index: Expr,
    pub codomain: Expr,
    pub binder: Box<Binder>,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pattern {
    Inl(String),
    Inr(String),
    Unit,
    Pair(String, String),
    Forced(String),
    Intro(Coercion, String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchExpr {
    pub scrut: Expr,
    pub as_name: Option<String>,
    pub in_name: Option<String>,
    pub ret: Expr,
    pub arms: Vec<(Pattern, Expr)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecExpr {
    pub name: String,
    pub params: Vec<Binder>,
    pub structural: Option<String>,
    pub ret: Expr,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Sort(Sort),
    Var(String),
    Pi(Vec<Binder>, Box<Expr>),
    Arrow(Box<Expr>, Box<Expr>),
    Lam(Vec<Binder>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Fix(Box<RecExpr>),
    Cofix(Box<RecExpr>),
    Sum(Box<Expr>, Box<Expr>),
    Times(Box<Expr>, Box<Expr>),
    /// `Σ (x : A). B`
    DepSum(Box<Binder>, Box<Expr>),
    SigmaF(Box<SigmaAnnot>),
    Pair(Box<Expr>, Box<Expr>, Option<Box<SigmaAnnot>>),
    Inl(Box<Expr>),
    Inr(Box<Expr>),
    Forced(Box<Expr>),
    Unit,
    UnitVal,
    Empty,
    Match(Box<MatchExpr>),
    Mu(String, Box<Expr>, Box<Expr>),
    Nu(String, Box<Expr>, Box<Expr>),
    Coerce(Coercion, Box<Expr>),
    Intro(Coercion, Box<Expr>),
    Ascribe(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn arrow(a: Expr, b: Expr) -> Expr {
        Expr::Arrow(Box::new(a), Box::new(b))
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Expr::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Does the free name `x` occur in this expression?
    pub fn mentions(&self, x: &str) -> bool {
        let binds = |bs: &[Binder], body: &Expr| {
            for b in bs {
                if b.ty.mentions(x) {
                    return true;
                }
                if b.name == x {
                    return false;
                }
            }
            body.mentions(x)
        };
        let under = |name: &str, e: &Expr| name != x && e.mentions(x);
        match self {
            Expr::Sort(_) | Expr::Unit | Expr::UnitVal | Expr::Empty => false,
            Expr::Var(y) => y == x,
            Expr::Pi(bs, body) | Expr::Lam(bs, body) => binds(bs, body),
            Expr::Arrow(a, b)
            | Expr::App(a, b)
            | Expr::Sum(a, b)
            | Expr::Times(a, b)
            | Expr::Ascribe(a, b) => a.mentions(x) || b.mentions(x),
            Expr::Fix(r) | Expr::Cofix(r) => {
                for b in &r.params {
                    if b.ty.mentions(x) {
                        return true;
                    }
                    if b.name == x {
                        return false;
                    }
                }
                r.ret.mentions(x) || (r.name != x && r.body.mentions(x))
            }
            Expr::DepSum(b, body) => b.ty.mentions(x) || under(&b.name, body),
            Expr::SigmaF(s) => sigma_mentions(s, x),
            Expr::Pair(a, b, s) => {
                a.mentions(x) || b.mentions(x) || s.as_ref().is_some_and(|s| sigma_mentions(s, x))
            }
            Expr::Inl(a) | Expr::Inr(a) | Expr::Forced(a) | Expr::Coerce(_, a) | Expr::Intro(_, a) => {
                a.mentions(x)
            }
            Expr::Mu(n, k, body) | Expr::Nu(n, k, body) => k.mentions(x) || under(n, body),
            Expr::Match(m) => {
                if m.scrut.mentions(x) {
                    return true;
                }
                let ret_bound = m.as_name.as_deref() == Some(x) || m.in_name.as_deref() == Some(x);
                if !ret_bound && m.ret.mentions(x) {
                    return true;
                }
                m.arms.iter().any(|(p, e)| !pattern_binds(p, x) && e.mentions(x))
            }
        }
    }
}

fn sigma_mentions(s: &SigmaAnnot, x: &str) -> bool {
    s.codomain.mentions(x)
        || s.binder.ty.mentions(x)
        || (s.binder.name != x && (s.index.mentions(x) || s.body.mentions(x)))
}

fn pattern_binds(p: &Pattern, x: &str) -> bool {
    match p {
        Pattern::Inl(y) | Pattern::Inr(y) | Pattern::Forced(y) | Pattern::Intro(_, y) => y == x,
        Pattern::Pair(i, j) => i == x || j == x,
        Pattern::Unit => false,
    }
}

/// One member of an `inductive ... with ...` block.
#[derive(Clone, Debug, PartialEq)]
pub struct InductiveDecl {
    pub name: String,
    pub params: Vec<Binder>,
    /// `indices -> sort`, or just a sort.
    pub arity: Expr,
    pub constructors: Vec<(String, Expr)>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Def { name: String, ty: Option<Expr>, body: Expr, line: usize },
    Inductive(Vec<InductiveDecl>),
    Flag { name: String, on: bool, line: usize },
    Require { path: String, line: usize },
}
