//! The term algebra shared by every other part of the kernel.
//!
//! Bound variables are de Bruijn indices. Every binder keeps a display name
//! that is only consulted by the pretty-printer.

use std::fmt;

/// Display name of a binder or a global reference.
pub type Name = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Type,
    /// The sort of `Type`. It has no type of its own.
    Box,
    Prop,
    Set,
}

impl Sort {
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Type => "Type",
            Sort::Box => "Box",
            Sort::Prop => "Prop",
            Sort::Set => "Set",
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The four explicit coercions between sorts.
///
/// `Brace` takes a proposition to `Type`, `Bracket` a type to `Prop`,
/// `SetBrace` a `Set` to `Type` and `SetBracket` a type to `Set`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coercion {
    Brace,
    Bracket,
    SetBrace,
    SetBracket,
}

impl Coercion {
    pub const ALL: [Coercion; 4] = [
        Coercion::Brace,
        Coercion::Bracket,
        Coercion::SetBrace,
        Coercion::SetBracket,
    ];

    /// Sort the coerced type must live in.
    pub fn source(self) -> Sort {
        match self {
            Coercion::Brace => Sort::Prop,
            Coercion::Bracket | Coercion::SetBracket => Sort::Type,
            Coercion::SetBrace => Sort::Set,
        }
    }

    /// Sort of the coerced type.
    pub fn target(self) -> Sort {
        match self {
            Coercion::Brace | Coercion::SetBrace => Sort::Type,
            Coercion::Bracket => Sort::Prop,
            Coercion::SetBracket => Sort::Set,
        }
    }

    /// Sort the return predicate of the eliminator is confined to, if any.
    pub fn restricted_to(self) -> Option<Sort> {
        match self {
            Coercion::Brace | Coercion::SetBrace => None,
            Coercion::Bracket => Some(Sort::Prop),
            Coercion::SetBracket => Some(Sort::Set),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Coercion::Brace => "brace",
            Coercion::Bracket => "bracket",
            Coercion::SetBrace => "set-brace",
            Coercion::SetBracket => "set-bracket",
        }
    }
}

/// A fixed point (`fix` or `cofix`).
///
/// `params[i].1` lives under the `i` preceding parameters, `ret` under all
/// of them, and `body` under the self reference followed by all parameters,
/// so inside `body` the self reference is `Var(params.len())`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecDef {
    pub name: Name,
    pub params: Vec<(Name, Term)>,
    pub ret: Term,
    pub body: Term,
}

impl RecDef {
    /// The full type `Π params. ret`.
    pub fn telescope_type(&self) -> Term {
        self.params
            .iter()
            .rev()
            .fold(self.ret.clone(), |acc, (name, ty)| Term::pi(name, ty.clone(), acc))
    }
}

/// An inductive or co-inductive family `μX^{A→s}.F`; `body` binds `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub name: Name,
    pub index: Term,
    pub sort: Sort,
    pub body: Term,
}

impl Family {
    /// `index → sort`, the type of the family and of its bound variable.
    pub fn kind(&self) -> Term {
        Term::arrow(self.index.clone(), Term::Sort(self.sort))
    }
}

/// The properly indexed family `Σ^f_{x:A} T : B → s`.
/// `fiber` and `index_fn` bind `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaF {
    pub binder: Name,
    pub domain: Term,
    pub fiber: Term,
    pub index_fn: Term,
    pub codomain: Term,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pair {
    pub fst: Term,
    pub snd: Term,
    /// Absent when the pair is only ever checked against a known type.
    pub annot: Option<SigmaF>,
}

/// A return predicate binding the matched term.
#[derive(Clone, Debug, PartialEq)]
pub struct Motive {
    pub binder: Name,
    pub body: Term,
}

/// A branch binding one pattern variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub binder: Name,
    pub body: Term,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchSum {
    pub scrut: Term,
    pub motive: Motive,
    pub left: Branch,
    pub right: Branch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchUnit {
    pub scrut: Term,
    pub motive: Motive,
    pub branch: Term,
}

/// Matches with a single one-variable pattern: `forced y`, `prf y`, `<y>`, ...
#[derive(Clone, Debug, PartialEq)]
pub struct MatchOne {
    pub scrut: Term,
    pub motive: Motive,
    pub branch: Branch,
}

/// `match u as z in y return P with (i, j) => v`.
///
/// `motive` binds `y` then `z`; `branch` binds `i` then `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchSigma {
    pub scrut: Term,
    pub as_name: Name,
    pub in_name: Name,
    pub motive: Term,
    pub fst_name: Name,
    pub snd_name: Name,
    pub branch: Term,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Sort(Sort),
    Var(usize),
    Def(Name),
    Pi(Name, Box<Term>, Box<Term>),
    Lam(Name, Box<Term>, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// A recursive fixed point with the index of its structural parameter.
    Fix(Box<RecDef>, usize),
    Cofix(Box<RecDef>),
    Sum(Box<Term>, Box<Term>),
    Inl(Box<Term>),
    Inr(Box<Term>),
    MatchSum(Box<MatchSum>),
    Unit,
    UnitVal,
    MatchUnit(Box<MatchUnit>),
    Empty,
    /// `match u return A with end`.
    MatchEmpty(Box<Term>, Box<Term>),
    Mu(Box<Family>),
    Nu(Box<Family>),
    Forced(Box<Term>),
    MatchNu(Box<MatchOne>),
    SigmaF(Box<SigmaF>),
    PairF(Box<Pair>),
    MatchSigma(Box<MatchSigma>),
    Coerce(Coercion, Box<Term>),
    CoerceIntro(Coercion, Box<Term>),
    MatchCoerce(Coercion, Box<MatchOne>),
    Ascribe(Box<Term>, Box<Term>),
}

impl Term {
    pub fn sort(s: Sort) -> Term {
        Term::Sort(s)
    }

    pub fn def(name: impl Into<Name>) -> Term {
        Term::Def(name.into())
    }

    pub fn pi(name: impl Into<Name>, dom: Term, cod: Term) -> Term {
        Term::Pi(name.into(), Box::new(dom), Box::new(cod))
    }

    /// Non-dependent product; `cod` is given in the outer context.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::pi("_", dom, cod.shift(1, 0))
    }

    pub fn lam(name: impl Into<Name>, dom: Term, body: Term) -> Term {
        Term::Lam(name.into(), Box::new(dom), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn inl(t: Term) -> Term {
        Term::Inl(Box::new(t))
    }

    pub fn inr(t: Term) -> Term {
        Term::Inr(Box::new(t))
    }

    pub fn forced(t: Term) -> Term {
        Term::Forced(Box::new(t))
    }

    pub fn ascribe(t: Term, ty: Term) -> Term {
        Term::Ascribe(Box::new(t), Box::new(ty))
    }

    pub fn mu(name: impl Into<Name>, index: Term, sort: Sort, body: Term) -> Term {
        Term::Mu(Box::new(Family { name: name.into(), index, sort, body }))
    }

    pub fn nu(name: impl Into<Name>, index: Term, sort: Sort, body: Term) -> Term {
        Term::Nu(Box::new(Family { name: name.into(), index, sort, body }))
    }

    pub fn sigma_f(sigma: SigmaF) -> Term {
        Term::SigmaF(Box::new(sigma))
    }

    pub fn pair(fst: Term, snd: Term, annot: Option<SigmaF>) -> Term {
        Term::PairF(Box::new(Pair { fst, snd, annot }))
    }

    pub fn coerce(c: Coercion, t: Term) -> Term {
        Term::Coerce(c, Box::new(t))
    }

    pub fn coerce_intro(c: Coercion, t: Term) -> Term {
        Term::CoerceIntro(c, Box::new(t))
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Strips any number of ascriptions.
    pub fn unascribed(&self) -> &Term {
        let mut t = self;
        while let Term::Ascribe(inner, _) = t {
            t = inner;
        }
        t
    }

    /// Introduction forms only make sense against a known type.
    pub fn is_intro_form(&self) -> bool {
        matches!(
            self,
            Term::Inl(_) | Term::Inr(_) | Term::Forced(_) | Term::CoerceIntro(..)
        ) || matches!(self, Term::PairF(p) if p.annot.is_none())
    }

    /// Values that let a fixed point on a structural argument unfold.
    pub fn is_constructor_shaped(&self) -> bool {
        matches!(
            self,
            Term::Inl(_)
                | Term::Inr(_)
                | Term::UnitVal
                | Term::PairF(_)
                | Term::CoerceIntro(..)
                | Term::Forced(_)
        )
    }
}
