//! Worked examples for reduction, conversion, positivity, guards and typing.

mod support;

use algcic::conversion;
use algcic::guard::{check_cofix, check_fix};
use algcic::kernel::{Context, GlobalEnv, RecDef, Sort, Term};
use algcic::positivity::strictly_positive;
use algcic::reduce::{RedexKind, Reducer};
use algcic::session::Session;
use algcic::surface::{desugar_in, parse_expr};
use algcic::typing::{self, axiom_sort, product_sort, Flags, TypeErrorKind};
use proptest::prelude::*;

fn term(src: &str) -> Term {
    term_in(src, &[])
}

fn term_in(src: &str, names: &[&str]) -> Term {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    desugar_in(&parse_expr(src).unwrap(), &names).unwrap()
}

fn prelude() -> Session {
    let mut s = Session::default();
    algcic::prelude::load_prelude(&mut s).unwrap();
    s
}

fn numeral(n: usize) -> Term {
    (0..n).fold(Term::inl(Term::UnitVal), |t, _| Term::inr(t))
}

fn source(src: &str) -> Result<Session, String> {
    let mut s = Session::default();
    s.load_str(src, "test", Some(&support::corpus().join("prelude")), &mut Vec::new()).map_err(|e| e.kind_name().to_string())?;
    Ok(s)
}

// Sorts.

/// The axiom and product tables written out case by case.
fn product_oracle(s1: Sort, s2: Sort, impredicative_set: bool) -> Option<Sort> {
    use Sort::*;
    let rank = |s| match s {
        Type => 0,
        Box => 1,
        _ => unreachable!(),
    };
    match (s1, s2) {
        (Type | Box, Type | Box) => Some(if rank(s1).max(rank(s2)) == 1 { Box } else { Type }),
        (_, Prop) => Some(Prop),
        (Set, Set) => Some(Set),
        (Type | Box | Prop, Set) if impredicative_set => Some(Set),
        _ => None,
    }
}

#[test]
fn axioms() {
    assert_eq!(axiom_sort(Sort::Type), Ok(Sort::Box));
    assert_eq!(axiom_sort(Sort::Prop), Ok(Sort::Type));
    assert_eq!(axiom_sort(Sort::Set), Ok(Sort::Type));
    assert!(matches!(axiom_sort(Sort::Box), Err(TypeErrorKind::NoAxiom(Sort::Box))));
}

#[test]
fn product_table_matches_oracle() {
    let sorts = [Sort::Type, Sort::Box, Sort::Prop, Sort::Set];
    for imp in [false, true] {
        let flags = Flags { impredicative_set: imp, ..Flags::default() };
        for s1 in sorts {
            for s2 in sorts {
                let got = product_sort(s1, s2, &flags).ok();
                assert_eq!(got, product_oracle(s1, s2, imp), "({s1:?}, {s2:?}) impredicative={imp}");
            }
        }
    }
    let flags = Flags::default();
    assert_eq!(product_sort(Sort::Type, Sort::Box, &flags), Ok(Sort::Box));
    assert_eq!(product_sort(Sort::Box, Sort::Prop, &flags), Ok(Sort::Prop));
    assert!(matches!(product_sort(Sort::Prop, Sort::Type, &flags), Err(TypeErrorKind::NoProductRule(..))));
    assert!(matches!(product_sort(Sort::Type, Sort::Set, &flags), Err(TypeErrorKind::NoProductRule(..))));
}

// Substitution.

#[test]
fn shifting_and_unrolling() {
    let t = Term::lam("x", Term::Unit, Term::Var(1));
    assert_eq!(t.shift(2, 0), Term::lam("x", Term::Unit, Term::Var(3)));

    let nat = term("mu N : Type. 1 + N");
    let (f, _) = nat.spine();
    let Term::Mu(fam) = f else { panic!("{nat:?}") };
    let unrolled = fam.body.subst(0, f);
    assert!(conversion::convertible(&GlobalEnv::new(), f, &unrolled, true).unwrap());
}

// Reduction.

#[test]
fn single_steps() {
    let env = GlobalEnv::new();
    let red = Reducer::new(&env);
    let beta = Term::app(Term::lam("x", Term::Unit, Term::Var(0)), Term::UnitVal);
    assert_eq!(red.step(&beta), Some((Term::UnitVal, RedexKind::Beta)));

    let m = term_in("match inl () return 1 with | inl y => y | inr z => () end", &[]);
    assert_eq!(red.step(&m), Some((Term::UnitVal, RedexKind::IotaSum)));
}

#[test]
fn fixpoint_unfolds_on_a_constructor() {
    let s = prelude();
    let red = Reducer::new(s.env());
    let body = red.whnf(&Term::def("add")).unwrap();
    let t = Term::apps(body, [numeral(1), numeral(0)]);
    let mut cur = t;
    let mut kinds = Vec::new();
    while let Some((next, kind)) = red.step(&cur) {
        kinds.push(kind);
        cur = next;
        if kind == RedexKind::FixUnfold {
            break;
        }
    }
    assert_eq!(kinds.last(), Some(&RedexKind::FixUnfold));
    assert_eq!(red.normalize(&cur).unwrap(), numeral(1));
}

#[test]
fn delta_and_cofix_steps() {
    let s = prelude();
    let red = Reducer::new(s.env());
    assert_eq!(red.whnf(&Term::def("true")).unwrap(), Term::inl(Term::UnitVal));

    let m = term("match i return T with forced y => y end");
    let mut cur = m;
    let mut kinds = Vec::new();
    while let Some((next, kind)) = red.step(&cur) {
        kinds.push(kind);
        cur = next;
        if kind == RedexKind::IotaNu {
            break;
        }
    }
    let pos = kinds.iter().position(|k| *k == RedexKind::CofixUnderMatch).unwrap();
    assert_eq!(kinds[pos + 1..], [RedexKind::IotaNu]);
    assert!(matches!(cur, Term::Cofix(_)), "{cur:?}");
}

#[test]
fn normal_forms() {
    let s = prelude();
    let red = Reducer::new(s.env());
    let five = red.normalize(&Term::apps(Term::def("add"), [numeral(2), numeral(3)])).unwrap();
    assert_eq!(five, numeral(5));

    let refl = red.normalize(&term("eq_refl 1 ()")).unwrap();
    let Term::PairF(p) = refl else { panic!("{refl:?}") };
    assert_eq!((p.fst, p.snd), (Term::UnitVal, Term::UnitVal));
}

#[test]
fn fuel_bounds_reduction() {
    let s = prelude();
    let red = Reducer::with_fuel(s.env(), 10);
    assert!(red.normalize(&Term::apps(Term::def("add"), [numeral(8), numeral(8)])).is_err());
}

// Conversion.

#[test]
fn conversion_examples() {
    let s = prelude();
    let env = s.env();
    let i = Term::def("i");
    assert!(!conversion::convertible(env, &i, &Term::forced(i.clone()), true).unwrap());
    assert!(conversion::convertible(env, &term("Even"), &term("EvenOdd true"), true).unwrap());
    assert!(conversion::convertible(env, &term("add two three"), &term("five"), true).unwrap());
    assert!(!conversion::convertible(env, &term("two"), &term("three"), true).unwrap());
}

// Positivity.

fn sp(s: &Session, src: &str) -> bool {
    let red = Reducer::new(s.env());
    strictly_positive(&red, 0, &term_in(src, &["X"])).unwrap()
}

#[test]
fn positivity_examples() {
    let s = prelude();
    assert!(sp(&s, "1 + X"));
    assert!(!sp(&s, "X -> 0"));
    assert!(sp(&s, "List X"), "List must be unfolded and beta-reduced");
    assert!(sp(&s, "1 -> X"));
    assert!(sp(&s, "{X}"));
    assert!(!sp(&s, "forall (P : Prop), ({X -> P} -> P) -> P"));
    assert!(sp(&s, "match () return Type with () => X end"), "reduces to X");
    assert!(!sp(&s, "fun (u : 1) => match u return Type with () => X end"));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn absent_variable_is_strictly_positive(shape in support::shape()) {
        let env = GlobalEnv::new();
        let red = Reducer::with_fuel(&env, 10_000);
        // Built in a two-variable scope, then shifted past Var(0).
        let t = support::build(&shape, 2).shift(1, 0);
        prop_assume!(!t.has_free(0));
        prop_assert!(strictly_positive(&red, 0, &t).unwrap_or(true));
    }
}

#[test]
fn positivity_is_stable_under_beta_expansion() {
    let s = prelude();
    let red = Reducer::new(s.env());
    for (_, def) in s.env().iter() {
        let nf = red.normalize(&def.body).unwrap();
        let mut fams = Vec::new();
        collect(&nf, &mut fams);
        for body in fams {
            // (fun (z : 1) => body) () with body shifted under z
            let expanded = Term::app(Term::lam("z", Term::Unit, body.shift(1, 0)), Term::UnitVal);
            assert_eq!(
                strictly_positive(&red, 0, &body).unwrap(),
                strictly_positive(&red, 0, &expanded).unwrap()
            );
        }
    }
}

fn collect(t: &Term, out: &mut Vec<Term>) {
    if let Term::Mu(f) | Term::Nu(f) = t {
        out.push(f.body.clone());
    }
    t.for_each_child(|c, _| collect(c, out));
}

// Guards.

fn rec(src: &str) -> (RecDef, Option<usize>) {
    match term(src) {
        Term::Fix(r, k) => (*r, Some(k)),
        Term::Cofix(r) => (*r, None),
        other => panic!("{other:?}"),
    }
}

#[test]
fn guard_examples() {
    let add = "fix add (x : 1) (y : mu N : Type. 1 + N) : 1 => \
               match y return 1 with | inl u => x | inr y1 => add x y1 end";
    let (r, k) = rec(add);
    assert!(check_fix(&r, k.unwrap()).is_ok());

    let (r, k) = rec("fix f (x : mu N : Type. 1 + N) : 1 => f x");
    assert!(check_fix(&r, k.unwrap()).is_err());

    let (r, _) = rec("cofix i : nu X : Type. X => forced i");
    assert!(check_cofix(&r).is_ok());

    let (r, _) = rec("cofix f : nu X : Type. X => f");
    assert!(check_cofix(&r).is_err());

    let (r, _) = rec("cofix f : nu X : Type. X => match f return nu X : Type. X with forced y => forced y end");
    assert!(check_cofix(&r).is_err());
}

// Typing.

fn infer(s: &Session, src: &str) -> Result<Term, TypeErrorKind> {
    typing::infer(s.env(), &Context::new(), s.flags(), &term(src)).map_err(|e| e.kind)
}

fn has_type(s: &Session, src: &str, ty: &str) -> bool {
    let got = infer(s, src).unwrap();
    conversion::convertible(s.env(), &got, &term(ty), true).unwrap()
}

#[test]
fn inferred_types() {
    let s = prelude();
    assert!(has_type(&s, "add", "Nat -> Nat -> Nat"));
    assert!(has_type(&s, "eo", "EvenOdd true"));
    assert!(has_type(&s, "Acc", "forall (A : Type), (A -> A -> Type) -> A -> Type"));
    assert!(has_type(&s, "Type", "Box"));
    assert!(matches!(infer(&s, "Box"), Err(TypeErrorKind::NoAxiom(_))));
    assert!(matches!(infer(&s, "inl ()"), Err(TypeErrorKind::ConstructorNeedsAnnotation(_))));
    assert!(has_type(&s, "(inl () : Bool)", "Bool"));
}

#[test]
fn bracket_elimination_is_restricted_to_prop() {
    let s = prelude();
    let ctx = {
        let mut c = Context::new();
        c.push("A", Term::sort(Sort::Prop));
        c.push("B", Term::sort(Sort::Prop));
        c.push("h", term_in("Or A B", &["A", "B"]));
        c
    };
    let into_bool = term_in(
        "match h return Bool with <z> => match z return Bool with | inl a => true | inr b => false end end",
        &["A", "B", "h"],
    );
    let err = typing::infer(s.env(), &ctx, s.flags(), &into_bool).unwrap_err();
    assert!(matches!(err.kind, TypeErrorKind::EliminationRestricted { .. }), "{err}");

    let into_prop = term_in(
        "match h return Or B A with <z> => match z return Or B A with \
         | inl a => or_intror B A (match a return A with prf p => p end) \
         | inr b => or_introl B A (match b return B with prf q => q end) end end",
        &["A", "B", "h"],
    );
    typing::infer(s.env(), &ctx, s.flags(), &into_prop).unwrap();
}

#[test]
fn checking_against_known_types() {
    let s = prelude();
    let check = |t: &str, ty: &str| typing::check(s.env(), &Context::new(), s.flags(), &term(t), &term(ty));
    check("inl ()", "Bool").unwrap();
    check("cofix i : T => forced i", "T").unwrap();
    let err = check("()", "0").unwrap_err();
    assert!(matches!(err.kind, TypeErrorKind::NotConvertible { .. }));
}

#[test]
fn inferred_types_are_sorted_and_stable() {
    let s = prelude();
    let infer = |t: &Term| typing::infer(s.env(), &Context::new(), s.flags(), t);
    let mut inferred = 0;
    for (name, def) in s.env().iter() {
        let sort = Reducer::new(s.env()).whnf(&infer(&def.ty).unwrap()).unwrap();
        assert!(matches!(sort, Term::Sort(_)), "{name}: {sort:?}");
        // paradox.alg turns dependent co-inductive elimination on for itself.
        let flags = if name == "paradox" {
            Flags { cofix_elim: algcic::typing::CofixElim::Dependent, ..*s.flags() }
        } else {
            *s.flags()
        };
        typing::check(s.env(), &Context::new(), &flags, &def.body, &def.ty).unwrap();
        // Bodies headed by an introduction form only check.
        if name == "paradox" {
            continue;
        }
        if let Ok(first) = infer(&def.body) {
            let second = infer(&def.body).unwrap();
            assert!(conversion::convertible(s.env(), &first, &second, true).unwrap(), "{name}");
            inferred += 1;
        }
    }
    assert!(inferred * 2 > s.env().len(), "{inferred} of {}", s.env().len());
}

#[test]
fn formation_rules() {
    assert_eq!(source("def S : Prop := 1 + 1").err().as_deref(), Some("NoFormationRule"));
    assert_eq!(source("def N : Prop := nu X : Prop. X").err().as_deref(), Some("NoFormationRule"));
    assert!(source("def N : Prop := mu X : Prop. X -> X").is_err());
    assert!(source("def E : Prop := mu X : Prop. 1 + 0").is_err());
    assert!(source("def P : Prop := mu X : Prop. 1 * X").is_ok());
    assert!(source("def S : Set := 1 + 1").is_ok());
}

#[test]
fn programs_thread_the_environment() {
    assert_eq!(source("def a : 1 := b\ndef b : 1 := ()").err().as_deref(), Some("UnboundVariable"));
    assert_eq!(source("def a : 1 := ()\ndef a : 1 := ()").err().as_deref(), Some("DuplicateDefinition"));
    let s = source("def a : 1 := ()\ndef b : 1 := a").unwrap();
    assert_eq!(s.env().len(), 2);
    assert!(prelude().env().len() >= 20);
}
