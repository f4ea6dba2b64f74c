//! Printing a term and parsing it back gives the same term.

use algcic::kernel::{
    alpha_eq, Branch, Coercion, Family, MatchOne, MatchSigma, MatchSum, MatchUnit, Motive, Pair, RecDef, SigmaF,
    Sort, Term,
};
use algcic::surface::{desugar_in, parse_expr, pretty_in};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum S {
    Var(usize),
    Def(usize),
    Sort(usize),
    Unit,
    UnitVal,
    Empty,
    Un(usize, Box<S>),
    Bin(usize, Box<S>, Box<S>),
    Bind(usize, usize, Box<S>, Box<S>),
    Three(usize, usize, Box<S>, Box<S>, Box<S>),
    Four(usize, Box<S>, Box<S>, Box<S>, Box<S>),
    Rec(bool, usize, Vec<S>, Box<S>, Box<S>),
}

const NAMES: [&str; 4] = ["x", "y", "Nat", "f"];
const DEFS: [&str; 3] = ["Nat", "add", "x"];

fn shape() -> impl Strategy<Value = S> {
    let leaf = prop_oneof![
        4 => (0usize..5).prop_map(S::Var),
        1 => (0usize..3).prop_map(S::Def),
        1 => (0usize..4).prop_map(S::Sort),
        1 => Just(S::Unit),
        1 => Just(S::UnitVal),
        1 => Just(S::Empty),
    ];
    leaf.prop_recursive(4, 40, 4, |inner| {
        let b = || inner.clone().prop_map(Box::new);
        prop_oneof![
            (0usize..9, b()).prop_map(|(k, a)| S::Un(k, a)),
            (0usize..4, b(), b()).prop_map(|(k, a, c)| S::Bin(k, a, c)),
            (0usize..9, 0usize..4, b(), b()).prop_map(|(k, n, a, c)| S::Bind(k, n, a, c)),
            (0usize..3, 0usize..4, b(), b(), b()).prop_map(|(k, n, a, c, d)| S::Three(k, n, a, c, d)),
            (0usize..2, b(), b(), b(), b()).prop_map(|(k, a, c, d, e)| S::Four(k, a, c, d, e)),
            (any::<bool>(), 0usize..3, prop::collection::vec(inner.clone(), 0..3), b(), b())
                .prop_map(|(fix, k, ps, r, body)| S::Rec(fix, k, ps, r, body)),
        ]
    })
}

const COERCIONS: [Coercion; 4] = [Coercion::Brace, Coercion::Bracket, Coercion::SetBrace, Coercion::SetBracket];

fn motive(n: usize, body: Term) -> Motive {
    Motive { binder: NAMES[n % NAMES.len()].into(), body }
}

fn branch(n: usize, body: Term) -> Branch {
    Branch { binder: NAMES[(n + 1) % NAMES.len()].into(), body }
}

fn build(s: &S, scope: usize) -> Term {
    let b = |t: &S, extra: usize| build(t, scope + extra);
    let name = |n: usize| NAMES[n % NAMES.len()];
    match s {
        S::Var(_) if scope == 0 => Term::UnitVal,
        S::Var(i) => Term::Var(i % scope),
        S::Def(i) => Term::def(DEFS[*i]),
        S::Sort(i) => Term::Sort([Sort::Type, Sort::Box, Sort::Prop, Sort::Set][*i]),
        S::Unit => Term::Unit,
        S::UnitVal => Term::UnitVal,
        S::Empty => Term::Empty,
        S::Un(k, a) => {
            let a = b(a, 0);
            match k {
                0 => Term::inl(a),
                1 => Term::inr(a),
                2 => Term::forced(a),
                3..=6 => Term::coerce(COERCIONS[k - 3], a),
                _ => Term::coerce_intro(COERCIONS[k % 4], a),
            }
        }
        S::Bin(k, a, c) => match k {
            0 => Term::app(b(a, 0), b(c, 0)),
            1 => Term::sum(b(a, 0), b(c, 0)),
            2 => Term::pair(b(a, 0), b(c, 0), None),
            _ => Term::MatchEmpty(Box::new(b(a, 0)), Box::new(b(c, 0))),
        },
        S::Bind(k, n, a, c) => match k {
            0 => Term::lam(name(*n), b(a, 0), b(c, 1)),
            1 => Term::pi(name(*n), b(a, 0), b(c, 1)),
            2 => Term::mu(name(*n), b(a, 0), Sort::Type, b(c, 1)),
            3 => Term::nu(name(*n), b(a, 0), Sort::Prop, b(c, 1)),
            4 => Term::MatchUnit(Box::new(MatchUnit { scrut: b(a, 0), motive: motive(*n, b(c, 1)), branch: b(a, 0) })),
            5 => Term::MatchNu(Box::new(MatchOne { scrut: b(a, 0), motive: motive(*n, b(c, 1)), branch: branch(*n, b(c, 1)) })),
            6..=7 => Term::MatchCoerce(
                COERCIONS[k - 6 + 2 * (n % 2)],
                Box::new(MatchOne { scrut: b(a, 0), motive: motive(*n, b(c, 1)), branch: branch(*n, b(a, 1)) }),
            ),
            _ => Term::ascribe(b(a, 0), b(c, 0)),
        },
        S::Three(k, n, a, c, d) => match k {
            0 => Term::MatchSum(Box::new(MatchSum {
                scrut: b(a, 0),
                motive: motive(*n, b(c, 1)),
                left: branch(*n, b(d, 1)),
                right: branch(n + 1, b(c, 1)),
            })),
            1 => Term::MatchSigma(Box::new(MatchSigma {
                scrut: b(a, 0),
                as_name: name(*n).into(),
                in_name: name(n + 1).into(),
                motive: b(c, 2),
                fst_name: name(n + 2).into(),
                snd_name: name(*n).into(),
                branch: b(d, 2),
            })),
            _ => Term::sigma_f(sigma(*n, a, c, d, scope)),
        },
        S::Four(k, a, c, d, e) => {
            let sig = sigma(*k, a, c, d, scope);
            match k {
                0 => Term::pair(b(e, 0), b(a, 0), Some(sig)),
                _ => Term::app(Term::sigma_f(sig), b(e, 0)),
            }
        }
        S::Rec(fix, k, ps, r, body) => {
            let params: Vec<_> =
                ps.iter().enumerate().map(|(i, p)| (name(i + k).to_string(), b(p, i))).collect();
            let n = params.len();
            let def = RecDef { name: "g".into(), params, ret: b(r, n), body: b(body, n + 1) };
            if *fix && n > 0 {
                Term::Fix(Box::new(def), k % n)
            } else {
                Term::Cofix(Box::new(def))
            }
        }
    }
}

fn sigma(n: usize, a: &S, c: &S, d: &S, scope: usize) -> SigmaF {
    SigmaF {
        binder: NAMES[n % NAMES.len()].into(),
        domain: build(a, scope),
        fiber: build(c, scope + 1),
        index_fn: build(d, scope + 1),
        codomain: build(c, scope),
    }
}

const CONTEXT: [&str; 3] = ["a", "b", "c"];

fn roundtrip(t: &Term) -> Result<(), TestCaseError> {
    let text = pretty_in(t, &CONTEXT);
    let parsed = parse_expr(&text).map_err(|e| TestCaseError::fail(format!("{text}\n{e}")))?;
    let names: Vec<String> = CONTEXT.iter().map(|s| s.to_string()).collect();
    let back = desugar_in(&parsed, &names).map_err(|e| TestCaseError::fail(format!("{text}\n{}", e.0)))?;
    prop_assert!(alpha_eq(t, &back), "{}\n{:?}\n{:?}", text, t, back);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pretty_then_parse_is_identity(s in shape()) {
        roundtrip(&build(&s, CONTEXT.len()))?;
    }
}

#[test]
fn family_and_pair_examples() {
    let nat = Term::mu("X", Term::Unit, Sort::Type, Term::lam("_", Term::Unit, Term::sum(Term::Unit, Term::app(Term::Var(1), Term::UnitVal))));
    roundtrip(&nat).unwrap();
    let fam = Family { name: "S".into(), index: Term::Unit, sort: Sort::Set, body: Term::Var(0) };
    roundtrip(&Term::Nu(Box::new(fam))).unwrap();
    let p = Pair { fst: Term::UnitVal, snd: Term::inl(Term::UnitVal), annot: None };
    roundtrip(&Term::PairF(Box::new(p))).unwrap();
}

#[test]
fn every_prelude_definition_roundtrips() {
    let mut session = algcic::session::Session::default();
    algcic::prelude::load_prelude(&mut session).unwrap();
    for (name, def) in session.env().iter() {
        for t in [&def.ty, &def.body] {
            let text = algcic::surface::pretty(t);
            let back = parse_expr(&text).map_err(|e| e.to_string()).and_then(|e| desugar_in(&e, &[]).map_err(|e| e.0));
            match back {
                Ok(back) => assert!(alpha_eq(t, &back), "{name}: {text}"),
                Err(e) => panic!("{name}: {text}\n{e}"),
            }
        }
    }
}
