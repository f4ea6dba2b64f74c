//! Strict positivity of a family variable in the body of `μ` or `ν`.

use crate::kernel::*;
use crate::reduce::{ReduceError, Reducer};

/// Whether `Var(x)` occurs only strictly positively in `t`.
///
/// Terms are put in weak-head normal form before each rule is tried, so
/// global definitions such as `List` are unfolded and applied to the family
/// variable before their body is inspected.
pub fn strictly_positive(red: &Reducer, x: usize, t: &Term) -> Result<bool, ReduceError> {
    if !t.has_free(x) {
        return Ok(true);
    }
    let t = red.whnf(t)?;
    if !t.has_free(x) {
        return Ok(true);
    }
    let fresh = |u: &Term, depth: usize| !u.has_free(x + depth);
    Ok(match &t {
        Term::Var(i) => *i == x,
        Term::Pi(_, dom, cod) => fresh(dom, 0) && strictly_positive(red, x + 1, cod)?,
        Term::Sum(a, b) => strictly_positive(red, x, a)? && strictly_positive(red, x, b)?,
        Term::Mu(f) | Term::Nu(f) => fresh(&f.index, 0) && strictly_positive(red, x + 1, &f.body)?,
        Term::Lam(_, dom, body) => fresh(dom, 0) && strictly_positive(red, x + 1, body)?,
        Term::App(..) => {
            let (head, args) = t.spine();
            args.iter().all(|a| fresh(a, 0)) && strictly_positive(red, x, head)?
        }
        Term::SigmaF(s) => {
            fresh(&s.index_fn, 1)
                && fresh(&s.codomain, 0)
                && strictly_positive(red, x, &s.domain)?
                && strictly_positive(red, x + 1, &s.fiber)?
        }
        Term::Coerce(_, a) => strictly_positive(red, x, a)?,
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(t: &Term) -> bool {
        let env = GlobalEnv::new();
        strictly_positive(&Reducer::new(&env), 0, t).unwrap()
    }

    #[test]
    fn sum_of_unit_and_variable() {
        assert!(sp(&Term::sum(Term::Unit, Term::Var(0))));
    }

    #[test]
    fn variable_left_of_arrow() {
        assert!(!sp(&Term::pi("_", Term::Var(0), Term::Empty)));
    }

    #[test]
    fn variable_right_of_arrow() {
        assert!(sp(&Term::pi("_", Term::Unit, Term::Var(1))));
    }

    #[test]
    fn variable_in_argument_position() {
        assert!(!sp(&Term::app(Term::Var(1), Term::Var(0))));
        assert!(sp(&Term::app(Term::Var(0), Term::Var(1))));
    }

    #[test]
    fn beta_redex_is_reduced_first() {
        // (λY:Type. 1 + Y) X
        let f = Term::lam("Y", Term::Sort(Sort::Type), Term::sum(Term::Unit, Term::Var(0)));
        assert!(sp(&Term::app(f, Term::Var(0))));
    }

    #[test]
    fn occurrence_inside_match_is_rejected() {
        let m = Term::MatchEmpty(Box::new(Term::Var(1)), Box::new(Term::Var(0)));
        assert!(!sp(&m));
    }
}
