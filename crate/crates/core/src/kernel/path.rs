use std::fmt;

use super::term::Term;

/// Location of a subterm, as the list of child labels leading to it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermPath(pub Vec<&'static str>);

impl TermPath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn child(&self, label: &'static str) -> Self {
        let mut p = self.clone();
        p.0.push(label);
        p
    }

    /// `self` followed by `rest`.
    pub fn join(&self, rest: &TermPath) -> Self {
        let mut p = self.clone();
        p.0.extend_from_slice(&rest.0);
        p
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<root>");
        }
        f.write_str(&self.0.join("/"))
    }
}

impl Term {
    /// Like `for_each_child`, also passing a label naming the position.
    pub fn for_each_labeled_child(&self, mut f: impl FnMut(&'static str, &Term, usize)) {
        let labels: &[&'static str] = match self {
            Term::Pi(..) => &["domain", "codomain"],
            Term::Lam(..) => &["domain", "body"],
            Term::App(..) => &["function", "argument"],
            Term::Sum(..) => &["left", "right"],
            Term::Inl(_) | Term::Inr(_) | Term::Forced(_) | Term::Coerce(..) | Term::CoerceIntro(..) => {
                &["argument"]
            }
            Term::MatchSum(_) => &["scrutinee", "motive", "inl-branch", "inr-branch"],
            Term::MatchUnit(_) | Term::MatchNu(_) | Term::MatchSigma(_) | Term::MatchCoerce(..) => {
                &["scrutinee", "motive", "branch"]
            }
            Term::MatchEmpty(..) => &["scrutinee", "motive"],
            Term::Mu(_) | Term::Nu(_) => &["index", "body"],
            Term::SigmaF(_) => &["domain", "fiber", "index-function", "codomain"],
            Term::PairF(_) => &["first", "second", "domain", "fiber", "index-function", "codomain"],
            Term::Ascribe(..) => &["term", "type"],
            _ => &[],
        };
        let fixed_tail: usize = match self {
            Term::Fix(r, _) | Term::Cofix(r) => r.params.len(),
            _ => 0,
        };
        let mut i = 0;
        self.for_each_child(|c, k| {
            let label = match self {
                Term::Fix(..) | Term::Cofix(..) if i < fixed_tail => "parameter",
                Term::Fix(..) | Term::Cofix(..) if i == fixed_tail => "return-type",
                Term::Fix(..) | Term::Cofix(..) => "body",
                _ => labels[i],
            };
            i += 1;
            f(label, c, k);
        });
    }
}
