//! Recursive-descent parser producing [`Decl`]s and [`Expr`]s.

use crate::kernel::{Coercion, Sort};

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

pub fn parse_file(src: &str) -> Result<Vec<Decl>, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let mut decls = Vec::new();
    while !p.at_eof() {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let e = p.expr()?;
    if !p.at_eof() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn line(&self) -> usize {
        self.toks[self.pos].line
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            col: t.col,
            message: format!("unexpected {}", t.tok),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Keyword(x) if *x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{s}`")]))
        }
    }

    fn expect_kw(&mut self, k: &'static str) -> Result<(), ParseError> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{k}`")]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    /// An identifier or `_`.
    fn binder_name(&mut self) -> Result<String, ParseError> {
        if self.eat_sym("_") {
            return Ok("_".to_string());
        }
        match self.peek() {
            Tok::Ident(_) => self.ident(),
            _ => Err(self.unexpected(&["identifier", "`_`"])),
        }
    }

    fn decl(&mut self) -> Result<Decl, ParseError> {
        let line = self.line();
        match self.peek().clone() {
            Tok::Keyword("def") => {
                self.advance();
                let name = self.ident()?;
                let params = self.opt_binders()?;
                let ty = if self.eat_sym(":") { Some(self.expr()?) } else { None };
                self.expect_sym(":=")?;
                let body = self.expr()?;
                let (ty, body) = if params.is_empty() {
                    (ty, body)
                } else {
                    (
                        ty.map(|t| Expr::Pi(params.clone(), Box::new(t))),
                        Expr::Lam(params, Box::new(body)),
                    )
                };
                Ok(Decl::Def { name, ty, body, line })
            }
            Tok::Keyword("inductive") => {
                self.advance();
                let mut members = vec![self.inductive_member(line)?];
                while self.is_kw("with") {
                    let line = self.line();
                    self.advance();
                    members.push(self.inductive_member(line)?);
                }
                Ok(Decl::Inductive(members))
            }
            Tok::Pragma(p) if p == "flag" => {
                self.advance();
                let name = self.ident()?;
                let on = match self.peek() {
                    Tok::Ident(v) if v == "on" => true,
                    Tok::Ident(v) if v == "off" => false,
                    _ => return Err(self.unexpected(&["`on`", "`off`"])),
                };
                self.advance();
                Ok(Decl::Flag { name, on, line })
            }
            Tok::Pragma(p) if p == "require" => {
                self.advance();
                match self.advance() {
                    Tok::Str(path) => Ok(Decl::Require { path, line }),
                    _ => {
                        self.pos -= 1;
                        Err(self.unexpected(&["string"]))
                    }
                }
            }
            _ => Err(self.unexpected(&["`def`", "`inductive`", "`#flag`", "`#require`"])),
        }
    }

    fn inductive_member(&mut self, line: usize) -> Result<InductiveDecl, ParseError> {
        let name = self.ident()?;
        let params = self.opt_binders()?;
        self.expect_sym(":")?;
        let arity = self.expr()?;
        self.expect_sym(":=")?;
        let mut constructors = Vec::new();
        while self.eat_sym("|") {
            let c = self.ident()?;
            self.expect_sym(":")?;
            constructors.push((c, self.expr()?));
        }
        Ok(InductiveDecl { name, params, arity, constructors, line })
    }

    /// Zero or more parenthesised binder groups `(x y : A)`.
    fn opt_binders(&mut self) -> Result<Vec<Binder>, ParseError> {
        let mut out = Vec::new();
        while self.is_sym("(") {
            self.advance();
            out.extend(self.binder_group()?);
            self.expect_sym(")")?;
        }
        Ok(out)
    }

    /// `x y : A` without parentheses.
    fn binder_group(&mut self) -> Result<Vec<Binder>, ParseError> {
        let mut names = vec![self.binder_name()?];
        while !self.is_sym(":") {
            names.push(self.binder_name()?);
        }
        self.expect_sym(":")?;
        let ty = self.expr()?;
        Ok(names.into_iter().map(|name| Binder { name, ty: ty.clone() }).collect())
    }

    /// Parenthesised groups, or a single bare group.
    fn binders(&mut self) -> Result<Vec<Binder>, ParseError> {
        if self.is_sym("(") {
            self.opt_binders()
        } else {
            self.binder_group()
        }
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Keyword("fun") => {
                self.advance();
                let bs = self.binders()?;
                self.expect_sym("=>")?;
                Ok(Expr::Lam(bs, Box::new(self.expr()?)))
            }
            Tok::Keyword("forall") => {
                self.advance();
                let bs = self.binders()?;
                self.expect_sym(",")?;
                Ok(Expr::Pi(bs, Box::new(self.expr()?)))
            }
            Tok::Keyword(k @ ("mu" | "nu")) => {
                let is_mu = *k == "mu";
                self.advance();
                let name = self.binder_name()?;
                self.expect_sym(":")?;
                let kind = self.expr()?;
                self.expect_sym(".")?;
                let body = self.expr()?;
                Ok(if is_mu {
                    Expr::Mu(name, Box::new(kind), Box::new(body))
                } else {
                    Expr::Nu(name, Box::new(kind), Box::new(body))
                })
            }
            Tok::Keyword("Sigma") => {
                self.advance();
                if self.is_sym("^") {
                    return Ok(Expr::SigmaF(Box::new(self.sigma_annot()?)));
                }
                let b = self.single_binder()?;
                self.expect_sym(".")?;
                Ok(Expr::DepSum(Box::new(b), Box::new(self.expr()?)))
            }
            Tok::Keyword(k @ ("fix" | "cofix")) => {
                let is_fix = *k == "fix";
                self.advance();
                let name = self.ident()?;
                let params = self.opt_binders()?;
                let structural = if self.is_sym("{") {
                    self.advance();
                    self.expect_kw("struct")?;
                    let s = self.ident()?;
                    self.expect_sym("}")?;
                    Some(s)
                } else {
                    None
                };
                self.expect_sym(":")?;
                let ret = self.expr()?;
                self.expect_sym("=>")?;
                let body = self.expr()?;
                let r = Box::new(RecExpr { name, params, structural, ret, body });
                Ok(if is_fix { Expr::Fix(r) } else { Expr::Cofix(r) })
            }
            _ => self.arrow(),
        }
    }

    fn single_binder(&mut self) -> Result<Binder, ParseError> {
        let paren = self.eat_sym("(");
        let name = self.binder_name()?;
        self.expect_sym(":")?;
        let ty = self.expr()?;
        if paren {
            self.expect_sym(")")?;
        }
        Ok(Binder { name, ty })
    }

    /// `^(f : B) (x : A). T`
    fn sigma_annot(&mut self) -> Result<SigmaAnnot, ParseError> {
        self.expect_sym("^")?;
        self.expect_sym("(")?;
        let index = self.expr()?;
        self.expect_sym(":")?;
        let codomain = self.expr()?;
        self.expect_sym(")")?;
        let binder = self.single_binder()?;
        self.expect_sym(".")?;
        let body = self.expr()?;
        Ok(SigmaAnnot { index, codomain, binder: Box::new(binder), body })
    }

    fn arrow(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.plus()?;
        if self.eat_sym("->") {
            return Ok(Expr::arrow(lhs, self.expr()?));
        }
        Ok(lhs)
    }

    fn plus(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.times()?;
        if self.eat_sym("+") {
            return Ok(Expr::Sum(Box::new(lhs), Box::new(self.plus()?)));
        }
        Ok(lhs)
    }

    fn times(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.app()?;
        if self.eat_sym("*") {
            return Ok(Expr::Times(Box::new(lhs), Box::new(self.times()?)));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) | Tok::Num(_) => true,
            Tok::Keyword(k) => matches!(*k, "Type" | "Prop" | "Set" | "Box" | "match"),
            Tok::Sym(s) => matches!(*s, "(" | "{" | "[" | "<"),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let mut head = match self.peek() {
            Tok::Keyword(k @ ("inl" | "inr" | "forced" | "prf" | "elt")) => {
                let k = *k;
                self.advance();
                let arg = Box::new(self.atom()?);
                match k {
                    "inl" => Expr::Inl(arg),
                    "inr" => Expr::Inr(arg),
                    "forced" => Expr::Forced(arg),
                    "prf" => Expr::Intro(Coercion::Brace, arg),
                    _ => Expr::Intro(Coercion::SetBrace, arg),
                }
            }
            _ => self.atom()?,
        };
        while self.starts_atom() {
            head = Expr::app(head, self.atom()?);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Ident(s) => {
                self.advance();
                Ok(Expr::Var(s))
            }
            Tok::Num(0) => {
                self.advance();
                Ok(Expr::Empty)
            }
            Tok::Num(1) => {
                self.advance();
                Ok(Expr::Unit)
            }
            Tok::Keyword(k @ ("Type" | "Prop" | "Set" | "Box")) => {
                self.advance();
                Ok(Expr::Sort(match k {
                    "Type" => Sort::Type,
                    "Prop" => Sort::Prop,
                    "Set" => Sort::Set,
                    _ => Sort::Box,
                }))
            }
            Tok::Keyword("match") => self.match_expr(),
            Tok::Sym("(") => {
                self.advance();
                if self.eat_sym(")") {
                    return Ok(Expr::UnitVal);
                }
                let e = self.expr()?;
                if self.eat_sym(")") {
                    return Ok(e);
                }
                if self.eat_sym(":") {
                    let ty = self.expr()?;
                    self.expect_sym(")")?;
                    return Ok(Expr::Ascribe(Box::new(e), Box::new(ty)));
                }
                if self.eat_sym(",") {
                    let v = self.expr()?;
                    self.expect_sym(")")?;
                    let annot = if self.is_sym("^") { Some(Box::new(self.sigma_annot()?)) } else { None };
                    return Ok(Expr::Pair(Box::new(e), Box::new(v), annot));
                }
                Err(self.unexpected(&["`)`", "`:`", "`,`"]))
            }
            Tok::Sym(open @ ("{" | "[" | "<")) => {
                self.advance();
                let e = self.expr()?;
                let close = match open {
                    "{" => "}",
                    "[" => "]",
                    _ => ">",
                };
                self.expect_sym(close)?;
                let set = self.eat_kw("set");
                let c = match (open, set) {
                    ("{", false) => Coercion::Brace,
                    ("{", true) => Coercion::SetBrace,
                    (_, false) => Coercion::Bracket,
                    (_, true) => Coercion::SetBracket,
                };
                Ok(if open == "<" {
                    Expr::Intro(c, Box::new(e))
                } else {
                    Expr::Coerce(c, Box::new(e))
                })
            }
            Tok::Num(n) => Err(ParseError::at(
                self.toks[self.pos].line,
                self.toks[self.pos].col,
                format!("numeral `{n}` is not a type; only `0` and `1` are"),
            )),
            _ => Err(self.unexpected(&["expression"])),
        }
    }

    fn match_expr(&mut self) -> Result<Expr, ParseError> {
        self.expect_kw("match")?;
        let scrut = self.expr()?;
        let as_name = if self.eat_kw("as") { Some(self.binder_name()?) } else { None };
        let in_name = if self.eat_kw("in") { Some(self.binder_name()?) } else { None };
        self.expect_kw("return")?;
        let ret = self.expr()?;
        self.expect_kw("with")?;
        let mut arms = Vec::new();
        let first_bar = self.eat_sym("|");
        if first_bar || !self.is_kw("end") {
            loop {
                let pat = self.pattern()?;
                self.expect_sym("=>")?;
                arms.push((pat, self.expr()?));
                if !self.eat_sym("|") {
                    break;
                }
            }
        }
        self.expect_kw("end")?;
        Ok(Expr::Match(Box::new(MatchExpr { scrut, as_name, in_name, ret, arms })))
    }

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        match self.peek().clone() {
            Tok::Keyword(k @ ("inl" | "inr" | "forced" | "prf" | "elt")) => {
                self.advance();
                let y = self.binder_name()?;
                Ok(match k {
                    "inl" => Pattern::Inl(y),
                    "inr" => Pattern::Inr(y),
                    "forced" => Pattern::Forced(y),
                    "prf" => Pattern::Intro(Coercion::Brace, y),
                    _ => Pattern::Intro(Coercion::SetBrace, y),
                })
            }
            Tok::Sym("(") => {
                self.advance();
                if self.eat_sym(")") {
                    return Ok(Pattern::Unit);
                }
                let i = self.binder_name()?;
                self.expect_sym(",")?;
                let j = self.binder_name()?;
                self.expect_sym(")")?;
                Ok(Pattern::Pair(i, j))
            }
            Tok::Sym("<") => {
                self.advance();
                let y = self.binder_name()?;
                self.expect_sym(">")?;
                let c = if self.eat_kw("set") { Coercion::SetBracket } else { Coercion::Bracket };
                Ok(Pattern::Intro(c, y))
            }
            _ => Err(self.unexpected(&["pattern"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_definition() {
        let d = parse_file("def true : Bool := inl ()").unwrap();
        assert_eq!(
            d,
            vec![Decl::Def {
                name: "true".into(),
                ty: Some(Expr::var("Bool")),
                body: Expr::Inl(Box::new(Expr::UnitVal)),
                line: 1,
            }]
        );
    }

    #[test]
    fn truncated_lambda_reports_end_of_input() {
        let e = parse_file("def bad := λ").unwrap_err();
        assert!(e.message.contains("end of input"), "{e}");
        assert_eq!((e.line, e.col), (1, 13));
    }

    #[test]
    fn operator_precedence() {
        let e = parse_expr("A × B + C → D").unwrap();
        let times = Expr::Times(Box::new(Expr::var("A")), Box::new(Expr::var("B")));
        let sum = Expr::Sum(Box::new(times), Box::new(Expr::var("C")));
        assert_eq!(e, Expr::arrow(sum, Expr::var("D")));
    }

    #[test]
    fn application_binds_tighter_than_injection_argument() {
        let e = parse_expr("inl x y").unwrap();
        assert_eq!(e, Expr::app(Expr::Inl(Box::new(Expr::var("x"))), Expr::var("y")));
    }

    #[test]
    fn match_with_clauses() {
        let e = parse_expr("match u as z in y return P y z with | (i, j) => v end").unwrap();
        let Expr::Match(m) = e else { panic!() };
        assert_eq!(m.as_name.as_deref(), Some("z"));
        assert_eq!(m.in_name.as_deref(), Some("y"));
        assert_eq!(m.arms[0].0, Pattern::Pair("i".into(), "j".into()));
    }

    #[test]
    fn empty_match() {
        let e = parse_expr("match x return Bool with end").unwrap();
        let Expr::Match(m) = e else { panic!() };
        assert!(m.arms.is_empty());
    }

    #[test]
    fn inductive_block_with_mutual_member() {
        let src = "inductive Even : Type := | ez : Even | es : Odd -> Even
                   with Odd : Type := | os : Even -> Odd";
        let d = parse_file(src).unwrap();
        let Decl::Inductive(ms) = &d[0] else { panic!() };
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].constructors.len(), 2);
        assert_eq!(ms[1].name, "Odd");
    }

    #[test]
    fn pragmas() {
        let d = parse_file("#flag cofix-dep-elim on\n#require \"eq.alg\"").unwrap();
        assert_eq!(d[0], Decl::Flag { name: "cofix-dep-elim".into(), on: true, line: 1 });
        assert_eq!(d[1], Decl::Require { path: "eq.alg".into(), line: 2 });
    }
}
