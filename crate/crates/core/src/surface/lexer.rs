//! Tokenizer for the surface language. Unicode notation is folded into
//! its ASCII spelling here so the parser only sees one form.

use std::fmt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Keyword(&'static str),
    Num(u64),
    Str(String),
    /// `#flag`, `#require`, ...
    Pragma(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Keyword(k) => write!(f, "`{k}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Pragma(p) => write!(f, "`#{p}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const KEYWORDS: &[&str] = &[
    "def", "inductive", "with", "fun", "forall", "mu", "nu", "fix", "cofix", "struct", "match", "as",
    "in", "return", "end", "inl", "inr", "forced", "prf", "elt", "set", "Type", "Prop", "Set", "Box",
    "Sigma",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn keyword(s: &str) -> Option<&'static str> {
    KEYWORDS.iter().copied().find(|k| *k == s)
}

const SYMBOLS: &[&str] = &[
    ":=", "=>", "->", "(", ")", "{", "}", "[", "]", "<", ">", ",", ":", ".", "|", "+", "*", "^", "_",
];

fn unicode_alias(c: char) -> Option<Tok> {
    Some(match c {
        'λ' => Tok::Keyword("fun"),
        'Π' | '∀' => Tok::Keyword("forall"),
        'μ' => Tok::Keyword("mu"),
        'ν' => Tok::Keyword("nu"),
        'Σ' => Tok::Keyword("Sigma"),
        '→' => Tok::Sym("->"),
        '⇒' => Tok::Sym("=>"),
        '×' => Tok::Sym("*"),
        '⟨' => Tok::Sym("<"),
        '⟩' => Tok::Sym(">"),
        '□' => Tok::Keyword("Box"),
        _ => return None,
    })
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() && unicode_alias(c).is_none() || c == '_'
}

fn ident_continue(c: char) -> bool {
    (c.is_alphanumeric() && unicode_alias(c).is_none()) || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let (tline, tcol) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: tline, col: tcol });
        if let Some(tok) = unicode_alias(c) {
            bump!();
            push(&mut out, tok);
        } else if c == '#' {
            bump!();
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '-') {
                bump!();
            }
            let name: String = chars[start..i].iter().collect();
            if name.is_empty() {
                return Err(ParseError::at(tline, tcol, "expected a pragma name after `#`"));
            }
            push(&mut out, Tok::Pragma(name));
        } else if c == '"' {
            bump!();
            let start = i;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                bump!();
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(ParseError::at(tline, tcol, "unterminated string literal"));
            }
            let s: String = chars[start..i].iter().collect();
            bump!();
            push(&mut out, Tok::Str(s));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| ParseError::at(tline, tcol, format!("number `{digits}` is too large")))?;
            push(&mut out, Tok::Num(n));
        } else if ident_start(c) && !(c == '_' && !chars.get(i + 1).is_some_and(|d| ident_continue(*d))) {
            let start = i;
            // Hyphenated words such as `cofix-dep-elim` lex as one identifier.
            while i < chars.len()
                && (ident_continue(chars[i])
                    || chars[i] == '-' && chars.get(i + 1).is_some_and(|d| d.is_alphabetic()))
            {
                bump!();
            }
            let word: String = chars[start..i].iter().collect();
            match keyword(&word) {
                Some(k) => push(&mut out, Tok::Keyword(k)),
                None => push(&mut out, Tok::Ident(word)),
            }
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let Some(sym) = SYMBOLS.iter().copied().find(|s| rest.starts_with(s)) else {
                return Err(ParseError::at(tline, tcol, format!("unexpected character `{c}`")));
            };
            for _ in 0..sym.chars().count() {
                bump!();
            }
            push(&mut out, Tok::Sym(sym));
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
