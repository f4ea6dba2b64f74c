//! The surface language: lexing, parsing, desugaring, pretty-printing and
//! the elaboration of inductive declarations.

pub mod ast;
pub mod desugar;
pub mod elaborate;
pub mod lexer;
pub mod parser;
pub mod pretty;

use thiserror::Error;

pub use desugar::{desugar, desugar_in, DesugarError};
pub use elaborate::{elaborate, ElabError, Emitted};
pub use parser::{parse_expr, parse_file};
pub use pretty::{pretty, pretty_in};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(", expected {}", expected.join(" or "))
    }
}

impl ParseError {
    pub fn at(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into(), expected: Vec::new() }
    }
}
