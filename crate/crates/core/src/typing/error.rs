use std::fmt;

use thiserror::Error;

use crate::guard::GuardViolation;
use crate::kernel::{Sort, TermPath};

/// What went wrong. Types inside are already rendered for display.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("{0} is not a sort")]
    NotASort(String),
    #[error("no product rule for ({0}, {1})")]
    NoProductRule(Sort, Sort),
    #[error("{0} has no type")]
    NoAxiom(Sort),
    #[error("type mismatch: expected {expected}, got {got}")]
    NotConvertible { expected: String, got: String },
    #[error("{0} is not a function")]
    NotAFunction(String),
    #[error("{0} is not an applied family")]
    NotAFamily(String),
    #[error("{0} is not strictly positive in its family variable")]
    PositivityViolation(String),
    #[error("guard condition violated: {}", .0.reason)]
    GuardViolation(GuardViolation),
    #[error("elimination of {construct} is restricted to {allowed}, but the return type is {actual}")]
    EliminationRestricted { construct: String, allowed: String, actual: String },
    #[error("{0} needs a type annotation")]
    ConstructorNeedsAnnotation(String),
    #[error("reduction ran out of fuel after {0} steps")]
    FuelExhausted(u64),
    #[error("{0} is already defined")]
    DuplicateDefinition(String),
    #[error("no formation rule: {0}")]
    NoFormationRule(String),
    #[error("{construct} checked against {expected}")]
    UnexpectedType { construct: String, expected: String },
    #[error("scrutinee has type {got}, expected {expected}")]
    ScrutineeMismatch { expected: String, got: String },
    #[error("structural argument has type {0}, which has no constructors")]
    NotInductive(String),
}

impl TypeErrorKind {
    /// Stable identifier, as used in the corpus manifest and in JSON output.
    pub fn name(&self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVariable(_) => "UnboundVariable",
            TypeErrorKind::NotASort(_) => "NotASort",
            TypeErrorKind::NoProductRule(..) => "NoProductRule",
            TypeErrorKind::NoAxiom(_) => "NoAxiom",
            TypeErrorKind::NotConvertible { .. } => "NotConvertible",
            TypeErrorKind::NotAFunction(_) => "NotAFunction",
            TypeErrorKind::NotAFamily(_) => "NotAFamily",
            TypeErrorKind::PositivityViolation(_) => "PositivityViolation",
            TypeErrorKind::GuardViolation(_) => "GuardViolation",
            TypeErrorKind::EliminationRestricted { .. } => "EliminationRestricted",
            TypeErrorKind::ConstructorNeedsAnnotation(_) => "ConstructorNeedsAnnotation",
            TypeErrorKind::FuelExhausted(_) => "FuelExhausted",
            TypeErrorKind::DuplicateDefinition(_) => "DuplicateDefinition",
            TypeErrorKind::NoFormationRule(_) => "NoFormationRule",
            TypeErrorKind::UnexpectedType { .. } => "UnexpectedType",
            TypeErrorKind::ScrutineeMismatch { .. } => "ScrutineeMismatch",
            TypeErrorKind::NotInductive(_) => "NotInductive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: TermPath,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at {})", self.kind, self.path)
    }
}

impl std::error::Error for TypeError {}
