//! A kernel for an algebraic calculus of inductive and co-inductive
//! constructions: terms, reduction, conversion, positivity and guard
//! checking, type checking, and a surface language that elaborates
//! inductive declarations into fixed points of sums and products.

pub mod kernel;
pub mod reduce;
pub mod conversion;
pub mod positivity;
pub mod guard;
pub mod surface;
pub mod corpus;
pub mod cli;
pub mod prelude;
pub mod session;
pub mod typing;
