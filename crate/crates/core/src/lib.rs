//! Static analysis for Prolog source text: tokenizing, parsing, formatting,
//! style and quality checks, and corpus statistics.

pub mod ast;
pub mod corpus;
pub mod cst;
pub mod diagnostic;
pub mod lexer;
pub mod optable;
pub mod options;
pub mod parser;
pub mod printer;
pub mod quality;
pub mod span;
pub mod style;
mod stack;
