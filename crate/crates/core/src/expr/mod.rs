//! The identity expression language.

mod ast;
mod catalog_file;
mod eval;
mod exact_eval;
mod format;
mod parser;
mod registry;
mod token;

pub use ast::{BinOp, Expr};
pub use catalog_file::{parse_catalog_file, write_catalog_file};
pub use eval::{evaluate, Env, EvalConfig, EvalError, Value};
pub use exact_eval::{evaluate_exact, ExactEnv, ExactEvalError};
pub use format::{format_expression, format_expression_with, FormatStyle};
pub use parser::{parse_expression, RESERVED_WORDS};
pub use registry::{call_numeric, lookup_function, FuncSpec, FUNCTIONS};
pub use token::{tokenize, Tok, Token};

use std::fmt;

/// A parse error anchored at a 1-based line and column of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceError {
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub lexeme: String,
}

impl SourceError {
    pub fn new(message: impl Into<String>, line: usize, column: usize, lexeme: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            line,
            column,
            lexeme: lexeme.into(),
        }
    }

    /// Re-anchor an error from a single-line fragment that starts at
    /// `line:column` of a larger text.
    pub fn shifted(mut self, line: usize, column: usize) -> Self {
        self.line = line;
        self.column += column - 1;
        self
    }
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.lexeme.is_empty() {
            write!(f, " (at `{}`)", self.lexeme)?;
        }
        Ok(())
    }
}

impl std::error::Error for SourceError {}
