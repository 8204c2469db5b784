//! Inputs shared by the integration tests and the acceptance run.

#![allow(dead_code)]

use zetasech_core::expr::{parse_catalog_file, parse_expression, SourceError};

pub struct Malformed {
    pub text: &'static str,
    /// Parsed as a whole catalog file rather than one expression.
    pub catalog: bool,
    pub line: usize,
    pub column: usize,
    pub message: &'static str,
}

const fn expr(text: &'static str, column: usize, message: &'static str) -> Malformed {
    Malformed { text, catalog: false, line: 1, column, message }
}

const fn cat(text: &'static str, line: usize, column: usize, message: &'static str) -> Malformed {
    Malformed { text, catalog: true, line, column, message }
}

pub const MALFORMED: [Malformed; 20] = [
    expr("", 1, "empty expression"),
    expr("1 +", 3, "end of input"),
    expr("2 * * 3", 5, "expected a number"),
    expr("(1 + 2", 6, "expected `)`"),
    expr("1 + 2)", 6, "unexpected token"),
    expr("sin(1, 2)", 1, "takes 1 argument"),
    expr("foo(1)", 1, "unknown function"),
    expr("sum(1, 0, 3, j)", 5, "bound variable name"),
    expr("integral(v, 1, inf, v)", 13, "run from 0"),
    expr("sin", 1, "without arguments"),
    expr("3 $ 4", 3, "illegal character"),
    expr("1.2.3", 1, "malformed number"),
    expr("sum(j, 0, 3, sum(j, 0, 1, j))", 18, "shadows"),
    expr("inf + 1", 1, "reserved word"),
    cat("[identity x]\ngroup = Q\npaper = \"a \\\"b\\\"\"\nkind = numeric\ntol = tight\nlhs = 1\nrhs = 1\n", 2, 9, "group"),
    cat("[identity x]\ngroup = A\npaper = \"a \\\"b\\\"\"\nkind = numeric\ntol = tight\nlhs = 1 +\nrhs = 1\n", 6, 9, "end of input"),
    cat("lhs = 1\n", 1, 1, "outside an identity"),
    cat("[identity x]\ngroup = A\npaper = \"a \\\"b\\\"\"\nkind = numeric\ntol = tight\nlhs = 1\nrhs = 1\nparams = { s in {} }\n", 8, 12, "no values"),
    cat("[identity x]\ngroup = A\npaper = \"a \\\"b\\\"\"\nkind = numeric\ntol = tight\nlhs = 1\nrhs = 1\nbogus = 3\n", 8, 1, "unknown key"),
    cat("[identity x]\ngroup = A\npaper = \"a \\\"b\\\"\"\nkind = numeric\ntol = tight\nlhs = 1\nrhs = 1\nparams = { s in {1, x} }\n", 8, 21, "expected a number"),
];

impl Malformed {
    pub fn parse(&self) -> Option<SourceError> {
        if self.catalog {
            parse_catalog_file(self.text).err()
        } else {
            parse_expression(self.text).err()
        }
    }

    /// The error exists, sits where expected, and points inside the text.
    pub fn check(&self) -> Result<(), String> {
        let e = self.parse().ok_or_else(|| format!("{:?} parsed", self.text))?;
        let line_text = self.text.lines().nth(e.line - 1).unwrap_or("");
        let inside = e.column >= 1 && e.column <= line_text.chars().count() + 1;
        if (e.line, e.column) != (self.line, self.column) || !inside || !e.message.contains(self.message) {
            return Err(format!("{:?}: got {e}", self.text));
        }
        Ok(())
    }
}
