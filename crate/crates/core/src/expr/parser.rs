//! Recursive-descent parser.
//!
//! Precedence, loosest first: `+ -`, `* /`, unary `-`, `^`. The exponent
//! of `^` is itself a unary expression, so `^` is right-associative,
//! `-2^2 = -(2^2)` and `2^-1` is accepted.

use super::ast::{BinOp, Expr};
use super::registry::lookup_function;
use super::token::{tokenize, Tok, Token};
use super::SourceError;
use crate::specfun::CONSTANT_NAMES;

/// Identifiers that cannot name parameters or bound variables.
pub const RESERVED_WORDS: &[&str] = &["sum", "integral", "inf"];

pub fn parse_expression(text: &str) -> Result<Expr, SourceError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        scope: Vec::new(),
        text,
    };
    if p.tokens.is_empty() {
        return Err(SourceError::new("empty expression", 1, 1, ""));
    }
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(p.error_at(t, "unexpected token after expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn error_at(&self, t: &Token, msg: &str) -> SourceError {
        SourceError::new(msg, t.line, t.column, t.tok.lexeme())
    }

    // Position of the last character of the input, for end-of-input errors.
    fn eof_error(&self, msg: &str) -> SourceError {
        let mut line = 1;
        let mut col = 0;
        let mut last_line = 1;
        let mut last_col = 1;
        for c in self.text.chars() {
            if c == '\n' {
                line += 1;
                col = 0;
            } else {
                col += 1;
                if !c.is_whitespace() {
                    last_line = line;
                    last_col = col;
                }
            }
        }
        SourceError::new(msg, last_line, last_col, "")
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, SourceError> {
        match self.next() {
            Some(t) if t.tok == want => Ok(t),
            Some(t) => Err(self.error_at(&t, &format!("expected {what}"))),
            None => Err(self.eof_error(&format!("expected {what} before end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, SourceError> {
        let mut lhs = self.mul()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.mul()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn mul(&mut self) -> Result<Expr, SourceError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, SourceError> {
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SourceError> {
        let base = self.primary()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, SourceError> {
        let t = match self.next() {
            Some(t) => t,
            None => return Err(self.eof_error("unexpected end of input")),
        };
        match &t.tok {
            Tok::Num(s) => {
                let value: f64 = s
                    .parse()
                    .map_err(|_| self.error_at(&t, "malformed number"))?;
                Ok(Expr::Num {
                    text: s.clone(),
                    value,
                })
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let name = name.clone();
                let is_call = matches!(self.peek().map(|t| &t.tok), Some(Tok::LParen));
                if is_call {
                    self.pos += 1;
                    return self.call(&t, &name);
                }
                if self.scope.iter().any(|b| *b == name) {
                    return Ok(Expr::Bound(name));
                }
                if CONSTANT_NAMES.contains(&name.as_str()) {
                    return Ok(Expr::Const(name));
                }
                if lookup_function(&name).is_some() {
                    return Err(self.error_at(&t, "function name used without arguments"));
                }
                if RESERVED_WORDS.contains(&name.as_str()) {
                    return Err(self.error_at(&t, "reserved word used as a value"));
                }
                Ok(Expr::Param(name))
            }
            _ => Err(self.error_at(&t, "expected a number, name or `(`")),
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>, SourceError> {
        let mut out = Vec::new();
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::RParen)) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            match self.next() {
                Some(Token { tok: Tok::Comma, .. }) => {}
                Some(Token { tok: Tok::RParen, .. }) => return Ok(out),
                Some(t) => return Err(self.error_at(&t, "expected `,` or `)`")),
                None => return Err(self.eof_error("unbalanced parentheses")),
            }
        }
    }

    fn binder(&mut self) -> Result<String, SourceError> {
        let t = match self.next() {
            Some(t) => t,
            None => return Err(self.eof_error("expected a bound variable name")),
        };
        let name = match &t.tok {
            Tok::Ident(n) => n.clone(),
            _ => return Err(self.error_at(&t, "expected a bound variable name")),
        };
        if CONSTANT_NAMES.contains(&name.as_str())
            || RESERVED_WORDS.contains(&name.as_str())
            || lookup_function(&name).is_some()
        {
            return Err(self.error_at(&t, "reserved name cannot be bound"));
        }
        if self.scope.contains(&name) {
            return Err(self.error_at(&t, "bound variable shadows an enclosing binder"));
        }
        self.expect(Tok::Comma, "`,`")?;
        Ok(name)
    }

    fn call(&mut self, head: &Token, name: &str) -> Result<Expr, SourceError> {
        match name {
            "sum" => {
                let var = self.binder()?;
                let lo = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let hi = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                self.scope.push(var.clone());
                let body = self.expr();
                self.scope.pop();
                let body = body?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Sum {
                    var,
                    lo: Box::new(lo),
                    hi: Box::new(hi),
                    body: Box::new(body),
                })
            }
            "integral" => {
                let var = self.binder()?;
                match self.next() {
                    Some(Token { tok: Tok::Num(n), .. }) if n.parse::<f64>() == Ok(0.0) => {}
                    Some(t) => return Err(self.error_at(&t, "integrals run from 0")),
                    None => return Err(self.eof_error("unbalanced parentheses")),
                }
                self.expect(Tok::Comma, "`,`")?;
                match self.next() {
                    Some(Token { tok: Tok::Ident(n), .. }) if n == "inf" => {}
                    Some(t) => return Err(self.error_at(&t, "integrals run to `inf`")),
                    None => return Err(self.eof_error("unbalanced parentheses")),
                }
                self.expect(Tok::Comma, "`,`")?;
                self.scope.push(var.clone());
                let body = self.expr();
                self.scope.pop();
                let body = body?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Integral {
                    var,
                    body: Box::new(body),
                })
            }
            _ => {
                let spec = lookup_function(name)
                    .ok_or_else(|| self.error_at(head, &format!("unknown function `{name}`")))?;
                let args = self.args()?;
                if args.len() != spec.arity {
                    return Err(self.error_at(
                        head,
                        &format!("`{name}` takes {} argument(s), got {}", spec.arity, args.len()),
                    ));
                }
                Ok(Expr::Call(spec.name.to_string(), args))
            }
        }
    }
}
