//! Reader and writer for catalog files.
//!
//! ```text
//! # comment
//! [identity Cn0]
//! group = D
//! paper = "v/cosh(pi v) moment"
//! kind = numeric
//! tol = tight
//! lhs = integral(v, 0, inf, v/cosh(pi*v))
//! rhs = 2*catalan/pi^2
//! params = { n in {0, 1, 2}; a in {1/2, 1} }
//! ```
//!
//! Every field sits on one line. `group` defaults to A; `floor` is required
//! for negative controls and rejected otherwise. `params` may be omitted when
//! neither side has free parameters.

use std::collections::BTreeSet;

use super::ast::Expr;
use super::format::format_expression;
use super::parser::{parse_expression, RESERVED_WORDS};
use super::registry::lookup_function;
use super::token::{tokenize, Tok, Token};
use super::SourceError;
use crate::catalog::{GridValue, Group, IdentityRecord, Kind, TolClass};
use crate::specfun::CONSTANT_NAMES;

const KEYS: &[&str] = &["group", "paper", "kind", "tol", "lhs", "rhs", "params", "floor"];

#[derive(Default)]
struct Draft {
    id: String,
    line: usize,
    group: Option<Group>,
    paper: Option<String>,
    kind: Option<Kind>,
    tol: Option<(TolClass, usize)>,
    lhs: Option<Expr>,
    rhs: Option<Expr>,
    params: Option<(Vec<(String, Vec<GridValue>)>, usize)>,
    floor: Option<(f64, usize)>,
    seen: BTreeSet<&'static str>,
}

pub fn parse_catalog_file(text: &str) -> Result<Vec<IdentityRecord>, SourceError> {
    let mut out: Vec<IdentityRecord> = Vec::new();
    let mut ids: BTreeSet<String> = BTreeSet::new();
    let mut cur: Option<Draft> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let indent = raw.chars().take_while(|c| c.is_whitespace()).count();
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let col0 = indent + 1;
        if let Some(rest) = body.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| SourceError::new("unterminated section header", line, col0, body))?;
            let id = inner
                .trim()
                .strip_prefix("identity")
                .filter(|r| r.starts_with(char::is_whitespace))
                .map(str::trim)
                .ok_or_else(|| SourceError::new("expected `[identity <id>]`", line, col0, body))?;
            if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(SourceError::new("identity ids are letters, digits and `_`", line, col0, id));
            }
            if !ids.insert(id.to_string()) {
                return Err(SourceError::new(format!("duplicate identity id `{id}`"), line, col0, id));
            }
            if let Some(d) = cur.take() {
                out.push(finish(d)?);
            }
            cur = Some(Draft {
                id: id.to_string(),
                line,
                ..Draft::default()
            });
            continue;
        }
        let (key, value_off) = match body.find('=') {
            Some(i) => (body[..i].trim(), i + 1),
            None => return Err(SourceError::new("expected `key = value`", line, col0, body)),
        };
        let d = cur
            .as_mut()
            .ok_or_else(|| SourceError::new("field outside an identity block", line, col0, key))?;
        let key = *KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| SourceError::new(format!("unknown key `{key}`"), line, col0, key))?;
        if !d.seen.insert(key) {
            return Err(SourceError::new(format!("duplicate key `{key}`"), line, col0, key));
        }
        let after = &body[value_off..];
        let lead = after.chars().take_while(|c| c.is_whitespace()).count();
        let value = after.trim();
        let vcol = col0 + body[..value_off].chars().count() + lead;
        let bad = |msg: &str| SourceError::new(msg, line, vcol, value);
        match key {
            "group" => d.group = Some(Group::parse(value).ok_or_else(|| bad("group must be one of A-H"))?),
            "paper" => d.paper = Some(parse_quoted(value, line, vcol)?),
            "kind" => {
                let k = Kind::parse(value).ok_or_else(|| bad("kind must be numeric, exact or negative_control"))?;
                d.kind = Some(k);
            }
            "tol" => {
                let t = TolClass::parse(value).ok_or_else(|| bad("tol must be exact, tight, med or loose"))?;
                d.tol = Some((t, line));
            }
            "lhs" | "rhs" => {
                let e = parse_expression(value).map_err(|e| e.shifted(line, vcol))?;
                if key == "lhs" {
                    d.lhs = Some(e);
                } else {
                    d.rhs = Some(e);
                }
            }
            "params" => d.params = Some((parse_params(value, line, vcol)?, line)),
            "floor" => {
                let f: f64 = value.parse().map_err(|_| bad("floor must be a number"))?;
                if !(f.is_finite() && f > 0.0) {
                    return Err(bad("floor must be positive"));
                }
                d.floor = Some((f, line));
            }
            _ => unreachable!(),
        }
    }
    if let Some(d) = cur.take() {
        out.push(finish(d)?);
    }
    Ok(out)
}

fn parse_quoted(value: &str, line: usize, col: usize) -> Result<String, SourceError> {
    let mut it = value.chars();
    if it.next() != Some('"') {
        return Err(SourceError::new("expected a quoted string", line, col, value));
    }
    let mut s = String::new();
    let mut closed = false;
    while let Some(c) = it.next() {
        match c {
            '\\' => match it.next() {
                Some(e @ ('"' | '\\')) => s.push(e),
                _ => return Err(SourceError::new("bad escape in string", line, col, value)),
            },
            '"' => {
                closed = true;
                break;
            }
            c => s.push(c),
        }
    }
    if !closed {
        return Err(SourceError::new("unterminated string", line, col, value));
    }
    if !it.as_str().trim().is_empty() {
        return Err(SourceError::new("text after closing quote", line, col, value));
    }
    Ok(s)
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn parse_params(value: &str, line: usize, col: usize) -> Result<Vec<(String, Vec<GridValue>)>, SourceError> {
    let toks = tokenize(value).map_err(|e| e.shifted(line, col))?;
    let mut p = ParamParser { toks, pos: 0, line, col, value };
    p.expect(&Tok::LBrace, "`{`")?;
    let mut grid: Vec<(String, Vec<GridValue>)> = Vec::new();
    if p.eat(&Tok::RBrace) {
        return p.end(grid);
    }
    loop {
        let t = p.next("a parameter name")?;
        let name = match &t.tok {
            Tok::Ident(n) => n.clone(),
            _ => return Err(p.err(&t, "expected a parameter name")),
        };
        if CONSTANT_NAMES.contains(&name.as_str())
            || RESERVED_WORDS.contains(&name.as_str())
            || lookup_function(&name).is_some()
        {
            return Err(p.err(&t, "reserved name cannot be a parameter"));
        }
        if grid.iter().any(|(n, _)| *n == name) {
            return Err(p.err(&t, "parameter listed twice"));
        }
        let kw = p.next("`in`")?;
        if kw.tok != Tok::Ident("in".into()) {
            return Err(p.err(&kw, "expected `in`"));
        }
        p.expect(&Tok::LBrace, "`{`")?;
        let mut values = Vec::new();
        if !p.eat(&Tok::RBrace) {
            loop {
                values.push(p.grid_value()?);
                if p.eat(&Tok::RBrace) {
                    break;
                }
                p.expect(&Tok::Comma, "`,` or `}`")?;
            }
        }
        if values.is_empty() {
            return Err(p.err(&t, "parameter has no values"));
        }
        grid.push((name, values));
        if p.eat(&Tok::RBrace) {
            return p.end(grid);
        }
        p.expect(&Tok::Semi, "`;` or `}`")?;
    }
}

struct ParamParser<'a> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    col: usize,
    value: &'a str,
}

impl ParamParser<'_> {
    fn err(&self, t: &Token, msg: &str) -> SourceError {
        SourceError::new(msg, self.line, self.col + t.column - 1, t.tok.lexeme())
    }

    fn eof(&self, what: &str) -> SourceError {
        let end = self.col + self.value.chars().count().saturating_sub(1);
        SourceError::new(format!("expected {what} before end of line"), self.line, end, "")
    }

    fn next(&mut self, what: &str) -> Result<Token, SourceError> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| self.eof(what))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.toks.get(self.pos).map(|t| &t.tok) == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), SourceError> {
        let t = self.next(what)?;
        if t.tok == *want {
            Ok(())
        } else {
            Err(self.err(&t, &format!("expected {what}")))
        }
    }

    fn number(&mut self) -> Result<(String, Token), SourceError> {
        let mut t = self.next("a number")?;
        let mut text = String::new();
        if t.tok == Tok::Minus {
            text.push('-');
            t = self.next("a number")?;
        }
        match &t.tok {
            Tok::Num(n) => text.push_str(n),
            _ => return Err(self.err(&t, "expected a number")),
        }
        Ok((text, t))
    }

    fn grid_value(&mut self) -> Result<GridValue, SourceError> {
        let (mut text, t) = self.number()?;
        if self.eat(&Tok::Slash) {
            let (den, _) = self.number()?;
            text.push('/');
            text.push_str(&den);
        }
        GridValue::parse(&text).ok_or_else(|| self.err(&t, "grid value must be a decimal or a ratio"))
    }

    fn end<T>(&self, v: T) -> Result<T, SourceError> {
        match self.toks.get(self.pos) {
            None => Ok(v),
            Some(t) => Err(self.err(t, "unexpected text after parameter list")),
        }
    }
}

fn finish(d: Draft) -> Result<IdentityRecord, SourceError> {
    let at = |msg: String| SourceError::new(msg, d.line, 1, d.id.clone());
    let missing = |k: &str| at(format!("identity `{}` lacks `{k}`", d.id));
    let paper = d.paper.ok_or_else(|| missing("paper"))?;
    let kind = d.kind.ok_or_else(|| missing("kind"))?;
    let (tol, tline) = d.tol.ok_or_else(|| missing("tol"))?;
    let lhs = d.lhs.ok_or_else(|| missing("lhs"))?;
    let rhs = d.rhs.ok_or_else(|| missing("rhs"))?;
    if (kind == Kind::Exact) != (tol == TolClass::Exact) {
        return Err(SourceError::new(
            format!("`kind = {}` does not go with `tol = {}`: exact identities take `tol = exact` and nothing else does", kind.name(), tol.name()),
            tline,
            1,
            "tol",
        ));
    }
    let floor = match (kind, d.floor) {
        (Kind::NegativeControl, Some((f, _))) => Some(f),
        (Kind::NegativeControl, None) => return Err(missing("floor")),
        (_, Some((_, fl))) => {
            return Err(SourceError::new("`floor` applies only to negative controls", fl, 1, "floor"))
        }
        (_, None) => None,
    };
    let (grid, pline) = d.params.unwrap_or((Vec::new(), d.line));
    let binders: BTreeSet<String> = lhs.binders().union(&rhs.binders()).cloned().collect();
    for (name, _) in &grid {
        if binders.contains(name) {
            return Err(SourceError::new(
                format!("parameter `{name}` collides with a bound variable"),
                pline,
                1,
                name.clone(),
            ));
        }
    }
    let has = |n: &str| grid.iter().any(|(g, _)| g == n);
    for p in lhs.params().union(&rhs.params()) {
        if !(has(p) || (p == "q" && has("a"))) {
            return Err(SourceError::new(
                format!("parameter `{p}` has no grid values"),
                pline,
                1,
                p.clone(),
            ));
        }
    }
    Ok(IdentityRecord {
        id: d.id,
        group: d.group.unwrap_or(Group::A),
        paper_anchor: paper,
        kind,
        tol_class: tol,
        lhs,
        rhs,
        grid,
        expected_floor: floor,
    })
}

/// Canonical text for a list of records. Parsing it gives the records back.
pub fn write_catalog_file(records: &[IdentityRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("[identity {}]\n", r.id));
        out.push_str(&format!("group = {}\n", r.group));
        out.push_str(&format!("paper = {}\n", quote(&r.paper_anchor)));
        out.push_str(&format!("kind = {}\n", r.kind));
        out.push_str(&format!("tol = {}\n", r.tol_class));
        out.push_str(&format!("lhs = {}\n", format_expression(&r.lhs)));
        out.push_str(&format!("rhs = {}\n", format_expression(&r.rhs)));
        if !r.grid.is_empty() {
            let dims: Vec<String> = r
                .grid
                .iter()
                .map(|(n, vs)| {
                    let vs: Vec<&str> = vs.iter().map(|v| v.text.as_str()).collect();
                    format!("{n} in {{{}}}", vs.join(", "))
                })
                .collect();
            out.push_str(&format!("params = {{ {} }}\n", dims.join("; ")));
        }
        if let Some(f) = r.expected_floor {
            out.push_str(&format!("floor = {f:e}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
# two records
[identity Demo1]
group = D
paper = "Demo \"quoted\""
kind = numeric
tol = tight
lhs = integral(v, 0, inf, v^(s-1)/cosh(pi*v))
rhs = gammafn(s)*S(s, q)/pi^s    # trailing comment
params = { s in {0.5, 2}; a in {1/2, 1, -3/2} }

[identity Demo2]
paper = "x"
kind = negative_control
tol = loose
lhs = 1
rhs = 1.5
floor = 1e-3
"#;

    #[test]
    fn reads_records() {
        let rs = parse_catalog_file(SAMPLE).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].paper_anchor, "Demo \"quoted\"");
        assert_eq!(rs[0].group, Group::D);
        assert_eq!(rs[0].grid[1].1[2].value, -1.5);
        assert_eq!(rs[0].case_count(), 6);
        assert_eq!(rs[1].group, Group::A);
        assert_eq!(rs[1].expected_floor, Some(1e-3));
    }

    #[test]
    fn round_trips() {
        let rs = parse_catalog_file(SAMPLE).unwrap();
        let text = write_catalog_file(&rs);
        assert_eq!(parse_catalog_file(&text).unwrap(), rs);
        assert_eq!(write_catalog_file(&parse_catalog_file(&text).unwrap()), text);
    }

    fn err(src: &str) -> SourceError {
        parse_catalog_file(src).unwrap_err()
    }

    #[test]
    fn errors_are_positioned() {
        let head = "[identity X]\npaper = \"p\"\nkind = numeric\ntol = tight\n";
        let e = err(&format!("{head}lhs = sin(1\nrhs = 0\n"));
        assert_eq!((e.line, e.column), (5, 11));
        let e = err(&format!("{head}lhs = 1\nrhs = 1 + foo(2)\n"));
        assert_eq!((e.line, e.column), (6, 11));
        let e = err(&format!("{head}lhs = n\nrhs = 0\nparams = {{ n in {{0, x}} }}\n"));
        assert_eq!((e.line, e.column), (7, 21));
        let e = err(&format!("{head}lhs = n\nrhs = 0\nparams = {{ n in {{}} }}\n"));
        assert_eq!(e.line, 7);
        let e = err(&format!("{head}lhs = n\nrhs = 0\n"));
        assert!(e.message.contains("no grid values"), "{e}");
        let e = err(&format!("{head}lhs = 1\nrhs = 1\nwat = 3\n"));
        assert_eq!((e.line, e.column), (7, 1));
        let e = err(&format!("{head}lhs = 1\nrhs = 1\n[identity X]\n"));
        assert!(e.message.contains("duplicate"), "{e}");
        let e = err("lhs = 1\n");
        assert!(e.message.contains("outside"), "{e}");
        let e = err("[identity X]\npaper = \"p\"\nkind = exact\ntol = tight\nlhs = 1\nrhs = 1\n");
        assert!(e.message.contains("exact"), "{e}");
        let e = err("[identity X]\npaper = \"p\"\nkind = negative_control\ntol = med\nlhs = 1\nrhs = 1\n");
        assert!(e.message.contains("floor"), "{e}");
        let e = err(&format!("{head}lhs = sum(j, 0, 2, j)\nrhs = 3\nparams = {{ j in {{1}} }}\n"));
        assert!(e.message.contains("bound variable"), "{e}");
        let e = err(&format!("{head}lhs = 1\nrhs = 1\nlhs = 2\n"));
        assert!(e.message.contains("duplicate key"), "{e}");
    }

    #[test]
    fn q_is_derived_from_a() {
        let src = "[identity Q]\npaper = \"p\"\nkind = numeric\ntol = tight\nlhs = q\nrhs = a/4 + 1/4\nparams = { a in {1} }\n";
        assert!(parse_catalog_file(src).is_ok());
        let src = src.replace("a in", "b in").replace("a/4", "b/4");
        assert!(parse_catalog_file(&src).is_err());
    }
}
