use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Literal, keeping its source text for formatting and exact parsing.
    Num { text: String, value: f64 },
    Const(String),
    Param(String),
    Bound(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
    Sum {
        var: String,
        lo: Box<Expr>,
        hi: Box<Expr>,
        body: Box<Expr>,
    },
    /// Integral of `body` over `var` from 0 to infinity.
    Integral { var: String, body: Box<Expr> },
}

impl Expr {
    pub fn num(value: f64) -> Expr {
        Expr::Num {
            text: format!("{value}"),
            value,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Num { .. } | Expr::Const(_) | Expr::Param(_) | Expr::Bound(_) => vec![],
            Expr::Neg(e) => vec![e],
            Expr::Bin(_, l, r) => vec![l, r],
            Expr::Call(_, args) => args.iter().collect(),
            Expr::Sum { lo, hi, body, .. } => vec![lo, hi, body],
            Expr::Integral { body, .. } => vec![body],
        }
    }

    /// Free parameter names.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Param(p) = e {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Names bound by `sum` or `integral` anywhere inside.
    pub fn binders(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| match e {
            Expr::Sum { var, .. } | Expr::Integral { var, .. } => {
                out.insert(var.clone());
            }
            _ => {}
        });
        out
    }

    pub fn contains_integral(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Integral { .. }));
        found
    }

    pub fn mentions_bound(&self, name: &str) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Bound(b) if b == name));
        found
    }

    pub fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }
}
