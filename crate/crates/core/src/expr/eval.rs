//! Binary64 evaluation with an accumulated absolute error budget.
//!
//! The budget starts at zero and grows only through integrals (their
//! quadrature error estimates), propagated through arithmetic to first
//! order and through function calls by finite differences.

use std::cell::RefCell;
use std::collections::BTreeMap;

use super::ast::{BinOp, Expr};
use super::registry::{call_numeric, real_pow};
use crate::quadrature::{integrate_semi_infinite, QuadConfig, QuadError};
use crate::specfun::{constants, SpecError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound parameter `{0}`")]
    Unbound(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{func}` takes {expected} argument(s), got {got}")]
    Arity {
        func: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("`{func}` needs an integer argument, got {value}")]
    NotInteger { func: &'static str, value: f64 },
    #[error("`{func}`: {value} out of domain ({reason})")]
    Domain {
        func: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("`{func}` produced a non-finite value")]
    NonFinite { func: &'static str },
    #[error("sum bound {0} is not an integer")]
    SumBound(f64),
    #[error("sum over {0} terms exceeds the limit")]
    SumTooLong(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error(transparent)]
    Special(#[from] SpecError),
    #[error("quadrature: {0}")]
    Quadrature(#[from] QuadError),
    #[error("integral did not converge (value {value:e}, error estimate {err:e}, {evaluations} evaluations)")]
    NotConverged { value: f64, err: f64, evaluations: u64 },
}

/// A value with its absolute error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Value {
    pub value: f64,
    pub err: f64,
}

impl Value {
    pub fn exact(value: f64) -> Self {
        Self { value, err: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub quad: QuadConfig,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            quad: QuadConfig::default(),
        }
    }
}

/// Parameter bindings. `q` defaults to `a/4 + 1/4` when only `a` is bound.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Env {
    params: BTreeMap<String, f64>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.params.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        if let Some(v) = self.params.get(name) {
            return Some(*v);
        }
        if name == "q" {
            return self.params.get("a").map(|a| a / 4.0 + 0.25);
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.params.iter()
    }
}

pub fn evaluate(e: &Expr, env: &Env, cfg: &EvalConfig) -> Result<Value, EvalError> {
    let mut ev = Evaluator {
        env,
        cfg,
        bound: Vec::new(),
    };
    ev.eval(e)
}

const MAX_SUM_TERMS: f64 = 1e7;

struct Evaluator<'a> {
    env: &'a Env,
    cfg: &'a EvalConfig,
    bound: Vec<(String, f64)>,
}

fn finite(v: f64, func: &'static str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { func })
    }
}

// Largest one-sided change of `f` when `x` moves by `h`.
fn spread(f: impl Fn(f64) -> Result<f64, EvalError>, x: f64, h: f64, base: f64) -> Result<f64, EvalError> {
    let up = f(x + h).map(|v| (v - base).abs());
    let down = f(x - h).map(|v| (v - base).abs());
    match (up, down) {
        (Ok(a), Ok(b)) => Ok(a.max(b)),
        (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(a),
        (Err(e), Err(_)) => Err(e),
    }
}

impl Evaluator<'_> {
    fn lookup(&self, name: &str) -> Result<f64, EvalError> {
        if let Some((_, v)) = self.bound.iter().rev().find(|(n, _)| n == name) {
            return Ok(*v);
        }
        self.env
            .get(name)
            .ok_or_else(|| EvalError::Unbound(name.to_string()))
    }

    fn eval(&mut self, e: &Expr) -> Result<Value, EvalError> {
        match e {
            Expr::Num { value, .. } => Ok(Value::exact(*value)),
            Expr::Const(n) => constants()
                .get(n)
                .map(Value::exact)
                .ok_or_else(|| EvalError::UnknownConstant(n.clone())),
            Expr::Param(n) | Expr::Bound(n) => Ok(Value::exact(self.lookup(n)?)),
            Expr::Neg(x) => {
                let v = self.eval(x)?;
                Ok(Value {
                    value: -v.value,
                    err: v.err,
                })
            }
            Expr::Bin(op, l, r) => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                binary(*op, a, b)
            }
            Expr::Call(name, args) => {
                let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                call(name, &vals)
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.eval(lo)?.value;
                let hi = self.eval(hi)?.value;
                for b in [lo, hi] {
                    if b.fract() != 0.0 || !b.is_finite() {
                        return Err(EvalError::SumBound(b));
                    }
                }
                if hi - lo > MAX_SUM_TERMS {
                    return Err(EvalError::SumTooLong(hi - lo + 1.0));
                }
                let (mut acc, mut err) = (0.0, 0.0);
                let mut k = lo;
                while k <= hi {
                    self.bound.push((var.clone(), k));
                    let v = self.eval(body);
                    self.bound.pop();
                    let v = v?;
                    acc += v.value;
                    err += v.err;
                    k += 1.0;
                }
                Ok(Value { value: acc, err })
            }
            Expr::Integral { var, body } => self.integral(var, body),
        }
    }

    fn integral(&mut self, var: &str, body: &Expr) -> Result<Value, EvalError> {
        let mut unavailable = vec![var.to_string()];
        let folded = self.fold(body, &mut unavailable)?;
        let failure: RefCell<Option<EvalError>> = RefCell::new(None);
        let quad = self.cfg.quad;
        let mut integrand = |x: f64| -> f64 {
            self.bound.push((var.to_string(), x));
            let r = self.eval(&folded);
            self.bound.pop();
            match r {
                Ok(v) => v.value,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        };
        let r = integrate_semi_infinite(&mut integrand, &quad);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let r = r?;
        if !r.converged {
            return Err(EvalError::NotConverged {
                value: r.value,
                err: r.abs_error_estimate,
                evaluations: r.evaluations,
            });
        }
        Ok(Value {
            value: r.value,
            err: r.abs_error_estimate,
        })
    }

    // Replace subtrees that do not depend on any unavailable name (the
    // integration variable or an inner summation index) by their value.
    fn fold(&mut self, e: &Expr, unavailable: &mut Vec<String>) -> Result<Expr, EvalError> {
        let depends = {
            let mut d = false;
            e.walk(&mut |n| {
                if let Expr::Bound(b) = n {
                    d |= unavailable.contains(b);
                }
            });
            d
        };
        if !depends {
            let v = self.eval(e)?;
            return Ok(Expr::Num {
                text: String::new(),
                value: v.value,
            });
        }
        Ok(match e {
            Expr::Neg(x) => Expr::Neg(Box::new(self.fold(x, unavailable)?)),
            Expr::Bin(op, l, r) => Expr::Bin(
                *op,
                Box::new(self.fold(l, unavailable)?),
                Box::new(self.fold(r, unavailable)?),
            ),
            Expr::Call(n, args) => Expr::Call(
                n.clone(),
                args.iter()
                    .map(|a| self.fold(a, unavailable))
                    .collect::<Result<_, _>>()?,
            ),
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.fold(lo, unavailable)?;
                let hi = self.fold(hi, unavailable)?;
                unavailable.push(var.clone());
                let body = self.fold(body, unavailable);
                unavailable.pop();
                Expr::Sum {
                    var: var.clone(),
                    lo: Box::new(lo),
                    hi: Box::new(hi),
                    body: Box::new(body?),
                }
            }
            other => other.clone(),
        })
    }
}

fn binary(op: BinOp, a: Value, b: Value) -> Result<Value, EvalError> {
    let (x, y) = (a.value, b.value);
    let (v, err) = match op {
        BinOp::Add => (x + y, a.err + b.err),
        BinOp::Sub => (x - y, a.err + b.err),
        BinOp::Mul => (x * y, x.abs() * b.err + y.abs() * a.err + a.err * b.err),
        BinOp::Div => {
            if y == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            let q = x / y;
            (q, (a.err + q.abs() * b.err) / y.abs())
        }
        BinOp::Pow => {
            let v = real_pow(x, y)?;
            let mut err = 0.0;
            if a.err > 0.0 {
                err += spread(|t| real_pow(t, y), x, a.err, v)?;
            }
            if b.err > 0.0 {
                err += spread(|t| real_pow(x, t), y, b.err, v)?;
            }
            (v, err)
        }
    };
    Ok(Value {
        value: finite(v, op.symbol())?,
        err,
    })
}

fn call(name: &str, args: &[Value]) -> Result<Value, EvalError> {
    let xs: Vec<f64> = args.iter().map(|a| a.value).collect();
    let v = call_numeric(name, &xs)?;
    let mut err = 0.0;
    for (i, a) in args.iter().enumerate() {
        if a.err > 0.0 {
            let f = |t: f64| {
                let mut ys = xs.clone();
                ys[i] = t;
                call_numeric(name, &ys)
            };
            err += spread(f, xs[i], a.err, v)?;
        }
    }
    Ok(Value { value: v, err })
}
