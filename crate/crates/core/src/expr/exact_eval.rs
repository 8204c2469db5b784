//! Rational evaluation for expressions that stay inside Q: integer powers,
//! factorials, binomials, Bernoulli and Euler data, and zeta-type functions
//! at non-positive integer order.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::ast::{BinOp, Expr};
use crate::exact::{self, BigRational, ExactError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactEvalError {
    #[error("not exactly representable: {0}")]
    Unsupported(String),
    #[error("unbound parameter `{0}`")]
    Unbound(String),
    #[error("`{func}` needs an integer argument, got {value}")]
    NotInteger { func: String, value: BigRational },
    #[error("`{func}`: argument {value} out of range")]
    Domain { func: String, value: BigRational },
    #[error("division by zero")]
    DivisionByZero,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Rational parameter bindings, with the same derived `q` as [`super::Env`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExactEnv {
    params: BTreeMap<String, BigRational>,
}

impl ExactEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: BigRational) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: BigRational) {
        self.params.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<BigRational> {
        if let Some(v) = self.params.get(name) {
            return Some(v.clone());
        }
        if name == "q" {
            return self
                .params
                .get("a")
                .map(|a| a / exact::int(4) + exact::rat(1, 4));
        }
        None
    }
}

const MAX_INDEX: i64 = 400;
const MAX_SUM_TERMS: i64 = 100_000;

pub fn evaluate_exact(e: &Expr, env: &ExactEnv) -> Result<BigRational, ExactEvalError> {
    let mut bound = Vec::new();
    eval(e, env, &mut bound)
}

fn integer(func: &str, x: &BigRational) -> Result<i64, ExactEvalError> {
    exact::as_i64(x).ok_or_else(|| ExactEvalError::NotInteger {
        func: func.to_string(),
        value: x.clone(),
    })
}

fn index(func: &str, x: &BigRational) -> Result<u32, ExactEvalError> {
    let n = integer(func, x)?;
    if !(0..=MAX_INDEX).contains(&n) {
        return Err(ExactEvalError::Domain {
            func: func.to_string(),
            value: x.clone(),
        });
    }
    Ok(n as u32)
}

// Order s = -m with m >= 0, for zeta-type functions.
fn neg_order(func: &str, s: &BigRational) -> Result<u32, ExactEvalError> {
    match exact::as_i64(s) {
        Some(k) if k <= 0 && -k <= MAX_INDEX => Ok((-k) as u32),
        _ => Err(ExactEvalError::Unsupported(format!(
            "{func} at order {s}; only non-positive integer orders are rational"
        ))),
    }
}

fn hurwitz_neg(m: u32, x: &BigRational) -> BigRational {
    -exact::bernoulli_poly(m + 1, x) / exact::int(m as i64 + 1)
}

fn eval(
    e: &Expr,
    env: &ExactEnv,
    bound: &mut Vec<(String, BigRational)>,
) -> Result<BigRational, ExactEvalError> {
    match e {
        Expr::Num { text, value } => exact::parse_decimal(text)
            .or_else(|| exact::from_f64(*value))
            .ok_or_else(|| ExactEvalError::Unsupported(format!("literal {text}"))),
        Expr::Const(c) => Err(ExactEvalError::Unsupported(format!("constant `{c}`"))),
        Expr::Param(n) | Expr::Bound(n) => {
            if let Some((_, v)) = bound.iter().rev().find(|(b, _)| b == n) {
                return Ok(v.clone());
            }
            env.get(n).ok_or_else(|| ExactEvalError::Unbound(n.clone()))
        }
        Expr::Neg(x) => Ok(-eval(x, env, bound)?),
        Expr::Bin(op, l, r) => {
            let a = eval(l, env, bound)?;
            let b = eval(r, env, bound)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => {
                    if b.is_zero() {
                        Err(ExactEvalError::DivisionByZero)
                    } else {
                        Ok(a / b)
                    }
                }
                BinOp::Pow => pow(&a, &b),
            }
        }
        Expr::Call(name, args) => {
            let xs = args
                .iter()
                .map(|a| eval(a, env, bound))
                .collect::<Result<Vec<_>, _>>()?;
            call(name, &xs)
        }
        Expr::Sum { var, lo, hi, body } => {
            let lo = integer("sum", &eval(lo, env, bound)?)?;
            let hi = integer("sum", &eval(hi, env, bound)?)?;
            if hi - lo > MAX_SUM_TERMS {
                return Err(ExactEvalError::Unsupported(format!("sum of {} terms", hi - lo + 1)));
            }
            let mut acc = BigRational::zero();
            for k in lo..=hi {
                bound.push((var.clone(), exact::int(k)));
                let v = eval(body, env, bound);
                bound.pop();
                acc += v?;
            }
            Ok(acc)
        }
        Expr::Integral { .. } => Err(ExactEvalError::Unsupported("integral".into())),
    }
}

fn pow(a: &BigRational, b: &BigRational) -> Result<BigRational, ExactEvalError> {
    let k = exact::as_i64(b)
        .filter(|k| k.abs() <= 10_000)
        .ok_or_else(|| ExactEvalError::Unsupported(format!("power with exponent {b}")))?;
    if a.is_zero() && k < 0 {
        return Err(ExactEvalError::DivisionByZero);
    }
    Ok(exact::powi(a, k)?)
}

fn call(name: &str, xs: &[BigRational]) -> Result<BigRational, ExactEvalError> {
    let x = &xs[0];
    let v = match name {
        "abs" => x.abs(),
        "pow" => pow(x, &xs[1])?,
        "fact" => BigRational::from_integer(exact::factorial(index(name, x)?)),
        "gammafn" => {
            let n = integer(name, x)?;
            if !(1..=MAX_INDEX).contains(&n) {
                return Err(ExactEvalError::Domain {
                    func: name.into(),
                    value: x.clone(),
                });
            }
            BigRational::from_integer(exact::factorial(n as u32 - 1))
        }
        "binom" => {
            let n = index(name, x)?;
            let k = integer(name, &xs[1])?;
            BigRational::from_integer(exact::binomial(n as u64, k))
        }
        "kron" => {
            if *x == xs[1] {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }
        "eulerpoly" => exact::euler_poly(index(name, x)?, &xs[1]),
        "eulernum" => exact::euler_number(index(name, x)?),
        "bernpoly" => exact::bernoulli_poly(index(name, x)?, &xs[1]),
        "bernnum" => exact::bernoulli_number(index(name, x)?),
        "hzeta" => hurwitz_neg(neg_order(name, x)?, &xs[1]),
        "eta" => exact::eta_neg(neg_order(name, x)?, &xs[1]),
        "S" => {
            let m = neg_order(name, x)?;
            let a = &xs[1];
            hurwitz_neg(m, a) - hurwitz_neg(m, &(a + exact::rat(1, 2)))
        }
        _ => return Err(ExactEvalError::Unsupported(format!("function `{name}`"))),
    };
    Ok(v)
}
