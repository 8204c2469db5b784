//! Function table shared by the parser (arity) and the numeric evaluator.

use crate::exact;
use crate::specfun::{self, Dual};

use super::eval::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuncSpec {
    pub name: &'static str,
    pub arity: usize,
    pub doc: &'static str,
}

const fn f(name: &'static str, arity: usize, doc: &'static str) -> FuncSpec {
    FuncSpec { name, arity, doc }
}

pub const FUNCTIONS: &[FuncSpec] = &[
    f("sin", 1, "sine"),
    f("cos", 1, "cosine"),
    f("tan", 1, "tangent"),
    f("arctan", 1, "principal arctangent"),
    f("sinh", 1, "hyperbolic sine"),
    f("cosh", 1, "hyperbolic cosine"),
    f("tanh", 1, "hyperbolic tangent"),
    f("exp", 1, "exponential"),
    f("ln", 1, "natural logarithm, x > 0"),
    f("sqrt", 1, "square root, x >= 0"),
    f("abs", 1, "absolute value"),
    f("pow", 2, "pow(x, y) = x^y"),
    f("fact", 1, "n! for integer n >= 0"),
    f("gammafn", 1, "Gamma(x)"),
    f("loggamma", 1, "ln Gamma(x), x > 0"),
    f("digamma", 1, "psi(x), x > 0"),
    f("polygamma", 2, "polygamma(m, x), integer m >= 0"),
    f("hzeta", 2, "Hurwitz zeta(s, a)"),
    f("hzeta_ds", 2, "d/ds zeta(s, a)"),
    f("eta", 2, "alternating Hurwitz eta(s, a)"),
    f("eta_ds", 2, "d/ds eta(s, a)"),
    f("S", 2, "S(s, a) = zeta(s, a) - zeta(s, a + 1/2)"),
    f("S_ds", 2, "d/ds S(s, a)"),
    f("zetap", 1, "Riemann zeta'(s)"),
    f("betadir", 1, "Dirichlet beta(s)"),
    f("eulerpoly", 2, "Euler polynomial E(n, x)"),
    f("eulernum", 1, "Euler number E(n)"),
    f("bernpoly", 2, "Bernoulli polynomial B(n, x)"),
    f("bernnum", 1, "Bernoulli number B(n), B(1) = -1/2"),
    f("laguerre", 3, "generalised Laguerre L(n, alpha, x)"),
    f("h2f1_arctan", 2, "2F1(1, 3/2+j; 5/2+j; -4t^2)"),
    f("h2f1_log", 2, "2F1(1, k+1; k+2; -4t^2)"),
    f("h3f2", 2, "3F2(1, 1, 3/2; 2+m, 3/2+m; z), z <= 0"),
    f("impsi_quarter", 1, "Im psi(1/4 + i w/(2 pi))"),
    f("relgamma_quarter", 1, "ln |Gamma(1/4 + i w/(2 pi))|"),
    f("binom", 2, "binomial coefficient C(n, k), integer n >= 0"),
    f("kron", 2, "Kronecker delta"),
];

pub fn lookup_function(name: &str) -> Option<&'static FuncSpec> {
    FUNCTIONS.iter().find(|s| s.name == name)
}

fn int_arg(func: &'static str, x: f64, min: f64) -> Result<i64, EvalError> {
    if x.fract() != 0.0 || !x.is_finite() {
        return Err(EvalError::NotInteger { func, value: x });
    }
    if x < min {
        return Err(EvalError::Domain {
            func,
            value: x,
            reason: "argument below allowed minimum",
        });
    }
    Ok(x as i64)
}

fn index_arg(func: &'static str, x: f64) -> Result<u32, EvalError> {
    bounded_arg(func, x, 0.0, 200)
}

// Integer arguments that set a loop length.
fn bounded_arg(func: &'static str, x: f64, min: f64, max: i64) -> Result<u32, EvalError> {
    let n = int_arg(func, x, min)?;
    if n > max {
        return Err(EvalError::Domain {
            func,
            value: x,
            reason: "integer argument too large",
        });
    }
    Ok(n as u32)
}

fn rational(x: f64) -> exact::BigRational {
    exact::from_f64(x).expect("finite argument")
}

pub(super) fn real_pow(x: f64, y: f64) -> Result<f64, EvalError> {
    if x < 0.0 && y.fract() != 0.0 {
        return Err(EvalError::Domain {
            func: "pow",
            value: x,
            reason: "negative base with non-integer exponent",
        });
    }
    if x == 0.0 && y < 0.0 {
        return Err(EvalError::Domain {
            func: "pow",
            value: x,
            reason: "zero to a negative power",
        });
    }
    if y.fract() == 0.0 && y.abs() <= 64.0 {
        Ok(x.powi(y as i32))
    } else {
        Ok(x.powf(y))
    }
}

/// Evaluate a registered function on binary64 arguments.
pub fn call_numeric(name: &str, args: &[f64]) -> Result<f64, EvalError> {
    let spec = lookup_function(name).ok_or_else(|| EvalError::UnknownFunction(name.to_string()))?;
    if args.len() != spec.arity {
        return Err(EvalError::Arity {
            func: spec.name,
            expected: spec.arity,
            got: args.len(),
        });
    }
    let func = spec.name;
    let x = args[0];
    let dom = |reason: &'static str| EvalError::Domain { func, value: x, reason };
    let v = match func {
        "sin" => x.sin(),
        "cos" => x.cos(),
        "tan" => x.tan(),
        "arctan" => x.atan(),
        "sinh" => x.sinh(),
        "cosh" => x.cosh(),
        "tanh" => x.tanh(),
        "exp" => x.exp(),
        "ln" => {
            if x <= 0.0 {
                return Err(dom("requires x > 0"));
            }
            x.ln()
        }
        "sqrt" => {
            if x < 0.0 {
                return Err(dom("requires x >= 0"));
            }
            x.sqrt()
        }
        "abs" => x.abs(),
        "pow" => real_pow(x, args[1])?,
        "fact" => {
            let n = int_arg(func, x, 0.0)?;
            if n > 170 {
                return Err(dom("overflows binary64"));
            }
            specfun::gammafn(n as f64 + 1.0)?
        }
        "gammafn" => specfun::gammafn(x)?,
        "loggamma" => specfun::log_gamma(x)?,
        "digamma" => specfun::digamma(x)?,
        "polygamma" => specfun::polygamma(bounded_arg(func, x, 0.0, 200)?, args[1])?,
        "hzeta" => specfun::hurwitz_zeta(Dual::cst(x), args[1])?.v,
        "hzeta_ds" => specfun::hurwitz_zeta(Dual::var(x), args[1])?.d,
        "eta" => specfun::eta_alt(Dual::cst(x), args[1])?.v,
        "eta_ds" => specfun::eta_alt(Dual::var(x), args[1])?.d,
        "S" => specfun::s_of(Dual::cst(x), args[1])?.v,
        "S_ds" => specfun::s_of(Dual::var(x), args[1])?.d,
        "zetap" => specfun::zeta_prime_at(x)?,
        "betadir" => specfun::dirichlet_beta(Dual::cst(x))?.v,
        "eulerpoly" => exact::to_f64(&exact::euler_poly(index_arg(func, x)?, &rational(args[1]))),
        "eulernum" => exact::to_f64(&exact::euler_number(index_arg(func, x)?)),
        "bernpoly" => exact::to_f64(&exact::bernoulli_poly(index_arg(func, x)?, &rational(args[1]))),
        "bernnum" => exact::to_f64(&exact::bernoulli_number(index_arg(func, x)?)),
        "laguerre" => specfun::laguerre(bounded_arg(func, x, 0.0, 200)?, args[1], args[2]),
        "h2f1_arctan" => specfun::hyp2f1_arctan_case(bounded_arg(func, x, 0.0, 200)?, args[1])?,
        "h2f1_log" => specfun::hyp2f1_log_case(bounded_arg(func, x, 0.0, 200)?, args[1])?,
        "h3f2" => specfun::hyp3f2_reduction(bounded_arg(func, x, 1.0, 200)?, args[1])?,
        "impsi_quarter" => specfun::im_digamma_quarter(x),
        "relgamma_quarter" => specfun::re_log_gamma_quarter(x),
        "binom" => {
            let n = bounded_arg(func, x, 0.0, 10_000)?;
            let k = int_arg(func, args[1], f64::NEG_INFINITY)?;
            exact::to_f64(&exact::BigRational::from_integer(exact::binomial(u64::from(n), k)))
        }
        "kron" => {
            if x == args[1] {
                1.0
            } else {
                0.0
            }
        }
        _ => unreachable!("registry and dispatch out of sync: {func}"),
    };
    if !v.is_finite() {
        return Err(EvalError::NonFinite { func });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_registered_function_dispatches() {
        let probe = |n: usize| -> Vec<f64> {
            match n {
                1 => vec![1.0],
                2 => vec![2.0, 0.5],
                _ => vec![2.0, 0.5, 0.3],
            }
        };
        for s in FUNCTIONS {
            let args = match s.name {
                "h3f2" => vec![1.0, -0.5],
                "zetap" => vec![2.0],
                "binom" => vec![4.0, 2.0],
                _ => probe(s.arity),
            };
            let r = call_numeric(s.name, &args);
            assert!(r.is_ok(), "{}: {r:?}", s.name);
        }
    }

    #[test]
    fn loop_lengths_are_bounded() {
        for (f, args) in [
            ("polygamma", vec![1e9, 1.0]),
            ("laguerre", vec![4e9, 0.5, 1.0]),
            ("h2f1_log", vec![1e12, 0.5]),
            ("h3f2", vec![1e6, -0.5]),
            ("binom", vec![1e15, 5e14]),
            ("eulernum", vec![201.0]),
        ] {
            assert!(matches!(call_numeric(f, &args), Err(EvalError::Domain { .. })), "{f}");
        }
    }

    #[test]
    fn registry_is_closed() {
        assert_eq!(FUNCTIONS.len(), 37);
        assert!(lookup_function("zeta").is_none());
        assert!(matches!(call_numeric("sin", &[1.0, 2.0]), Err(EvalError::Arity { .. })));
    }

    #[test]
    fn integer_slots_are_checked() {
        assert!(matches!(call_numeric("fact", &[2.5]), Err(EvalError::NotInteger { .. })));
        assert!(matches!(call_numeric("eulernum", &[-2.0]), Err(EvalError::Domain { .. })));
        assert_eq!(call_numeric("kron", &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(call_numeric("kron", &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(call_numeric("binom", &[5.0, 2.0]).unwrap(), 10.0);
        assert_eq!(call_numeric("eulernum", &[4.0]).unwrap(), 5.0);
    }

    #[test]
    fn domain_errors_surface() {
        assert!(call_numeric("ln", &[0.0]).is_err());
        assert!(call_numeric("hzeta", &[1.0, 1.0]).is_err());
        assert!(call_numeric("pow", &[-2.0, 0.5]).is_err());
        assert_eq!(call_numeric("pow", &[-2.0, 3.0]).unwrap(), -8.0);
    }
}
