//! Laguerre polynomials and the hypergeometric reductions with arctan and
//! log closed forms.

use std::f64::consts::PI;

use super::{domain, gammafn, SpecResult};

/// Generalised Laguerre `L(n, alpha, x)`; the coefficient
/// `Gamma(n+alpha+1) / Gamma(alpha+j+1)` is the product
/// `(alpha+j+1) ... (alpha+n)`, so any real `alpha` works.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut acc = 0.0;
    let mut xj = 1.0;
    let mut jfact = 1.0;
    for j in 0..=n {
        let mut c = 1.0;
        for i in j + 1..=n {
            c *= (alpha + i as f64) / (i - j) as f64;
        }
        let term = c * xj / jfact;
        acc += if j % 2 == 0 { term } else { -term };
        xj *= x;
        jfact *= (j + 1) as f64;
    }
    acc
}

// 2F1(1, b; b+1; -x) = sum_k b/(b+k) (-x)^k, for x < 1.
fn f21_series(b: f64, x: f64) -> f64 {
    let mut acc = 0.0;
    let mut p = 1.0;
    for k in 0..4000 {
        let term = b / (b + k as f64) * p;
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
        p *= -x;
    }
    acc
}

const SERIES_BELOW: f64 = 0.25;

fn check_t(func: &'static str, t: f64) -> SpecResult<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        domain(func, t, "requires t >= 0")
    }
}

/// `2F1(1, 3/2+j; 5/2+j; -4t^2)` by the arctan closed form; the power
/// series takes over for `4t^2 <= 1/4` where the closed form cancels.
pub fn hyp2f1_arctan_case(j: u32, t: f64) -> SpecResult<f64> {
    check_t("h2f1_arctan", t)?;
    let x = 4.0 * t * t;
    if x <= SERIES_BELOW {
        return Ok(f21_series(1.5 + j as f64, x));
    }
    let mut bracket = 2.0 * t * (2.0 * t).atan();
    let mut p = 1.0;
    for q in 1..=j + 1 {
        p *= -x;
        bracket += p / (2 * q - 1) as f64;
    }
    let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
    Ok(sign * (2 * j + 3) as f64 / x.powi(j as i32 + 2) * bracket)
}

/// `2F1(1, k+1; k+2; -4t^2)` by the log closed form.
pub fn hyp2f1_log_case(k: u32, t: f64) -> SpecResult<f64> {
    check_t("h2f1_log", t)?;
    let x = 4.0 * t * t;
    if x <= SERIES_BELOW {
        return Ok(f21_series(k as f64 + 1.0, x));
    }
    let mut bracket = x.ln_1p();
    let mut p = 1.0;
    for q in 1..=k {
        p *= -x;
        bracket += p / q as f64;
    }
    Ok(-((k + 1) as f64) / (-x).powi(k as i32 + 1) * bracket)
}

/// `3F2(1, 1, 3/2; 2+m, 3/2+m; z)` for `z <= 0` from the double sum over
/// the two 2F1 cases, with `z = -4t^2`.
pub fn hyp3f2_reduction(m: u32, z: f64) -> SpecResult<f64> {
    if m == 0 {
        return domain("h3f2", m as f64, "requires m >= 1");
    }
    if !(z <= 0.0) || !z.is_finite() {
        return domain("h3f2", z, "requires z <= 0");
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let t = (-z).sqrt() / 2.0;
    let fact = |n: u32| (1..=n).map(|k| k as f64).product::<f64>();
    let mf = m as f64;
    let pref = 2.0 * gammafn(2.0 + mf)? * gammafn(mf + 1.5)? / PI.sqrt();
    let mut acc = 0.0;
    for k in 0..=m {
        let h2 = hyp2f1_log_case(k, t)?;
        for j in 0..m {
            let h1 = hyp2f1_arctan_case(j, t)?;
            let (kf, jf) = (k as f64, j as f64);
            let c = fact(m - k) * fact(m - 1 - j) * fact(k) * fact(j);
            let sign = if (k + j) % 2 == 0 { 1.0 } else { -1.0 };
            let inner = h1 / ((1.5 + jf) * (-0.5 + kf - jf)) + h2 / ((kf + 1.0) * (0.5 + jf - kf));
            acc += sign / c * inner;
        }
    }
    Ok(pref * acc)
}

/// Direct power series of the same 3F2, for `|z| < 1`.
pub fn hyp3f2_series(m: u32, z: f64) -> SpecResult<f64> {
    if !(z.abs() < 1.0) {
        return domain("h3f2_series", z, "requires |z| < 1");
    }
    let mf = m as f64;
    let mut acc: f64 = 0.0;
    let mut term: f64 = 1.0;
    for k in 0..5000 {
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
        let kf = k as f64;
        term *= (kf + 1.0) * (kf + 1.5) / ((kf + 2.0 + mf) * (kf + 1.5 + mf)) * z;
    }
    Ok(acc)
}
