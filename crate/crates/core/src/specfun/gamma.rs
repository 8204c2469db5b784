//! Gamma, log-gamma, digamma and polygamma on the real line.

use std::f64::consts::PI;

use super::{bernoulli_even, domain, hurwitz_zeta, Dual, SpecError, SpecResult};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_617_639_861;

/// `psi(x)` for `x > 0`: upward recurrence to `x >= 10`, then the
/// asymptotic series.
pub fn digamma(x: f64) -> SpecResult<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return domain("digamma", x, "requires x > 0");
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let b = bernoulli_even();
    let x2 = 1.0 / (x * x);
    let mut p = x2;
    let mut series = 0.0;
    for k in 1..=8 {
        series += b[k] / (2 * k) as f64 * p;
        p *= x2;
    }
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> SpecResult<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return domain("log_gamma", x, "requires x > 0");
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut x = x;
    let mut prod = 1.0;
    while x < 15.0 {
        prod *= x;
        x += 1.0;
    }
    let b = bernoulli_even();
    let xi = 1.0 / x;
    let x2 = xi * xi;
    let mut p = xi;
    let mut series = 0.0;
    for k in 1..=8 {
        series += b[k] / ((2 * k) * (2 * k - 1)) as f64 * p;
        p *= x2;
    }
    Ok((x - 0.5) * x.ln() - x + LN_SQRT_2PI + series - prod.ln())
}

/// `Gamma(x)`; exact products at positive integers, reflection below 1/2.
pub fn gammafn(x: f64) -> SpecResult<f64> {
    if !x.is_finite() {
        return domain("gammafn", x, "requires finite x");
    }
    if x <= 0.0 && x == x.floor() {
        return Err(SpecError::Pole { func: "gammafn", at: x });
    }
    if x == x.floor() && x <= 171.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    if x < 0.5 {
        let g = gammafn(1.0 - x)?;
        return Ok(PI / ((PI * x).sin() * g));
    }
    // reduce to [1, 2) so the exponentiated log stays small
    let mut y = x;
    let mut scale = 1.0;
    while y >= 2.0 {
        y -= 1.0;
        scale *= y;
    }
    while y < 1.0 {
        scale /= y;
        y += 1.0;
    }
    Ok(scale * log_gamma(y)?.exp())
}

/// `psi^(m)(x) = (-1)^(m+1) m! zeta(m+1, x)`.
pub fn polygamma(m: u32, x: f64) -> SpecResult<f64> {
    if m == 0 {
        return digamma(x);
    }
    if !(x > 0.0 && x.is_finite()) {
        return domain("polygamma", x, "requires x > 0");
    }
    let fact: f64 = (1..=m).map(|k| k as f64).product();
    let z = hurwitz_zeta(Dual::cst(m as f64 + 1.0), x)?.v;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * fact * z)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;
    const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn digamma_examples() {
        assert!(close(digamma(1.0).unwrap(), -EULER_GAMMA, 1e-15));
        // duplication: psi(2x) = psi(x)/2 + psi(x+1/2)/2 + ln 2 at x = 1/2
        let half = digamma(0.5).unwrap();
        assert!(close(half, -EULER_GAMMA - 2.0 * std::f64::consts::LN_2, 1e-14));
        let d = digamma(7.0 / 8.0).unwrap() - digamma(3.0 / 8.0).unwrap();
        let want = 2f64.sqrt() * (PI - 2.0 * (2f64.sqrt() + 1.0).ln());
        assert!(close(d, want, 1e-13), "{d} vs {want}");
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
    }

    #[test]
    fn digamma_recurrence_property() {
        for i in 1..200 {
            let x = 0.05 * i as f64;
            let l = digamma(x + 1.0).unwrap();
            let r = digamma(x).unwrap() + 1.0 / x;
            assert!((l - r).abs() < 2e-14 * l.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!(close(log_gamma(0.5).unwrap(), 0.5 * PI.ln(), 1e-14));
        // Gamma(1/4) Gamma(3/4) = pi sqrt 2
        let l = log_gamma(0.75).unwrap();
        let refl = (PI * 2f64.sqrt()).ln() - log_gamma(0.25).unwrap();
        assert!(close(l, refl, 1e-13));
        assert!(close(l, 0.203_280_951_431_295_37, 1e-13));
        assert!(log_gamma(0.0).is_err());
        let lf: f64 = (1..=30).map(|k| (k as f64).ln()).sum();
        assert!(close(log_gamma(31.0).unwrap(), lf, 1e-14));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gammafn(5.0).unwrap(), 24.0);
        assert!(close(gammafn(0.5).unwrap(), PI.sqrt(), 1e-14));
        assert!(close(gammafn(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-14));
        assert!(close(gammafn(3.5).unwrap(), 1.875 * PI.sqrt(), 1e-14));
        assert!(gammafn(0.0).is_err());
        assert!(gammafn(-3.0).is_err());
    }

    #[test]
    fn polygamma_examples() {
        let t = polygamma(1, 0.75).unwrap();
        assert!(close(t, PI * PI - 8.0 * CATALAN, 1e-13));
        assert!(close(polygamma(1, 1.0).unwrap(), PI * PI / 6.0, 1e-14));
        let beta4 = 0.988_944_551_741_105_3;
        assert!(close(polygamma(3, 0.25).unwrap(), 8.0 * PI.powi(4) + 768.0 * beta4, 1e-13));
        assert!(polygamma(2, -1.0).is_err());
    }
}
