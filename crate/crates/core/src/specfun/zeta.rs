//! Hurwitz zeta, alternating Hurwitz eta, S(s, a) and Dirichlet beta.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use super::{bernoulli_over_factorial, domain, Dual, SpecError, SpecResult};

const POLE_GAP: f64 = 1e-9;
/// Below this, `zeta(s, a)` uses Hermite's integral instead of
/// Euler-Maclaurin, whose direct sum cancels badly for negative `s`.
const HERMITE_BELOW: f64 = -0.75;
const BERNOULLI_TERMS: usize = 15;
const CVZ_TERMS: usize = 40;

fn check_a(func: &'static str, a: f64) -> SpecResult<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        domain(func, a, "requires a > 0")
    }
}

/// `zeta(s, a)` with `d/ds`.
pub fn hurwitz_zeta(s: Dual, a: f64) -> SpecResult<Dual> {
    check_a("hurwitz_zeta", a)?;
    if (s.v - 1.0).abs() < POLE_GAP {
        return Err(SpecError::Pole {
            func: "hurwitz_zeta",
            at: s.v,
        });
    }
    if s.v < HERMITE_BELOW {
        hurwitz_zeta_hermite(s, a)
    } else {
        hurwitz_zeta_em(s, a)
    }
}

/// Euler-Maclaurin with shift `N` such that `N + a >= max(15, 2|s|)`.
pub fn hurwitz_zeta_em(s: Dual, a: f64) -> SpecResult<Dual> {
    check_a("hurwitz_zeta", a)?;
    if (s.v - 1.0).abs() < POLE_GAP {
        return Err(SpecError::Pole {
            func: "hurwitz_zeta",
            at: s.v,
        });
    }
    let n = (15f64.max(2.0 * s.v.abs()) - a).ceil().max(0.0);
    if s.v > 2.0 {
        // the whole tail past x is below 1e-18 of a^-s once (a/x)^s s^2 is
        let x = a * ((41.5 + 2.0 * s.v.ln()) / s.v).exp();
        let direct = (x - a).ceil().max(1.0);
        if direct < n {
            return Ok((0..direct as usize).map(|k| Dual::pow_base(k as f64 + a, -s)).sum());
        }
    }
    let n = n as usize;
    let mut sum = Dual::cst(0.0);
    for k in 0..n {
        sum = sum + Dual::pow_base(k as f64 + a, -s);
    }
    let x = n as f64 + a;
    let xs = Dual::pow_base(x, -s);
    let mut tail = xs * x / (s - 1.0) + xs * 0.5;
    // (s)_{2j-1} x^{-s-2j+1}
    let bf = bernoulli_over_factorial();
    let mut rising = s;
    let mut xp = xs / x;
    for j in 1..=BERNOULLI_TERMS {
        tail = tail + rising * xp * bf[j];
        rising = rising * (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        xp = xp / (x * x);
    }
    Ok(sum + tail)
}

// Exp-sinh nodes t = exp(pi/2 sinh u), u = k/32, keeping t <= 60.
fn exp_sinh_nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let h = 1.0 / 32.0;
        (-170..=170)
            .filter_map(|k| {
                let u = k as f64 * h;
                let t = (FRAC_PI_2 * u.sinh()).exp();
                let w = h * t * FRAC_PI_2 * u.cosh();
                (t <= 60.0 && w > 1e-300).then_some((t, w))
            })
            .collect()
    })
}

// int_0^inf sin(s atan(t/a)) (a^2+t^2)^(-s/2) kernel(t) dt
fn hermite_type_integral(s: Dual, a: f64, kernel: impl Fn(f64) -> f64) -> Dual {
    let mut acc = Dual::cst(0.0);
    for &(t, w) in exp_sinh_nodes() {
        let th = (t / a).atan();
        let arg = s * th;
        let g = arg.sin();
        let p = Dual::pow_base(a * a + t * t, s * -0.5);
        acc = acc + g * p * (w * kernel(t));
    }
    acc
}

/// Hermite's integral representation; valid for every `s != 1`.
pub fn hurwitz_zeta_hermite(s: Dual, a: f64) -> SpecResult<Dual> {
    check_a("hurwitz_zeta", a)?;
    if (s.v - 1.0).abs() < POLE_GAP {
        return Err(SpecError::Pole {
            func: "hurwitz_zeta",
            at: s.v,
        });
    }
    let pa = Dual::pow_base(a, -s);
    let head = pa * 0.5 + pa * a / (s - 1.0);
    let int = hermite_type_integral(s, a, |t| 1.0 / (2.0 * PI * t).exp_m1());
    Ok(head + int * 2.0)
}

/// `eta(s, a) = a^-s / 2 + int_0^inf sin(s atan(t/a)) (a^2+t^2)^(-s/2) / sinh(pi t) dt`.
pub fn eta_hermite(s: Dual, a: f64) -> SpecResult<Dual> {
    check_a("eta_alt", a)?;
    let head = Dual::pow_base(a, -s) * 0.5;
    Ok(head + hermite_type_integral(s, a, |t| 1.0 / (PI * t).sinh()))
}

// Cohen, Rodriguez Villegas and Zagier acceleration of sum (-1)^k (k+a)^-s,
// differentiated term by term.
fn eta_cvz(s: Dual, a: f64) -> Dual {
    let n = CVZ_TERMS;
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = Dual::cst(0.0);
    for k in 0..n {
        c = b - c;
        sum = sum + Dual::pow_base(k as f64 + a, -s) * c;
        let (kf, nf) = (k as f64, n as f64);
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

/// Alternating Hurwitz `eta(s, a) = sum_k (-1)^k (k+a)^-s`, entire in `s`.
pub fn eta_alt(s: Dual, a: f64) -> SpecResult<Dual> {
    check_a("eta_alt", a)?;
    if s.v >= 0.0 {
        Ok(eta_cvz(s, a))
    } else {
        eta_hermite(s, a)
    }
}

/// `S(s, a) = 2^s eta(s, 2a)`, checked against `zeta(s,a) - zeta(s,a+1/2)`
/// away from `s = 1`.
pub fn s_of(s: Dual, a: f64) -> SpecResult<Dual> {
    check_a("S", a)?;
    let via_eta = Dual::pow_base(2.0, s) * eta_alt(s, 2.0 * a)?;
    if (s.v - 1.0).abs() > 1e-6 {
        let z1 = hurwitz_zeta(s, a)?;
        let z2 = hurwitz_zeta(s, a + 0.5)?;
        let via_zeta = z1 - z2;
        let scale = 1f64.max(z1.v.abs()).max(z2.v.abs());
        if (via_zeta.v - via_eta.v).abs() > 1e-10 * scale {
            return Err(SpecError::CrossCheck {
                func: "S",
                a: via_eta.v,
                b: via_zeta.v,
            });
        }
    }
    Ok(via_eta)
}

/// Dirichlet `beta(s) = sum_k (-1)^k (2k+1)^-s`.
pub fn dirichlet_beta(s: Dual) -> SpecResult<Dual> {
    if (s.v - 1.0).abs() < 1e-3 {
        return Ok(Dual::pow_base(2.0, -s) * eta_alt(s, 0.5)?);
    }
    let d = hurwitz_zeta(s, 0.25)? - hurwitz_zeta(s, 0.75)?;
    Ok(Dual::pow_base(4.0, -s) * d)
}

/// `zeta'(s)` for the Riemann zeta function.
pub fn zeta_prime_at(s: f64) -> SpecResult<f64> {
    Ok(hurwitz_zeta(Dual::var(s), 1.0)?.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{self, BigRational};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    fn zeta3() -> f64 {
        1.202_056_903_159_594_285_399_738_161_511_449_990_765
    }

    #[test]
    fn zeta_examples() {
        let z = hurwitz_zeta(Dual::cst(2.0), 1.0).unwrap().v;
        assert!(close(z, PI * PI / 6.0, 1e-14));
        let z = hurwitz_zeta(Dual::cst(-1.0), 0.25).unwrap().v;
        assert!(close(z, 1.0 / 96.0, 1e-13), "{z}");
        let d = hurwitz_zeta(Dual::var(-2.0), 0.5).unwrap().d;
        assert!(close(d, 3.0 * zeta3() / (16.0 * PI * PI), 1e-12), "{d}");
    }

    #[test]
    fn direct_series_oracle() {
        // sum_{k<K} (k+a)^-s with an integral tail correction
        for &(s, a) in &[(2.0, 1.0), (3.5, 0.3), (6.0, 2.7)] {
            let big = 200_000usize;
            let mut acc = 0.0;
            for k in (0..big).rev() {
                acc += (k as f64 + a).powf(-s);
            }
            let x = big as f64 + a;
            acc += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
            let z = hurwitz_zeta(Dual::cst(s), a).unwrap().v;
            assert!(close(z, acc, 1e-12), "s={s} a={a}: {z} vs {acc}");
        }
    }

    #[test]
    fn routes_agree_in_overlap() {
        for s in [-3.5, -1.5, -0.5, 0.3, 2.5] {
            for a in [0.3, 1.0, 2.7] {
                let x = hurwitz_zeta_em(Dual::var(s), a).unwrap();
                let y = hurwitz_zeta_hermite(Dual::var(s), a).unwrap();
                assert!((x.v - y.v).abs() < 1e-9 * x.v.abs().max(1.0), "s={s} a={a}");
                assert!((x.d - y.d).abs() < 1e-9 * x.d.abs().max(1.0), "s={s} a={a}");
            }
        }
    }

    #[test]
    fn large_s_is_the_leading_terms() {
        let z = hurwitz_zeta(Dual::var(1e174), 1.0).unwrap();
        assert_eq!((z.v, z.d), (1.0, 0.0));
        let z = hurwitz_zeta(Dual::var(80.0), 1.5).unwrap();
        let want = 1.5f64.powf(-80.0) + 2.5f64.powf(-80.0);
        assert!((z.v / want - 1.0).abs() < 1e-15);
        let z = hurwitz_zeta(Dual::var(80.0), 2000.0).unwrap();
        assert!(z.v > 0.0 && z.v.is_finite());
    }

    #[test]
    fn pole_and_domain() {
        assert!(matches!(hurwitz_zeta(Dual::cst(1.0), 1.0), Err(SpecError::Pole { .. })));
        assert!(hurwitz_zeta(Dual::cst(2.0), 0.0).is_err());
        assert!(hurwitz_zeta(Dual::cst(2.0), -1.0).is_err());
        assert!(eta_alt(Dual::cst(2.0), 0.0).is_err());
        assert!(s_of(Dual::cst(2.0), -0.5).is_err());
    }

    #[test]
    fn eta_examples() {
        assert!(close(eta_alt(Dual::cst(0.0), 1.3).unwrap().v, 0.5, 1e-14));
        let e = eta_alt(Dual::cst(-3.0), 1.25).unwrap().v;
        let exact = exact::to_f64(&exact::euler_poly(3, &exact::rat(5, 4))) / 2.0;
        assert!(close(e, exact, 1e-12), "{e} vs {exact}");
        let d = eta_alt(Dual::var(1.0), 1.0).unwrap().d;
        let gamma = 0.577_215_664_901_532_860_606_512_090_082_402_431;
        let ln2 = std::f64::consts::LN_2;
        assert!(close(d, -ln2 * (ln2 - 2.0 * gamma) / 2.0, 1e-13), "{d}");
    }

    #[test]
    fn eta_from_zeta_halves() {
        for s in [-2.5, -0.4, 0.5, 2.3, 7.0] {
            for a in [0.3, 1.0, 2.7] {
                let e = eta_alt(Dual::cst(s), a).unwrap().v;
                let z = hurwitz_zeta(Dual::cst(s), a / 2.0).unwrap().v
                    - hurwitz_zeta(Dual::cst(s), (a + 1.0) / 2.0).unwrap().v;
                let z = 2f64.powf(-s) * z;
                assert!((e - z).abs() < 1e-10 * e.abs().max(1.0), "s={s} a={a}: {e} vs {z}");
            }
        }
    }

    #[test]
    fn s_examples() {
        let v = s_of(Dual::cst(2.0), 0.5).unwrap().v;
        assert!(close(v, PI * PI / 3.0, 1e-13));
        // s -> 1 limit: psi(q+1/2) - psi(q)
        let q = 0.6;
        let v = s_of(Dual::cst(1.0), q).unwrap().v;
        let lim = super::super::digamma(q + 0.5).unwrap() - super::super::digamma(q).unwrap();
        assert!(close(v, lim, 1e-13), "{v} vs {lim}");
        assert!(s_of(Dual::cst(2.3), 1.7).is_ok());
    }

    #[test]
    fn beta_examples() {
        let catalan = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;
        assert!(close(dirichlet_beta(Dual::cst(2.0)).unwrap().v, catalan, 1e-14));
        assert!(close(dirichlet_beta(Dual::cst(1.0)).unwrap().v, PI / 4.0, 1e-14));
        // Leibniz-type oracle with pairwise averaging of partial sums
        let mut partial = [0.0f64; 2];
        let mut acc = 0.0;
        let k_max = 100_000;
        for k in 0..=k_max {
            let t = (2.0 * k as f64 + 1.0).powi(-4);
            acc += if k % 2 == 0 { t } else { -t };
            if k >= k_max - 1 {
                partial[k - (k_max - 1)] = acc;
            }
        }
        let oracle = 0.5 * (partial[0] + partial[1]);
        assert!(close(dirichlet_beta(Dual::cst(4.0)).unwrap().v, oracle, 1e-12));
        assert!(close(oracle, 0.988_944_551_741_105_3, 1e-12));
    }

    #[test]
    fn zeta_prime_examples() {
        let zeta5 = 1.036_927_755_143_369_926_331_365_486_457_034_168_057;
        assert!(close(zeta_prime_at(-2.0).unwrap(), -zeta3() / (4.0 * PI * PI), 1e-12));
        assert!(close(zeta_prime_at(-4.0).unwrap(), 3.0 * zeta5 / (4.0 * PI.powi(4)), 1e-11));
        assert!(zeta_prime_at(1.0).is_err());
    }

    #[test]
    fn zeta_at_non_positive_integers_is_bernoulli() {
        for m in 1..=10u32 {
            for q in [exact::rat(1, 4), exact::rat(1, 2), exact::rat(3, 4), exact::rat(13, 10)] {
                let qf = exact::to_f64(&q);
                let z = hurwitz_zeta(Dual::cst(1.0 - m as f64), qf).unwrap().v;
                let b: BigRational = -exact::bernoulli_poly(m, &q) / exact::int(m as i64);
                let b = exact::to_f64(&b);
                assert!((z - b).abs() <= 1e-12 * b.abs().max(1.0), "m={m} q={qf}: {z} vs {b}");
            }
        }
    }

    #[test]
    fn eta_at_negative_integers_is_euler() {
        for m in 0..=10u32 {
            for z in [exact::rat(1, 4), exact::rat(5, 4), exact::rat(7, 2)] {
                let zf = exact::to_f64(&z);
                let e = eta_alt(Dual::cst(-(m as f64)), zf).unwrap().v;
                let x = exact::to_f64(&exact::eta_neg(m, &z));
                assert!((e - x).abs() <= 1e-12 * x.abs().max(1.0), "m={m} z={zf}: {e} vs {x}");
            }
        }
    }
}
