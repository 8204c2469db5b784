//! Forward-mode dual numbers carrying one derivative, used for `d/ds`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub const fn new(v: f64, d: f64) -> Self {
        Self { v, d }
    }

    pub const fn cst(v: f64) -> Self {
        Self { v, d: 0.0 }
    }

    pub const fn var(v: f64) -> Self {
        Self { v, d: 1.0 }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Self::new(e, e * self.d)
    }

    pub fn ln(self) -> Self {
        Self::new(self.v.ln(), self.d / self.v)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        Self::new(r, self.d / (2.0 * r))
    }

    pub fn sin(self) -> Self {
        Self::new(self.v.sin(), self.v.cos() * self.d)
    }

    pub fn cos(self) -> Self {
        Self::new(self.v.cos(), -self.v.sin() * self.d)
    }

    pub fn atan(self) -> Self {
        Self::new(self.v.atan(), self.d / (1.0 + self.v * self.v))
    }

    /// `x^y` for a positive constant base.
    pub fn pow_base(x: f64, y: Dual) -> Self {
        let p = x.powf(y.v);
        Self::new(p, p * x.ln() * y.d)
    }

    /// `self^y` for positive `self`.
    pub fn powd(self, y: Dual) -> Self {
        (y * self.ln()).exp()
    }

    pub fn powi(self, n: i32) -> Self {
        let p = self.v.powi(n);
        let dp = if n == 0 {
            0.0
        } else {
            n as f64 * self.v.powi(n - 1) * self.d
        };
        Self::new(p, dp)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.v * k, self.d * k)
    }

    pub fn is_finite(self) -> bool {
        self.v.is_finite() && self.d.is_finite()
    }
}

impl From<f64> for Dual {
    fn from(v: f64) -> Self {
        Self::cst(v)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(self, o: f64) -> Dual {
        Dual::new(self.v + o, self.d)
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    fn sub(self, o: f64) -> Dual {
        Dual::new(self.v - o, self.d)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, o: f64) -> Dual {
        self.scale(o)
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    fn div(self, o: f64) -> Dual {
        Dual::new(self.v / o, self.d / o)
    }
}

impl std::iter::Sum for Dual {
    fn sum<I: Iterator<Item = Dual>>(iter: I) -> Dual {
        iter.fold(Dual::cst(0.0), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-5;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn chain_rule_against_central_differences() {
        let g = |x: Dual| (x.sin() * x.exp() + x.atan()) / (x * x + 1.0).sqrt() - x.ln().cos();
        let gf = |x: f64| (x.sin() * x.exp() + x.atan()) / (x * x + 1.0).sqrt() - x.ln().cos();
        for x in [0.3, 1.0, 2.7] {
            let d = g(Dual::var(x));
            assert!((d.v - gf(x)).abs() < 1e-15);
            assert!((d.d - fd(gf, x)).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn powers() {
        let s = Dual::var(1.7);
        let p = Dual::pow_base(3.0, s);
        assert!((p.d - 3f64.powf(1.7) * 3f64.ln()).abs() < 1e-12);
        let q = Dual::cst(2.5).powd(s);
        assert!((q.v - p.v * (2.5f64 / 3.0).powf(1.7)).abs() < 1e-12);
        let r = s.powi(3);
        assert!((r.d - 3.0 * 1.7 * 1.7).abs() < 1e-12);
        assert_eq!(s.powi(0), Dual::cst(1.0));
    }
}
