//! Named constants, computed once from the special functions above.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use super::{digamma, dirichlet_beta, hurwitz_zeta, Dual};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTable {
    pub pi: f64,
    pub ln2: f64,
    pub euler_gamma: f64,
    pub catalan: f64,
    /// `ln A = 1/12 - zeta'(-1)`.
    pub ln_glaisher: f64,
    /// `ln A3 = -11/720 - zeta'(-3)`.
    pub ln_glaisher3: f64,
}

impl ConstantTable {
    fn compute() -> Self {
        let euler_gamma = -digamma(1.0).expect("psi(1)");
        let catalan = dirichlet_beta(Dual::cst(2.0)).expect("beta(2)").v;
        let ln_2pi = (2.0 * PI).ln();
        // zeta'(-1) and zeta'(-3) through the functional equation, so only
        // the s > 1 side of zeta is involved
        let z2 = hurwitz_zeta(Dual::var(2.0), 1.0).expect("zeta(2)");
        let ln_glaisher = (euler_gamma + ln_2pi - 6.0 * z2.d / (PI * PI)) / 12.0;
        let z4 = hurwitz_zeta(Dual::var(4.0), 1.0).expect("zeta(4)");
        let psi4 = digamma(4.0).expect("psi(4)");
        let zp_m3 = -2.0 * (2.0 * PI).powi(-4) * 6.0 * (z4.v * (psi4 - ln_2pi) + z4.d);
        Self {
            pi: PI,
            ln2: LN_2,
            euler_gamma,
            catalan,
            ln_glaisher,
            ln_glaisher3: -11.0 / 720.0 - zp_m3,
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "pi" => self.pi,
            "ln2" => self.ln2,
            "euler_gamma" => self.euler_gamma,
            "catalan" => self.catalan,
            "ln_glaisher" => self.ln_glaisher,
            "ln_glaisher3" => self.ln_glaisher3,
            _ => return None,
        })
    }
}

pub const CONSTANT_NAMES: [&str; 6] = ["pi", "ln2", "euler_gamma", "catalan", "ln_glaisher", "ln_glaisher3"];

pub fn constants() -> &'static ConstantTable {
    static T: OnceLock<ConstantTable> = OnceLock::new();
    T.get_or_init(ConstantTable::compute)
}
