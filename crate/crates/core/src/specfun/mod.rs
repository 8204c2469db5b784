//! Binary64 special functions. Anything that depends on `s` takes a
//! [`Dual`] so the `s`-derivative comes along for free.

mod constants;
mod gamma;
mod hyper;
mod quarter;
mod zeta;

use std::sync::OnceLock;

pub use crate::dual::Dual;
pub use constants::{constants, ConstantTable, CONSTANT_NAMES};
pub use gamma::{digamma, gammafn, log_gamma, polygamma};
pub use hyper::{hyp2f1_arctan_case, hyp2f1_log_case, hyp3f2_reduction, hyp3f2_series, laguerre};
pub use quarter::{im_digamma_quarter, re_log_gamma_quarter};
pub use zeta::{
    dirichlet_beta, eta_alt, eta_hermite, hurwitz_zeta, hurwitz_zeta_em, hurwitz_zeta_hermite,
    s_of, zeta_prime_at,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("{func}: pole at {at}")]
    Pole { func: &'static str, at: f64 },
    #[error("{func}: argument {arg} out of domain ({reason})")]
    Domain {
        func: &'static str,
        arg: f64,
        reason: &'static str,
    },
    #[error("{func}: routes disagree ({a} vs {b})")]
    CrossCheck { func: &'static str, a: f64, b: f64 },
}

pub type SpecResult<T> = Result<T, SpecError>;

pub(crate) fn domain<T>(func: &'static str, arg: f64, reason: &'static str) -> SpecResult<T> {
    Err(SpecError::Domain { func, arg, reason })
}

/// `B(2k) / (2k)!` for `k = 0..=16`, from the exact table.
pub(crate) fn bernoulli_over_factorial() -> &'static [f64; 17] {
    static T: OnceLock<[f64; 17]> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = [0.0; 17];
        for (k, slot) in out.iter_mut().enumerate() {
            let n = 2 * k as u32;
            let r = crate::exact::bernoulli_number(n)
                / crate::exact::BigRational::from_integer(crate::exact::factorial(n));
            *slot = crate::exact::to_f64(&r);
        }
        out
    })
}

/// `B(2k)` for `k = 0..=16` as binary64.
pub(crate) fn bernoulli_even() -> &'static [f64; 17] {
    static T: OnceLock<[f64; 17]> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = [0.0; 17];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = crate::exact::to_f64(&crate::exact::bernoulli_number(2 * k as u32));
        }
        out
    })
}
