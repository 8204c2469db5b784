//! `psi` and `ln Gamma` on the line `1/4 + i w / (2 pi)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli_even;

const SHIFT: usize = 10;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_617_639_861;

/// `Im psi(1/4 + i w/(2 pi)) = sum_{k>=0} c / ((k+1/4)^2 + c^2)`, `c = w/(2 pi)`.
///
/// The first terms are summed directly; the remainder is `Im psi` at the
/// shifted point, taken from the asymptotic series.
pub fn im_digamma_quarter(w: f64) -> f64 {
    let c = w / (2.0 * PI);
    let mut head = 0.0;
    for k in 0..SHIFT {
        let x = k as f64 + 0.25;
        head += c / (x * x + c * c);
    }
    let z = Complex64::new(SHIFT as f64 + 0.25, c);
    let b = bernoulli_even();
    let zi2 = (z * z).inv();
    let mut p = zi2;
    let mut series = Complex64::new(0.0, 0.0);
    for k in 1..=10 {
        series += p * (b[k] / (2 * k) as f64);
        p *= zi2;
    }
    let tail = z.ln() - z.inv() * 0.5 - series;
    head + tail.im
}

/// `Re ln Gamma(1/4 + i w/(2 pi)) = ln |Gamma(1/4 + i w/(2 pi))|`.
pub fn re_log_gamma_quarter(w: f64) -> f64 {
    let c = w / (2.0 * PI);
    let mut head = 0.0;
    for k in 0..SHIFT {
        let x = k as f64 + 0.25;
        head -= 0.5 * (x * x + c * c).ln();
    }
    let z = Complex64::new(SHIFT as f64 + 0.25, c);
    let b = bernoulli_even();
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut p = zi;
    let mut series = Complex64::new(0.0, 0.0);
    for k in 1..=10 {
        series += p * (b[k] / ((2 * k) * (2 * k - 1)) as f64);
        p *= zi2;
    }
    let stirling = (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series;
    head + stirling.re
}
