//! Tanh-sinh quadrature on finite panels, and two drivers for `[0, inf)`:
//! a fixed truncation for integrands with a declared exponential decay
//! rate, and an adaptive march used by the expression evaluator.

use std::f64::consts::FRAC_PI_2;

pub const DEFAULT_EVAL_CAP: u64 = 2_000_000;
pub const EVAL_CAP_ENV: &str = "ZETASECH_EVAL_CAP";

/// Worst polynomial growth assumed when truncating a decaying integrand.
const P_MAX: i32 = 8;
const MIN_LEVEL: u32 = 3;
const TINY_WEIGHT: f64 = 1e-300;
/// Nodes nearer an endpoint than this fraction of the half-width are
/// dropped; what they would add to an integrable singularity like x^-1/2
/// is far below binary64 resolution.
const MIN_GAP: f64 = 1e-150;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Target error relative to the integral of `|f|`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_level: u32,
    pub eval_cap: u64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_level: 10,
            eval_cap: eval_cap_from_env(),
        }
    }
}

/// The evaluation cap, honouring `ZETASECH_EVAL_CAP` when it parses.
pub fn eval_cap_from_env() -> u64 {
    std::env::var(EVAL_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_EVAL_CAP)
}

struct Panel {
    value: f64,
    err: f64,
    l1: f64,
    converged: bool,
}

struct Counter {
    evals: u64,
    cap: u64,
}

impl Counter {
    fn exhausted(&self) -> bool {
        self.evals >= self.cap
    }
}

// Distance from the nearer endpoint and the weight of node t >= 0, both
// scaled by the half-width.
fn node(t: f64, half: f64) -> (f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let e2 = (-2.0 * u).exp();
    let d = half * 2.0 * e2 / (1.0 + e2);
    let w = half * FRAC_PI_2 * t.cosh() * 4.0 * e2 / ((1.0 + e2) * (1.0 + e2));
    (d, w)
}

// Sum of f*w and |f|*w over the nodes t = (first + 2j) * h, j >= 0.
fn sweep<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    h: f64,
    first: u64,
    step: u64,
    ctr: &mut Counter,
) -> Result<(f64, f64), QuadError> {
    let half = 0.5 * (hi - lo);
    let mut eval = |x: f64, ctr: &mut Counter| -> Result<f64, QuadError> {
        ctr.evals += 1;
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };
    let (mut s, mut a) = (0.0, 0.0);
    let mut k = first;
    loop {
        let t = k as f64 * h;
        if t == 0.0 {
            let (_, w) = node(0.0, half);
            let y = eval(lo + half, ctr)?;
            s += y * w;
            a += y.abs() * w;
        } else {
            let (d, w) = node(t, half);
            if w < TINY_WEIGHT || d < MIN_GAP * half {
                break;
            }
            let xl = lo + d;
            let xr = hi - d;
            if xl == lo && xr == hi {
                break;
            }
            if xl > lo {
                let y = eval(xl, ctr)?;
                s += y * w;
                a += y.abs() * w;
            }
            if xr < hi {
                let y = eval(xr, ctr)?;
                s += y * w;
                a += y.abs() * w;
            }
        }
        k += step;
    }
    Ok((s, a))
}

// Tanh-sinh on [lo, hi]. Stops when successive levels differ by at most
// max(abs_target, rel_tol * max(own L1, scale_l1)).
fn panel<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    abs_target: f64,
    rel_tol: f64,
    scale_l1: f64,
    max_level: u32,
    ctr: &mut Counter,
) -> Result<Panel, QuadError> {
    let (mut raw, mut raw_abs) = sweep(f, lo, hi, 1.0, 0, 1, ctr)?;
    let mut prev = raw;
    let mut h = 1.0;
    for level in 1..=max_level {
        h *= 0.5;
        let (s, a) = sweep(f, lo, hi, h, 1, 2, ctr)?;
        raw += s;
        raw_abs += a;
        let value = raw * h;
        let l1 = raw_abs * h;
        let diff = (value - prev).abs();
        prev = value;
        let floor = 8.0 * f64::EPSILON * l1;
        let target = abs_target.max(rel_tol * l1.max(scale_l1));
        let done = level >= MIN_LEVEL && (diff <= target || diff <= floor);
        if done || level == max_level || ctr.exhausted() {
            return Ok(Panel {
                value,
                err: diff + floor,
                l1,
                converged: done,
            });
        }
    }
    unreachable!("loop returns at max_level")
}

/// Tanh-sinh on a finite interval to absolute tolerance `tol`.
///
/// The endpoints themselves are never evaluated, so integrable endpoint
/// singularities such as `ln x` at 0 are fine.
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    integrate_finite_with(&mut f, lo, hi, tol, &QuadConfig::default())
}

pub fn integrate_finite_with<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    tol: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidInterval { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(QuadError::InvalidTolerance(tol));
    }
    let mut ctr = Counter {
        evals: 0,
        cap: cfg.eval_cap,
    };
    let p = panel(f, lo, hi, tol, 0.0, 0.0, cfg.max_level, &mut ctr)?;
    Ok(QuadResult {
        value: p.value,
        abs_error_estimate: p.err,
        evaluations: ctr.evals,
        converged: p.converged,
    })
}

/// `int_0^inf f` for `|f(v)| <= C exp(-rate v) v^p` with `p <= 8`.
///
/// Truncates at the first `V` with `exp(-rate V) V^8 < tol` and covers
/// `[0, V]` with panels of doubling width.
pub fn integrate_decaying<F: FnMut(f64) -> f64>(
    mut f: F,
    decay_rate: f64,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    integrate_decaying_with(&mut f, decay_rate, tol, &QuadConfig::default())
}

pub fn truncation_point(decay_rate: f64, tol: f64) -> f64 {
    let mut v: f64 = 1.0;
    while (-decay_rate * v).exp() * v.powi(P_MAX) >= tol && v < 1e6 {
        v *= 1.05;
    }
    v
}

pub fn integrate_decaying_with<F: FnMut(f64) -> f64>(
    f: &mut F,
    decay_rate: f64,
    tol: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    if !(decay_rate > 0.0 && decay_rate.is_finite()) {
        return Err(QuadError::InvalidInterval { lo: 0.0, hi: f64::INFINITY });
    }
    if !(tol > 0.0) {
        return Err(QuadError::InvalidTolerance(tol));
    }
    let v_end = truncation_point(decay_rate, tol);
    let mut edges = vec![0.0];
    let mut x = 1.0f64.min(v_end);
    while x < v_end {
        edges.push(x);
        x *= 2.0;
    }
    edges.push(v_end);
    let n_panels = (edges.len() - 1) as f64;
    let mut ctr = Counter {
        evals: 0,
        cap: cfg.eval_cap,
    };
    let (mut value, mut err, mut l1) = (0.0, tol, 0.0);
    let mut converged = true;
    for w in edges.windows(2) {
        let p = panel(f, w[0], w[1], tol / n_panels, cfg.rel_tol, l1, cfg.max_level, &mut ctr)?;
        value += p.value;
        err += p.err;
        l1 += p.l1;
        converged &= p.converged;
        if ctr.exhausted() {
            converged = false;
            break;
        }
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: err,
        evaluations: ctr.evals,
        converged,
    })
}

/// `int_0^inf f` without a declared decay rate.
///
/// Marches outward with unit panels up to 16, then panels of half the
/// current abscissa. Stops once the last two panels and a geometric tail
/// extrapolation are below `max(abs_tol, rel_tol * int |f|)`; the tail
/// estimate is added to the error.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    f: &mut F,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    let mut ctr = Counter {
        evals: 0,
        cap: cfg.eval_cap,
    };
    let (mut value, mut err, mut l1) = (0.0, 0.0, 0.0);
    let mut converged = true;
    let mut last_l1 = f64::INFINITY;
    let mut t = 0.0f64;
    loop {
        let w = if t < 16.0 { 1.0 } else { 0.5 * t };
        let p = panel(f, t, t + w, cfg.abs_tol, cfg.rel_tol, l1, cfg.max_level, &mut ctr)?;
        value += p.value;
        err += p.err;
        l1 += p.l1;
        t += w;
        let prev_l1 = std::mem::replace(&mut last_l1, p.l1);
        if !p.converged || ctr.exhausted() {
            converged = false;
            break;
        }
        let tol_eff = cfg.abs_tol.max(cfg.rel_tol * l1);
        if t >= 8.0 && prev_l1 + last_l1 <= tol_eff {
            let tail = if last_l1 == 0.0 {
                0.0
            } else {
                let r = last_l1 / prev_l1;
                if r < 0.9 {
                    last_l1 * r / (1.0 - r)
                } else {
                    f64::INFINITY
                }
            };
            if tail <= tol_eff {
                err += tail;
                break;
            }
        }
        if t > 1e7 {
            converged = false;
            break;
        }
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: err,
        evaluations: ctr.evals,
        converged,
    })
}
