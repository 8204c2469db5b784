//! Exact rational arithmetic for Bernoulli and Euler numbers and polynomials,
//! plus the hand-coded residuals of the finite-sum identities (group C).
//!
//! Conventions: `B(1) = -1/2`, so `B(n) = B(n, 0)`; Euler numbers are the
//! integers `E(n) = 2^n E(n, 1/2)` with `E(odd) = 0`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;

/// Largest index served from the precomputed Bernoulli table.
const TABLE_LEN: usize = 96;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("unknown exact identity `{0}`")]
    UnknownIdentity(String),
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParam {
        name: String,
        value: String,
        reason: &'static str,
    },
    #[error("division by zero")]
    DivisionByZero,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

/// C(n, k); zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `x^e` for a signed integer exponent.
pub fn powi(x: &BigRational, e: i64) -> Result<BigRational, ExactError> {
    if e < 0 {
        if x.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(num_traits::pow(x.recip(), e.unsigned_abs() as usize))
    } else {
        Ok(num_traits::pow(x.clone(), e as usize))
    }
}

fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| (0..TABLE_LEN).map(|n| akiyama_tanigawa(n as u32)).collect())
}

// Akiyama-Tanigawa produces B(n) with B(1) = +1/2.
fn akiyama_tanigawa(n: u32) -> BigRational {
    let n = n as usize;
    let mut a: Vec<BigRational> = (0..=n).map(|m| rat(1, m as i64 + 1)).collect();
    for m in 0..=n {
        a[m] = rat(1, m as i64 + 1);
        for j in (1..=m).rev() {
            a[j - 1] = int(j as i64) * (&a[j - 1] - &a[j]);
        }
    }
    let b = a[0].clone();
    if n == 1 {
        -b
    } else {
        b
    }
}

/// Bernoulli number `B(n)` with `B(1) = -1/2`.
pub fn bernoulli_number(n: u32) -> BigRational {
    match bernoulli_table().get(n as usize) {
        Some(b) => b.clone(),
        None if n % 2 == 1 => BigRational::zero(),
        None => akiyama_tanigawa(n),
    }
}

/// Euler number `E(n)` (integers; zero for odd `n`).
pub fn euler_number(n: u32) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    // sum over even k of C(n, k) E(k) = 0 for even n > 0
    let mut e: Vec<BigInt> = Vec::with_capacity(n as usize / 2 + 1);
    e.push(BigInt::one());
    for m in (2..=n as u64).step_by(2) {
        let s: BigInt = (0..m)
            .step_by(2)
            .map(|k| binomial(m, k as i64) * &e[k as usize / 2])
            .sum();
        e.push(-s);
    }
    BigRational::from_integer(e[n as usize / 2].clone())
}

/// `B(n, x) = sum_k C(n,k) B(k) x^(n-k)`.
pub fn bernoulli_poly(n: u32, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    for k in (0..=n).rev() {
        let b = bernoulli_number(k);
        if !b.is_zero() {
            acc += BigRational::from_integer(binomial(n as u64, k as i64)) * b * &xp;
        }
        xp *= x;
    }
    acc
}

/// All of `E(0, x) ..= E(n, x)` by `E(m,x) = x^m - (1/2) sum_{k<m} C(m,k) E(k,x)`.
pub fn euler_poly_row(n: u32, x: &BigRational) -> Vec<BigRational> {
    let half = rat(1, 2);
    let mut row: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    let mut xp = BigRational::one();
    for m in 0..=n as u64 {
        let mut s = BigRational::zero();
        for (k, e) in row.iter().enumerate() {
            s += BigRational::from_integer(binomial(m, k as i64)) * e;
        }
        row.push(&xp - &half * s);
        xp *= x;
    }
    row
}

pub fn euler_poly(n: u32, x: &BigRational) -> BigRational {
    euler_poly_row(n, x).pop().expect("row is never empty")
}

/// `eta(-m, z) = E(m, z) / 2`.
pub fn eta_neg(m: u32, z: &BigRational) -> BigRational {
    euler_poly(m, z) / int(2)
}

/// `E(m, z)` expanded `k_steps` times downward:
/// `E(m,z) = -2 sum_{k=1}^{K} (-1)^k (z-k)^m + (-1)^K E(m, z-K)`.
pub fn euler_poly_shifted(m: u32, z: &BigRational, k_steps: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 1..=k_steps {
        let t = num_traits::pow(z - int(k as i64), m as usize);
        if k % 2 == 1 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc *= int(2);
    let tail = euler_poly(m, &(z - int(k_steps as i64)));
    if k_steps % 2 == 1 {
        acc - tail
    } else {
        acc + tail
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// One parameter point of a group-C identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactIdentityCase {
    pub id: String,
    pub params: BTreeMap<String, BigRational>,
}

impl ExactIdentityCase {
    pub fn new(id: &str) -> Self {
        Self {
            id: id.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: BigRational) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    fn get(&self, name: &str) -> Result<&BigRational, ExactError> {
        self.params
            .get(name)
            .ok_or_else(|| ExactError::MissingParam(name.to_string()))
    }

    fn nonneg(&self, name: &str) -> Result<u32, ExactError> {
        let v = self.get(name)?;
        let bad = |reason| ExactError::InvalidParam {
            name: name.to_string(),
            value: v.to_string(),
            reason,
        };
        if !v.is_integer() {
            return Err(bad("must be an integer"));
        }
        if v.is_negative() {
            return Err(bad("must be non-negative"));
        }
        v.to_integer().to_u32().ok_or_else(|| bad("too large"))
    }

    fn odd(&self, name: &str) -> Result<u32, ExactError> {
        let j = self.nonneg(name)?;
        if j % 2 == 0 {
            return Err(ExactError::InvalidParam {
                name: name.to_string(),
                value: j.to_string(),
                reason: "must be a positive odd integer",
            });
        }
        Ok(j)
    }

    fn nonzero(&self, name: &str) -> Result<&BigRational, ExactError> {
        let v = self.get(name)?;
        if v.is_zero() {
            return Err(ExactError::InvalidParam {
                name: name.to_string(),
                value: "0".into(),
                reason: "must be non-zero",
            });
        }
        Ok(v)
    }
}

/// Ids understood by [`exact_residual`].
pub const EXACT_IDENTITIES: &[&str] = &[
    "BernId1", "BernId2", "BernId3", "BernSum", "Cor1", "EuId", "EuRecur", "Euid1", "Ezm1", "New1A", "New3a",
    "New3c", "SaSum", "ScJ1", "Sx",
];

fn fact(n: u32) -> BigRational {
    BigRational::from_integer(factorial(n))
}

fn sign(k: u64) -> BigRational {
    if k % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

// (-1)^((J+1)/2)
fn sigma(j: u32) -> BigRational {
    sign((j as u64 + 1) / 2)
}

// sum_{k=1}^{(J-1)/2} (-1)^k (J^2 - 4k^2)^p
fn odd_sum(j: u32, p: u32) -> BigRational {
    let jj = j as i64;
    (1..=(jj - 1) / 2)
        .map(|k| sign(k as u64) * num_traits::pow(int(jj * jj - 4 * k * k), p as usize))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// `LHS - RHS` of a group-C identity, computed entirely in rationals.
pub fn exact_residual(case: &ExactIdentityCase) -> Result<BigRational, ExactError> {
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    match case.id.as_str() {
        "Cor1" | "Euid1" | "Sx" | "SaSum" | "BernId1" | "BernSum" => {
            let n = case.nonneg("n")?;
            let a = case.nonzero("a")?.clone();
            let two_q = (&a + int(1)) / int(2);
            let q = &two_q / int(2);
            let e = euler_poly_row(2 * n + 2, &two_q);
            match case.id.as_str() {
                "Cor1" => {
                    let r = -&a / int(2);
                    let mut lhs = BigRational::zero();
                    for j in 0..=2 * n {
                        lhs += powi(&r, -(j as i64))? * &e[j as usize + 1]
                            / (fact(j) * fact(2 * n - j));
                    }
                    let rhs = euler_number(2 * n)
                        / (int(2) * fact(2 * n) * powi(&a, 2 * n as i64 - 1)?);
                    Ok(lhs - rhs)
                }
                "Euid1" => {
                    let r = -&a / int(2);
                    let mut lhs = BigRational::zero();
                    for j in 0..=2 * n {
                        lhs += powi(&r, -(j as i64))? * &e[j as usize] / (fact(j) * fact(2 * n - j));
                    }
                    let rhs = euler_number(2 * n) / (fact(2 * n) * powi(&a, 2 * n as i64)?);
                    Ok(lhs - rhs)
                }
                "Sx" => {
                    let r = int(-2) / &a;
                    let mut lhs = BigRational::zero();
                    for j in 0..=2 * n + 1 {
                        let eta = &e[j as usize] / int(2);
                        lhs += powi(&r, j as i64)? * eta / (fact(2 * n + 1 - j) * fact(j));
                    }
                    Ok(lhs)
                }
                "SaSum" => {
                    // S(-m, q) = 2^-m eta(-m, 2q)
                    let s_neg = |m: u32| &e[m as usize] / int(2) / powi(&int(2), m as i64).unwrap();
                    let r = -&a / int(4);
                    let mut lhs = BigRational::zero();
                    for j in 0..=2 * n {
                        let t = s_neg(2 * n + 1 - j) - &a / int(4) * s_neg(2 * n - j);
                        lhs += powi(&r, j as i64)? * t / (fact(2 * n - j) * fact(j));
                    }
                    Ok(lhs)
                }
                "BernSum" => {
                    let r = -&a / int(4);
                    let qh = &q + &half;
                    let d = |m: u32| {
                        (bernoulli_poly(m, &q) - bernoulli_poly(m, &qh)) / int(m as i64)
                    };
                    let mut lhs = BigRational::zero();
                    for j in 0..=2 * n {
                        let t = d(j + 2) - &a / int(4) * d(j + 1);
                        lhs += powi(&r, (2 * n - j) as i64)? * t / (fact(2 * n - j) * fact(j));
                    }
                    Ok(lhs)
                }
                _ => {
                    let r = -&a / int(4);
                    let mut lhs = BigRational::zero();
                    for j in 0..=2 * n {
                        lhs += powi(&r, -(j as i64))? * bernoulli_poly(j + 1, &q)
                            / (fact(j + 1) * fact(2 * n - j));
                    }
                    let num = -bernoulli_poly(2 * n + 1, &(&q - &a / int(4)))
                        + powi(&r, 2 * n as i64 + 1)?;
                    let rhs = -num / (fact(2 * n + 1) * powi(&r, 2 * n as i64)?);
                    Ok(lhs - rhs)
                }
            }
        }
        "BernId2" => {
            let j = case.nonneg("j")?;
            let q = case.get("q")?;
            let lhs = bernoulli_poly(j + 2, &(q + &half)) - bernoulli_poly(j + 2, q);
            let rhs = int(j as i64 + 2) * euler_poly(j + 1, &(q * int(2)))
                / powi(&int(2), j as i64 + 2)?;
            Ok(lhs - rhs)
        }
        "BernId3" => {
            let n = case.nonneg("n")?;
            let m = 2 * n + 1;
            let rhs = -int(m as i64) * euler_number(2 * n) / powi(&int(4), m as i64)?;
            let b1 = bernoulli_poly(m, &quarter);
            let b3 = bernoulli_poly(m, &rat(3, 4));
            // both halves of the statement must hold; report the larger defect
            let r1 = &b1 - &rhs;
            let r2 = &b1 + &b3;
            Ok(if r1.abs() >= r2.abs() { r1 } else { r2 })
        }
        "EuId" => {
            let n = case.nonneg("n")?;
            Ok(euler_poly(n, &half) - euler_number(n) / powi(&int(2), n as i64)?)
        }
        "Ezm1" => {
            let m = case.nonneg("m")?;
            let z = case.get("z")?;
            let zm1 = z - int(1);
            Ok(euler_poly(m, z) - int(2) * num_traits::pow(zm1.clone(), m as usize)
                + euler_poly(m, &zm1))
        }
        "EuRecur" => {
            let m = case.nonneg("m")?;
            let k = case.nonneg("K")?;
            let z = case.get("z")?;
            Ok(euler_poly(m, z) - euler_poly_shifted(m, z, k as u64))
        }
        "ScJ1" => {
            let n = case.nonneg("n")?;
            let mut lhs = BigRational::zero();
            for j in 0..=n {
                lhs += powi(&-&half, j as i64)? * euler_number(n + j) / (fact(n - j) * fact(j));
            }
            Ok(lhs - powi(&half, n as i64)? / fact(n))
        }
        "New3a" | "New1A" => {
            let jj = case.odd("J")?;
            let n = case.nonneg("n")?;
            let jr = int(jj as i64);
            let z = &jr + &half;
            let r = -int(1) / &jr;
            let sg = sigma(jj);
            // eta(-m, J+1/2) via the downward expansion with K = J
            let eta = |m: u32| euler_poly_shifted(m, &z, jj as u64) / int(2);
            if case.id == "New3a" {
                let mut lhs = BigRational::zero();
                for j in 0..=n {
                    lhs += powi(&r, j as i64)? * eta(n + j) / (fact(n - j) * fact(j));
                }
                let rhs = -&sg * odd_sum(jj, n) / (powi(&(&jr * int(4)), n as i64)? * fact(n))
                    - powi(&(&jr / int(4)), n as i64)? * &sg / (int(2) * fact(n));
                Ok(lhs - rhs)
            } else {
                let top = 2 * n + 1;
                let mut lhs = BigRational::zero();
                for j in 0..=top {
                    lhs += powi(&r, j as i64)? * eta(top + j) / (fact(top - j) * fact(j));
                }
                let rhs = -powi(&int(2), -2 - 4 * n as i64)? * &sg * odd_sum(jj, top)
                    / (powi(&jr, top as i64)? * fact(top))
                    - powi(&jr, top as i64)? * &sg * powi(&int(2), -4 * n as i64 - 3)? / fact(top);
                Ok(lhs - rhs)
            }
        }
        "New3c" => {
            let jj = case.odd("J")?;
            let n = case.nonneg("n")?;
            let jr = int(jj as i64);
            let sg = sigma(jj);
            let p = n + 1;
            let mut lhs = BigRational::zero();
            for j in 0..=p {
                lhs += powi(&(int(-1) / (&jr * int(2))), j as i64)? * euler_number(p + j)
                    / (fact(p - j) * fact(j));
            }
            let first = int(2) * &sg * odd_sum(jj, p) / (powi(&(&jr * int(2)), p as i64)? * fact(p));
            let mut second = BigRational::zero();
            for j in 0..=p {
                let inner = (1..=jj as i64)
                    .map(|k| sign(k as u64) * num_traits::pow(int(k) - &half, (p + j) as usize))
                    .fold(BigRational::zero(), |a, b| a + b);
                second += powi(&(int(-1) / &jr), j as i64)? * inner / (fact(p - j) * fact(j));
            }
            let second = powi(&int(2), p as i64 + 1)? * second;
            let third = &sg * powi(&(&jr / int(2)), p as i64)? / fact(p);
            Ok(lhs - (first - second + third))
        }
        other => Err(ExactError::UnknownIdentity(other.to_string())),
    }
}

/// Lossless conversion of a finite binary64 value.
pub fn from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Parse a decimal literal such as `-2.375` or `1e-3` exactly.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let t = text.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - fp.len() as i64;
    let ten = int(10);
    let v = BigRational::from_integer(digits) * powi(&ten, scale).ok()?;
    Some(if neg { -v } else { v })
}

/// Integer value of a rational, if it is one and fits in `i64`.
pub fn as_i64(x: &BigRational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn gcd_normalised(x: &BigRational) -> bool {
    x.denom().is_positive() && x.numer().gcd(x.denom()).is_one()
}
