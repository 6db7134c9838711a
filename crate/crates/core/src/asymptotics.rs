//! Saddle-point data for `F(y) = e^{2 pi y} h(e^{-2 pi y})` and the
//! asymptotic estimates of `b_{2(mu+1)}`, `b_{2(mu+2)}` built from it.
//!
//! With `t0 = e^{-2 pi y0}` at the stationary point of `F`, `c1 = F(y0)`
//! and `c2 = F''(y0) / F(y0)`:
//!
//! ```text
//! b_{2(mu+1)} ~ -2 pi j c2^{-1/2} mu^{-3/2} G1(t0) c1^mu
//! b_{2(mu+2)} ~ -2 pi j c2^{-1/2} mu^{-3/2} G2(t0) c1^{mu+1}
//! G1 = E4^{2-nu} theta_1^{j-1} (theta_1 E4' - theta_1' E4) h
//! G2 = E4^{5-nu} theta_1^{j-1} (theta_1 E4' - theta_1' E4) h
//! ```
//!
//! so the ratio of the two tends to `c1 E4(t0)^3`.
//!
//! All reals are `astro_float::BigFloat` at a working precision given in
//! decimal digits.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extremal::{profiles, Dims, ExtremalContext};
use crate::modforms::sigma3;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 30;

/// The value quoted for the limit of `|b_{2(mu+2)} / b_{2(mu+1)}|`.
pub const QUOTED_LIMIT: f64 = 1.64e5;

/// Root bracket for the saddle.
pub const BRACKET: (f64, f64) = (0.05, 1.0);

/// Working precision plus the constant cache the transcendental functions use.
pub struct Precision {
    digits: u32,
    bits: usize,
    consts: RefCell<Consts>,
}

impl fmt::Debug for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Precision").field("digits", &self.digits).field("bits", &self.bits).finish()
    }
}

impl Precision {
    pub fn new(digits: u32) -> Result<Self> {
        if digits == 0 {
            return Err(Error::PrecisionTooSmall { got: "0".into(), need: "1".into() });
        }
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + 64;
        let consts = Consts::new().map_err(|e| Error::DomainError(format!("constant cache: {e:?}")))?;
        Ok(Precision { digits, bits, consts: RefCell::new(consts) })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn num(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn parse(&self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn from_bigint(&self, v: &BigInt) -> BigFloat {
        self.parse(&v.to_string())
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn powu(&self, a: &BigFloat, e: u64) -> BigFloat {
        a.powi(e as usize, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn pi(&self) -> BigFloat {
        self.consts.borrow_mut().pi(self.bits, RM)
    }

    /// `10^e` for a possibly negative integer `e`.
    pub fn ten_pow(&self, e: i32) -> BigFloat {
        let p = self.powu(&self.int(10), u64::from(e.unsigned_abs()));
        if e < 0 {
            self.div(&self.int(1), &p)
        } else {
            p
        }
    }

    /// `|a / b - 1|` as an `f64`.
    pub fn rel_diff(&self, a: &BigFloat, b: &BigFloat) -> f64 {
        to_f64(&self.sub(&self.div(a, b), &self.int(1))).abs()
    }
}

/// Nearest `f64`, through the decimal representation.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// Scientific notation rounded to `digits` significant digits, e.g.
/// `1.6400e+5`.
pub fn to_decimal(x: &BigFloat, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let raw = x.to_string();
    let (mantissa, exp) = match raw.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => return raw,
    };
    let negative = mantissa.starts_with('-');
    let body: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = body.trim_start_matches('0');
    if body.is_empty() {
        return "0".into();
    }
    let lead_shift = mantissa.trim_start_matches('-').find('.').unwrap_or(mantissa.len()) as i64 - 1;
    let leading_zeros = (mantissa.trim_start_matches('-').chars().filter(char::is_ascii_digit).count()
        - body.len()) as i64;
    let mut exp = exp + lead_shift - leading_zeros;
    let want = digits.max(1) as usize;
    let mut kept: BigInt = if body.len() > want {
        let head: BigInt = body[..want].parse().unwrap_or_default();
        let next = body.as_bytes()[want] - b'0';
        if next >= 5 { head + 1 } else { head }
    } else {
        let padded = format!("{body:0<want$}");
        padded.parse().unwrap_or_default()
    };
    let mut s = kept.to_string();
    if s.len() > want {
        kept /= 10;
        s = kept.to_string();
        exp += 1;
    }
    let sign = if negative { "-" } else { "" };
    if s.len() == 1 {
        format!("{sign}{s}e{exp:+}")
    } else {
        format!("{sign}{}.{}e{exp:+}", &s[..1], &s[1..])
    }
}

/// Exact rational rounded half away from zero to `frac` fractional digits.
pub fn decimal_fixed(r: &BigRational, frac: usize) -> String {
    let scale = BigInt::from(10).pow(frac as u32);
    let num: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let scaled = num.div_floor(&(r.denom() * 2));
    let (int, rest) = scaled.div_rem(&scale);
    let sign = if r.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if frac == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>frac$}", rest.to_string())
    }
}

/// `t^m` stays below `eps` relative once `log(bound) + m log t < log eps`.
fn tail_small(log_bound: f64, m: f64, log_t: f64, log_eps: f64) -> bool {
    log_bound + m * log_t < log_eps
}

/// `log(10^-(digits + 6))`, the cutoff for dropped series tails.
fn log_eps(pr: &Precision) -> f64 {
    -(f64::from(pr.digits) + 6.0) * std::f64::consts::LN_10
}

/// `E4(t)` and `E4'(t)`.
fn e4_at(pr: &Precision, t: &BigFloat) -> (BigFloat, BigFloat) {
    let log_t = to_f64(t).ln();
    let eps = log_eps(pr);
    let mut value = pr.int(1);
    let mut deriv = pr.int(0);
    let mut power = pr.int(1);
    let mut m = 1u64;
    loop {
        let term_prev = power.clone();
        power = pr.mul(&power, t);
        let s = pr.parse(&(240 * sigma3(m)).to_string());
        value = pr.add(&value, &pr.mul(&s, &power));
        deriv = pr.add(&deriv, &pr.mul(&pr.mul(&s, &pr.int(m as i64)), &term_prev));
        // sigma3(r) < 1.21 r^3, so the remaining terms of both sums sit
        // under 2 * 300 r^4 t^{r-1} at r = m + 1 once t (1 + 1/m)^4 < 1/2
        let mf = m as f64;
        let next = mf + 1.0;
        let geometric = log_t + 4.0 * (next / mf).ln() < -std::f64::consts::LN_2;
        if geometric && tail_small(600f64.ln() + 4.0 * next.ln(), mf, log_t, eps) {
            break;
        }
        m += 1;
    }
    (value, deriv)
}

/// `theta_1(t) = (sum_x t^{k x^2})^8` and its derivative.
fn theta1_at(pr: &Precision, k: u32, t: &BigFloat) -> (BigFloat, BigFloat) {
    let log_t = to_f64(t).ln();
    let eps = log_eps(pr);
    let mut f0 = pr.int(1);
    let mut df0 = pr.int(0);
    let mut x = 1u64;
    loop {
        let e = u64::from(k) * x * x;
        let tp = pr.powu(t, e - 1);
        f0 = pr.add(&f0, &pr.mul(&pr.int(2), &pr.mul(&tp, t)));
        df0 = pr.add(&df0, &pr.mul(&pr.int(2 * e as i64), &tp));
        let ne = (u64::from(k) * (x + 1) * (x + 1)) as f64;
        if tail_small((4.0 * ne).ln(), ne - 1.0, log_t, eps) {
            break;
        }
        x += 1;
    }
    let f7 = pr.powu(&f0, 7);
    let value = pr.mul(&f7, &f0);
    let deriv = pr.mul(&pr.mul(&pr.int(8), &f7), &df0);
    (value, deriv)
}

/// Bound on the log of the relative error of `prod_{r<=terms} (1 - t^r)^-24`
/// against the full product: `24 t^{R+1} / (1 - t)^2`.
pub fn h_tail_bound(t: f64, terms: usize) -> f64 {
    24.0 * t.powi(terms as i32 + 1) / (1.0 - t).powi(2)
}

/// Number of factors needed for `h(t)` at the working precision.
pub fn h_terms_for(pr: &Precision, t: f64) -> usize {
    let eps = log_eps(pr);
    let base = 24f64.ln() - 2.0 * (1.0 - t).ln();
    let mut r = 1usize;
    while !tail_small(base, r as f64 + 1.0, t.ln(), eps) {
        r += 1;
    }
    r
}

/// `prod_{r<=terms} (1 - t^r)^-24`.
pub fn h_product(pr: &Precision, t: &BigFloat, terms: usize) -> BigFloat {
    let one = pr.int(1);
    let mut prod = pr.int(1);
    let mut power = pr.int(1);
    for _ in 0..terms {
        power = pr.mul(&power, t);
        prod = pr.mul(&prod, &pr.sub(&one, &power));
    }
    pr.div(&one, &pr.powu(&prod, 24))
}

fn t_of(pr: &Precision, y: &BigFloat) -> BigFloat {
    let two_pi = pr.mul(&pr.int(2), &pr.pi());
    pr.exp(&pr.mul(&two_pi, y).neg())
}

/// `F(y)`, optionally times `theta_1(t)^3` for the theta-weighted kernel,
/// together with the number of product factors used.
fn kernel(pr: &Precision, y: &BigFloat, theta_k: Option<u32>) -> Result<(BigFloat, usize)> {
    if !y.is_positive() || y.is_zero() {
        return Err(Error::DomainError(format!("F needs y > 0, got {}", to_decimal(y, 6))));
    }
    let t = t_of(pr, y);
    let tf = to_f64(&t);
    if !(tf > 0.0 && tf < 1.0) {
        return Err(Error::DomainError(format!("t = e^(-2 pi y) = {tf} out of range")));
    }
    let terms = h_terms_for(pr, tf);
    let h = h_product(pr, &t, terms);
    let mut value = pr.div(&h, &t);
    if let Some(k) = theta_k {
        let (th, _) = theta1_at(pr, k, &t);
        value = pr.mul(&value, &pr.powu(&th, 3));
    }
    Ok((value, terms))
}

/// `F(y) = e^{2 pi y} prod_r (1 - e^{-2 pi y r})^-24`.
pub fn eval_f(pr: &Precision, y: &BigFloat) -> Result<BigFloat> {
    kernel(pr, y, None).map(|(v, _)| v)
}

/// `F'(y) / F(y)` by central differences at step `10^{-digits/3}`.
fn log_slope(pr: &Precision, y: &BigFloat, theta_k: Option<u32>) -> Result<BigFloat> {
    let step = pr.ten_pow(-(pr.digits as i32 / 3));
    let (hi, _) = kernel(pr, &pr.add(y, &step), theta_k)?;
    let (lo, _) = kernel(pr, &pr.sub(y, &step), theta_k)?;
    let (mid, _) = kernel(pr, y, theta_k)?;
    let d = pr.div(&pr.sub(&hi, &lo), &pr.mul(&pr.int(2), &step));
    Ok(pr.div(&d, &mid))
}

/// `F'(y)` by central differences at step `10^{-digits/3}`.
pub fn f_prime(pr: &Precision, y: &BigFloat) -> Result<BigFloat> {
    let slope = log_slope(pr, y, None)?;
    Ok(pr.mul(&slope, &eval_f(pr, y)?))
}

/// Stationary point of `F` and the constants `c1`, `c2` there.
#[derive(Clone, Debug)]
pub struct SaddleData {
    pub digits: u32,
    pub y0: BigFloat,
    pub t0: BigFloat,
    pub c1: BigFloat,
    pub c2: BigFloat,
    /// Factors of `prod (1 - t^r)^-24` kept at `t0`.
    pub h_terms: usize,
    /// `|F'(y0)| / F(y0)`.
    pub stationarity: f64,
    /// `Some(k)` for the kernel `F(y) theta_1(t)^3`.
    pub theta_k: Option<u32>,
}

impl SaddleData {
    pub fn y0_f64(&self) -> f64 {
        to_f64(&self.y0)
    }

    pub fn c1_f64(&self) -> f64 {
        to_f64(&self.c1)
    }

    pub fn c2_f64(&self) -> f64 {
        to_f64(&self.c2)
    }

    /// The invariants every saddle must satisfy.
    pub fn is_valid(&self) -> bool {
        let y0 = self.y0_f64();
        self.stationarity < 1e-12 && self.c1_f64() > 0.0 && self.c2_f64() > 0.0 && y0 > 0.0 && y0 < 1.0
    }
}

impl Serialize for SaddleData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.digits;
        let mut st = s.serialize_struct("SaddleData", 8)?;
        st.serialize_field("digits", &d)?;
        st.serialize_field("y0", &to_decimal(&self.y0, d))?;
        st.serialize_field("t0", &to_decimal(&self.t0, d))?;
        st.serialize_field("c1", &to_decimal(&self.c1, d))?;
        st.serialize_field("c2", &to_decimal(&self.c2, d))?;
        st.serialize_field("h_terms", &self.h_terms)?;
        st.serialize_field("stationarity", &format!("{:.3e}", self.stationarity))?;
        st.serialize_field("theta_k", &self.theta_k)?;
        st.end()
    }
}

/// Saddle of `F` in `(0.05, 1)`.
pub fn find_saddle(digits: u32) -> Result<SaddleData> {
    saddle(digits, None)
}

/// Saddle of `F(y) theta_1(e^{-2 pi y})^3`.
///
/// `G1` carries `theta_1^{j-1}`, which grows like `theta_1^{3 mu}`; folding
/// `theta_1^3` into the kernel gives the saddle that governs the exact
/// coefficients for fixed `k`.
pub fn find_theta_saddle(k: u32, digits: u32) -> Result<SaddleData> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    saddle(digits, Some(k))
}

fn saddle(digits: u32, theta_k: Option<u32>) -> Result<SaddleData> {
    if digits < 15 {
        return Err(Error::PrecisionTooSmall { got: digits.to_string(), need: "15".into() });
    }
    let pr = Precision::new(digits)?;
    let slope = |y: &BigFloat| log_slope(&pr, y, theta_k);
    // F' and F'/F share their sign and roots; the latter is well scaled
    let mut a = pr.num(BRACKET.0);
    let mut b = pr.num(BRACKET.1);
    let mut fa = slope(&a)?;
    let mut fb = slope(&b)?;
    if !(fa.is_negative() && fb.is_positive()) {
        return Err(Error::NoBracket { lo: BRACKET.0, hi: BRACKET.1 });
    }
    let half = pr.num(0.5);
    for _ in 0..24 {
        let m = pr.mul(&pr.add(&a, &b), &half);
        let fm = slope(&m)?;
        if fm.is_negative() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    // Illinois-modified secant inside the bracket
    let tol = pr.ten_pow(-(digits as i32 / 2 + 2));
    let mut x = a.clone();
    let mut side = 0i8;
    for _ in 0..200 {
        let next = pr.sub(&b, &pr.div(&pr.mul(&fb, &pr.sub(&b, &a)), &pr.sub(&fb, &fa)));
        let fx = slope(&next)?;
        let moved = pr.sub(&next, &x).abs();
        x = next;
        if fx.is_zero() || moved.cmp(&tol) == Some(-1) {
            break;
        }
        if fx.is_negative() {
            a = x.clone();
            fa = fx;
            if side == -1 {
                fb = pr.mul(&fb, &half);
            }
            side = -1;
        } else {
            b = x.clone();
            fb = fx;
            if side == 1 {
                fa = pr.mul(&fa, &half);
            }
            side = 1;
        }
    }
    let y0 = x;
    let (c1, h_terms) = kernel(&pr, &y0, theta_k)?;
    let step = pr.ten_pow(-(digits as i32 / 4));
    let (up, _) = kernel(&pr, &pr.add(&y0, &step), theta_k)?;
    let (down, _) = kernel(&pr, &pr.sub(&y0, &step), theta_k)?;
    let second = pr.sub(&pr.add(&up, &down), &pr.mul(&pr.int(2), &c1));
    let c2 = pr.div(&second, &pr.mul(&pr.mul(&step, &step), &c1));
    let stationarity = to_f64(&slope(&y0)?).abs();
    let t0 = t_of(&pr, &y0);
    Ok(SaddleData { digits, y0, t0, c1, c2, h_terms, stationarity, theta_k })
}

/// The factors of `G1`, `G2` at one point `t`.
struct GFactors {
    e4: BigFloat,
    theta1: BigFloat,
    /// `theta_1 E4' - theta_1' E4`.
    wronskian: BigFloat,
    h: BigFloat,
}

impl GFactors {
    fn at(pr: &Precision, k: u32, t: &BigFloat) -> Self {
        let (e4, e4p) = e4_at(pr, t);
        let (theta1, theta1p) = theta1_at(pr, k, t);
        let wronskian = pr.sub(&pr.mul(&theta1, &e4p), &pr.mul(&theta1p, &e4));
        let h = h_product(pr, t, h_terms_for(pr, to_f64(t)));
        GFactors { e4, theta1, wronskian, h }
    }

    /// `E4^a theta_1^b (theta_1 E4' - theta_1' E4) h` evaluated as is.
    fn g(&self, pr: &Precision, e4_exp: u64, theta_exp: i64) -> BigFloat {
        let mut v = pr.powu(&self.e4, e4_exp);
        let th = pr.powu(&self.theta1, theta_exp.unsigned_abs());
        v = if theta_exp < 0 { pr.div(&v, &th) } else { pr.mul(&v, &th) };
        v = pr.mul(&v, &self.wronskian);
        pr.mul(&v, &self.h)
    }

    /// `log |G|` for the same exponents, without forming the powers.
    fn ln_abs_g(&self, pr: &Precision, e4_exp: u64, theta_exp: i64) -> BigFloat {
        let mut v = pr.mul(&pr.int(e4_exp as i64), &pr.ln(&self.e4));
        v = pr.add(&v, &pr.mul(&pr.int(theta_exp), &pr.ln(&self.theta1)));
        v = pr.add(&v, &pr.ln(&self.wronskian.abs()));
        pr.add(&v, &pr.ln(&self.h))
    }
}

/// Exponent of `theta_1` left in `G` when `c1^s` comes from `sd`: all of
/// `theta_1^{j-1}` for `F`, or `theta_1^{j-1-3s}` when `theta_1^3` is part
/// of the kernel.
fn theta_exponent(sd: &SaddleData, j: u64, s: u64) -> i64 {
    let full = j as i64 - 1;
    match sd.theta_k {
        None => full,
        Some(_) => full - 3 * s as i64,
    }
}

/// The limit `c1 (G2/G1)(t0)` of `|b_{2(mu+2)} / b_{2(mu+1)}|`, with the
/// cross-checks that back it.
#[derive(Clone, Debug, Serialize)]
pub struct RatioLimit {
    pub digits: u32,
    pub theta_k: Option<u32>,
    /// `c1 E4(t0)^3`, or `c1 E4(t0)^3 / theta_1(t0)^3` for the
    /// theta-weighted kernel, after cancelling the common factors.
    pub limit: f64,
    #[serde(rename = "limit_decimal")]
    pub limit_text: String,
    /// `c1 G2(t0) / G1(t0)` at `j = 30`, `nu = 0`, evaluated without
    /// cancelling, at `k = 1` (or the kernel's `k`).
    pub direct: f64,
    /// Same at `k = 3`, for `F` only.
    pub direct_k3: Option<f64>,
    /// `|direct / limit - 1|`.
    pub path_gap: f64,
    /// `|direct / direct_k3 - 1|`.
    pub k_gap: Option<f64>,
    pub quoted: f64,
    /// `limit / quoted - 1`.
    pub quoted_gap: f64,
}

impl RatioLimit {
    pub fn paths_agree(&self) -> bool {
        self.path_gap < 1e-8 && self.k_gap.is_none_or(|g| g < 1e-10)
    }

    pub fn matches_quoted(&self, tolerance: f64) -> bool {
        self.quoted_gap.abs() < tolerance
    }
}

/// `c1 E4(t0)^3`, checked against a direct evaluation of `G2/G1` at
/// finite `j`.
pub fn predicted_ratio_limit(sd: &SaddleData) -> Result<RatioLimit> {
    let pr = Precision::new(sd.digits)?;
    let (e4, _) = e4_at(&pr, &sd.t0);
    let mut cancelled = pr.mul(&sd.c1, &pr.powu(&e4, 3));
    if let Some(k) = sd.theta_k {
        let (th, _) = theta1_at(&pr, k, &sd.t0);
        cancelled = pr.div(&cancelled, &pr.powu(&th, 3));
    }
    // j = 30, nu = 0, mu = 10
    let direct = |k: u32| {
        let gf = GFactors::at(&pr, k, &sd.t0);
        let g2 = gf.g(&pr, 5, theta_exponent(sd, 30, 11));
        let g1 = gf.g(&pr, 2, theta_exponent(sd, 30, 10));
        pr.mul(&sd.c1, &pr.div(&g2, &g1))
    };
    let d1 = direct(sd.theta_k.unwrap_or(1));
    let d3 = sd.theta_k.is_none().then(|| direct(3));
    let limit = to_f64(&cancelled);
    Ok(RatioLimit {
        digits: sd.digits,
        theta_k: sd.theta_k,
        limit,
        limit_text: to_decimal(&cancelled, sd.digits),
        direct: to_f64(&d1),
        direct_k3: d3.as_ref().map(to_f64),
        path_gap: pr.rel_diff(&d1, &cancelled),
        k_gap: d3.as_ref().map(|d| pr.rel_diff(&d1, d)),
        quoted: QUOTED_LIMIT,
        quoted_gap: limit / QUOTED_LIMIT - 1.0,
    })
}

/// Saddle-point estimate of `b_{2(mu+1)}`, kept as a sign and a logarithm.
#[derive(Clone, Debug)]
pub struct AsymptoticB {
    pub n: u64,
    pub k: u32,
    pub mu: u64,
    pub negative: bool,
    pub ln_abs: BigFloat,
    digits: u32,
}

impl AsymptoticB {
    pub fn log10_abs(&self) -> f64 {
        to_f64(&self.ln_abs) / std::f64::consts::LN_10
    }

    pub fn value(&self) -> Result<BigFloat> {
        let pr = Precision::new(self.digits)?;
        let v = pr.exp(&self.ln_abs);
        Ok(if self.negative { v.neg() } else { v })
    }

    /// `estimate / exact - 1`.
    pub fn relative_error(&self, exact: &BigInt) -> Result<f64> {
        if exact.is_zero() {
            return Err(Error::DomainError("exact coefficient is zero".into()));
        }
        let pr = Precision::new(self.digits)?;
        let gap = pr.sub(&self.ln_abs, &pr.ln(&pr.from_bigint(&exact.abs())));
        let ratio = to_f64(&pr.exp(&gap));
        let same_sign = self.negative == exact.is_negative();
        Ok(if same_sign { ratio - 1.0 } else { -ratio - 1.0 })
    }
}

impl Serialize for AsymptoticB {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AsymptoticB", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("negative", &self.negative)?;
        st.serialize_field("ln_abs", &to_decimal(&self.ln_abs, self.digits))?;
        st.end()
    }
}

/// `-2 pi j c2^{-1/2} mu^{-3/2} G1(t0) c1^mu`, summed in the log domain.
///
/// With a theta-weighted saddle, `G1` keeps only `theta_1^{j-1-3mu}`.
pub fn asymptotic_b(n: u64, k: u32, sd: &SaddleData) -> Result<AsymptoticB> {
    let dims = Dims::new(n)?;
    if dims.mu < 1 {
        return Err(Error::InvalidLength(n));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if sd.theta_k.is_some_and(|sk| sk != k) {
        return Err(Error::InvalidArgument(format!("saddle was computed for k = {}", sd.theta_k.unwrap_or(0))));
    }
    let pr = Precision::new(sd.digits)?;
    let gf = GFactors::at(&pr, k, &sd.t0);
    let two_pi_j = pr.mul(&pr.mul(&pr.int(2), &pr.pi()), &pr.int(dims.j as i64));
    let mu = pr.int(dims.mu as i64);
    let mut ln = pr.ln(&two_pi_j);
    ln = pr.sub(&ln, &pr.mul(&pr.num(0.5), &pr.ln(&sd.c2)));
    ln = pr.sub(&ln, &pr.mul(&pr.num(1.5), &pr.ln(&mu)));
    ln = pr.add(&ln, &gf.ln_abs_g(&pr, 2 - dims.nu, theta_exponent(sd, dims.j, dims.mu)));
    ln = pr.add(&ln, &pr.mul(&mu, &pr.ln(&sd.c1)));
    Ok(AsymptoticB {
        n,
        k,
        mu: dims.mu,
        negative: gf.wronskian.is_positive(),
        ln_abs: ln,
        digits: sd.digits,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Mixed,
    Single,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub n: u64,
    pub mu: u64,
    pub nu: u64,
    /// `|b_{2(mu+2)} / b_{2(mu+1)}|`, absent when the lower coefficient is 0.
    pub exact_ratio: Option<String>,
    pub threshold: i64,
    /// `threshold - exact_ratio`.
    pub margin: Option<String>,
    pub beta2_negative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub k: u32,
    pub rows: Vec<RatioRow>,
    pub trend: Trend,
}

/// Fractional digits in the decimal ratios of a [`RatioReport`].
pub const RATIO_DIGITS: usize = 12;

impl RatioReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,exact_ratio,threshold,margin\n");
        for r in &self.rows {
            let opt = |v: &Option<String>| v.clone().unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", r.n, opt(&r.exact_ratio), r.threshold, opt(&r.margin)));
        }
        out
    }
}

/// Exact ratios `|b_{2(mu+2)} / b_{2(mu+1)}|` against `24 mu - 240 nu + 744`.
pub fn ratio_report(k: u32, ns: &[u64]) -> Result<RatioReport> {
    let mut sorted = ns.to_vec();
    for &n in &sorted {
        Dims::new(n)?;
    }
    sorted.sort_unstable();
    sorted.dedup();
    let Some(&n_max) = sorted.last() else {
        return Ok(RatioReport { k, rows: Vec::new(), trend: Trend::Single });
    };
    let ctx = ExtremalContext::for_max_length(n_max)?;
    let found = profiles(&ctx, k, &sorted)?;
    let mut ratios = Vec::with_capacity(found.len());
    let rows = found
        .iter()
        .map(|p| {
            let ratio = p.ratio();
            let margin = ratio.as_ref().map(|r| BigRational::from_integer(p.threshold.into()) - r);
            ratios.push(ratio.clone());
            RatioRow {
                n: p.n,
                mu: p.mu,
                nu: p.nu,
                exact_ratio: ratio.map(|r| decimal_fixed(&r, RATIO_DIGITS)),
                threshold: p.threshold,
                margin: margin.map(|m| decimal_fixed(&m, RATIO_DIGITS)),
                beta2_negative: p.beta2.is_negative(),
            }
        })
        .collect();
    Ok(RatioReport { k, rows, trend: trend_of(&ratios) })
}

fn trend_of(values: &[Option<BigRational>]) -> Trend {
    let known: Vec<&BigRational> = values.iter().flatten().collect();
    if known.len() < 2 {
        return Trend::Single;
    }
    let steps: Vec<Ordering> = known.windows(2).map(|w| w[1].cmp(w[0])).collect();
    if steps.iter().all(|o| *o == Ordering::Greater) {
        Trend::Increasing
    } else if steps.iter().all(|o| *o == Ordering::Less) {
        Trend::Decreasing
    } else {
        Trend::Mixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::profile;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pr30() -> Precision {
        Precision::new(30).unwrap()
    }

    #[test]
    fn decimal_formatting() {
        let pr = pr30();
        assert_eq!(to_decimal(&pr.num(2.5), 4), "2.500e+0");
        assert_eq!(to_decimal(&pr.num(-0.00125), 2), "-1.3e-3");
        assert_eq!(to_decimal(&pr.int(99999), 3), "1.00e+5");
        assert_eq!(to_decimal(&pr.int(0), 3), "0");
        let r = BigRational::new(BigInt::from(-2), BigInt::from(3));
        assert_eq!(decimal_fixed(&r, 4), "-0.6667");
        assert_eq!(decimal_fixed(&BigRational::from_integer(7.into()), 2), "7.00");
        assert_eq!(decimal_fixed(&BigRational::new(1.into(), 8.into()), 2), "0.13");
    }

    #[test]
    fn f_at_large_y_is_nearly_exponential() {
        let pr = pr30();
        let y = pr.int(5);
        let f = eval_f(&pr, &y).unwrap();
        let e = pr.exp(&pr.mul(&pr.mul(&pr.int(2), &pr.pi()), &y));
        let r = to_f64(&pr.div(&f, &e));
        assert!(r > 1.0 && r < 1.00001, "{r}");
    }

    #[test]
    fn f_at_one() {
        // F(1) = 1 / Delta(i) = 2^24 pi^18 / Gamma(1/4)^24
        let pr = pr30();
        let gamma = pr.parse("3.6256099082219083119306851558676720029951676828800654674333");
        let closed = pr.div(&pr.mul(&pr.powu(&pr.int(2), 24), &pr.powu(&pr.pi(), 18)), &pr.powu(&gamma, 24));
        let f = eval_f(&pr, &pr.int(1)).unwrap();
        assert!(pr.rel_diff(&f, &closed) < 1e-25);
        assert_eq!(to_decimal(&f, 3), "5.60e+2");
        assert!(eval_f(&pr30(), &pr30().int(0)).is_err());
        assert!(eval_f(&pr30(), &pr30().num(-1.0)).is_err());
    }

    #[test]
    fn functional_equation() {
        let pr = pr30();
        let check = |y: f64| {
            let y = pr.num(y);
            let inv = pr.div(&pr.int(1), &y);
            let lhs = eval_f(&pr, &inv).unwrap();
            let rhs = pr.mul(&pr.powu(&inv, 12), &eval_f(&pr, &y).unwrap());
            pr.rel_diff(&lhs, &rhs)
        };
        assert!(check(1.3) < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let y = rng.gen_range(0.3..3.0);
            assert!(check(y) < 1e-9, "y = {y}");
        }
    }

    #[test]
    fn doubling_the_product_stays_inside_the_tail_bound() {
        let pr = pr30();
        for y in [0.2, 0.5, 1.0] {
            let t = t_of(&pr, &pr.num(y));
            let tf = to_f64(&t);
            let r = h_terms_for(&pr, tf);
            let short = h_product(&pr, &t, r);
            let long = h_product(&pr, &t, 2 * r);
            let gap = pr.rel_diff(&long, &short);
            let bound = h_tail_bound(tf, r);
            assert!(gap <= bound.exp_m1() * 1.0001 + 1e-30, "y={y} gap={gap} bound={bound}");
            assert!(bound < 1e-30);
        }
    }

    #[test]
    fn analytic_log_derivative() {
        // F'/F = 2 pi - 48 pi sum r t^r / (1 - t^r)
        let pr = pr30();
        let y = pr.num(0.7);
        let t = t_of(&pr, &y);
        let mut sum = pr.int(0);
        let mut power = pr.int(1);
        for r in 1..400 {
            power = pr.mul(&power, &t);
            let term = pr.div(&pr.mul(&pr.int(r), &power), &pr.sub(&pr.int(1), &power));
            sum = pr.add(&sum, &term);
        }
        let pi = pr.pi();
        let exact = pr.sub(&pr.mul(&pr.int(2), &pi), &pr.mul(&pr.mul(&pr.int(48), &pi), &sum));
        let numeric = log_slope(&pr, &y, None).unwrap();
        assert!(to_f64(&pr.sub(&numeric, &exact)).abs() < 1e-15);
        let fp = f_prime(&pr, &pr.int(1)).unwrap();
        assert!(fp.is_positive());
    }

    #[test]
    fn saddle_invariants_and_stability() {
        let sd = find_saddle(30).unwrap();
        assert!(sd.is_valid(), "{sd:?}");
        let exact = {
            let pr = pr30();
            let y = sd.y0.clone();
            let t = t_of(&pr, &y);
            let mut sum = pr.int(0);
            let mut power = pr.int(1);
            for r in 1..400 {
                power = pr.mul(&power, &t);
                sum = pr.add(&sum, &pr.div(&pr.mul(&pr.int(r), &power), &pr.sub(&pr.int(1), &power)));
            }
            to_f64(&pr.sub(&pr.int(1), &pr.mul(&pr.int(24), &sum)))
        };
        assert!(exact.abs() < 1e-12, "{exact}");
        let fine = find_saddle(60).unwrap();
        assert!((fine.y0_f64() - sd.y0_f64()).abs() < 1e-12);
        assert!(find_saddle(10).is_err());
        let json = serde_json::to_value(&sd).unwrap();
        assert!(json["y0"].as_str().unwrap().contains('e'));
    }

    #[test]
    fn ratio_limit_paths_agree() {
        let sd = find_saddle(30).unwrap();
        let lim = predicted_ratio_limit(&sd).unwrap();
        assert!(lim.paths_agree(), "{lim:?}");
        assert!(lim.limit > 0.0);
    }

    #[test]
    fn asymptotic_b_log_matches_naive() {
        let sd = find_saddle(30).unwrap();
        let pr = pr30();
        let est = asymptotic_b(48, 1, &sd).unwrap();
        assert!(est.negative);
        // n = 48: j = 6, mu = 2, nu = 0
        let gf = GFactors::at(&pr, 1, &sd.t0);
        let mut naive = pr.mul(&pr.mul(&pr.int(2), &pr.pi()), &pr.int(6));
        naive = pr.div(&naive, &pr.sqrt(&sd.c2));
        naive = pr.div(&naive, &pr.sqrt(&pr.powu(&pr.int(2), 3)));
        naive = pr.mul(&naive, &gf.g(&pr, 2, 5));
        naive = pr.mul(&naive, &pr.powu(&sd.c1, 2)).neg();
        assert!(pr.rel_diff(&est.value().unwrap(), &naive) < 1e-10);
        assert!(asymptotic_b(16, 1, &sd).is_err());
        assert!(asymptotic_b(50, 1, &sd).is_err());
        for k in 1..=6 {
            assert!(asymptotic_b(480, k, &sd).unwrap().negative);
        }
    }

    #[test]
    fn asymptotic_b_against_exact() {
        // F alone leaves theta_1^{j-1} in G1 and the estimate drifts away
        let sd = find_saddle(30).unwrap();
        let literal: Vec<f64> = [480u64, 960, 1920]
            .iter()
            .map(|&n| {
                let p = profile(n, 1).unwrap();
                asymptotic_b(n, 1, &sd).unwrap().relative_error(&p.b[p.mu as usize + 1]).unwrap()
            })
            .collect();
        assert!(literal.windows(2).all(|w| w[1] > w[0]), "{literal:?}");
        // with theta_1^3 in the kernel the error settles towards sqrt(2 pi) - 1
        let target = (2.0 * std::f64::consts::PI).sqrt() - 1.0;
        for k in [1u32, 3] {
            let sk = find_theta_saddle(k, 30).unwrap();
            assert!(asymptotic_b(480, k + 1, &sk).is_err());
            let errs: Vec<f64> = [480u64, 960, 1920]
                .iter()
                .map(|&n| {
                    let p = profile(n, k).unwrap();
                    asymptotic_b(n, k, &sk).unwrap().relative_error(&p.b[p.mu as usize + 1]).unwrap()
                })
                .collect();
            assert!(errs.windows(2).all(|w| w[1] < w[0] && w[1] > target), "k={k} {errs:?}");
            assert!(errs[2] - target < 0.25, "k={k} {errs:?}");
        }
    }

    #[test]
    fn theta_kernel_limits_bound_the_exact_ratios() {
        for k in [1u32, 2] {
            let sk = find_theta_saddle(k, 30).unwrap();
            assert!(sk.is_valid());
            let lim = predicted_ratio_limit(&sk).unwrap();
            assert!(lim.paths_agree(), "{lim:?}");
            let rep = ratio_report(k, &[960, 1920]).unwrap();
            assert_eq!(rep.trend, Trend::Increasing);
            for row in &rep.rows {
                let r: f64 = row.exact_ratio.as_ref().unwrap().parse().unwrap();
                assert!(r < lim.limit && r > 0.5 * lim.limit, "k={k} n={} {r} {}", row.n, lim.limit);
            }
        }
        let plain = predicted_ratio_limit(&find_saddle(30).unwrap()).unwrap();
        let six = predicted_ratio_limit(&find_theta_saddle(6, 30).unwrap()).unwrap();
        assert!((six.limit / plain.limit - 1.0).abs() < 1e-5);
    }

    #[test]
    fn ratio_report_small_lengths() {
        let rep = ratio_report(1, &[8]).unwrap();
        let p = profile(8, 1).unwrap();
        assert_eq!(p.b[1], BigInt::from(-224));
        let row = &rep.rows[0];
        assert_eq!(row.threshold, 504);
        let want = BigRational::new(p.b[2].abs(), BigInt::from(224));
        assert_eq!(row.exact_ratio.as_deref(), Some(decimal_fixed(&want, RATIO_DIGITS).as_str()));
        assert!(ratio_report(1, &[12]).is_err());
        let a = ratio_report(2, &[96, 48, 240]).unwrap();
        let b = ratio_report(2, &[48, 96, 240]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![48, 96, 240]);
        assert!(a.to_csv().starts_with("n,exact_ratio,threshold,margin\n48,"));
    }
}
