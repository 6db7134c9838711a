//! Truncated power series in `t` with exact rational coefficients on a
//! fractional exponent grid.
//!
//! A [`FracSeries`] stores the coefficients of `t^(e/D)` for every grid index
//! `e` with `e/D < T`, where `D` is the grid denominator and `T` the
//! truncation. Coefficients are kept as integer numerators over one common
//! positive denominator, so a series with integral coefficients never touches
//! rational arithmetic.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Number of grid points `e` with `e / denom < trunc`.
fn grid_len(trunc: Rational64, denom: u32) -> usize {
    let n = i128::from(*trunc.numer()) * i128::from(denom);
    let d = i128::from(*trunc.denom());
    ((n + d - 1) / d) as usize
}

fn check_trunc(trunc: Rational64) {
    assert!(trunc > Rational64::zero(), "truncation must be positive, got {trunc}");
}

fn fmt_ratio(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact truncated power series on the exponent grid `t^(1/D)`.
#[derive(Clone, Debug)]
pub struct FracSeries {
    denom: u32,
    trunc: Rational64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FracSeries {
    /// The zero series.
    ///
    /// # Panics
    /// If `denom == 0` or `trunc <= 0`.
    pub fn zero(denom: u32, trunc: Rational64) -> Self {
        assert!(denom >= 1, "grid denominator must be positive");
        check_trunc(trunc);
        FracSeries {
            denom,
            trunc,
            num: vec![BigInt::zero(); grid_len(trunc, denom)],
            den: BigInt::one(),
        }
    }

    pub fn one(denom: u32, trunc: Rational64) -> Self {
        let mut s = Self::zero(denom, trunc);
        s.num[0] = BigInt::one();
        s
    }

    /// Integer coefficients listed by grid index; surplus entries beyond the
    /// truncation are dropped and missing ones are zero.
    pub fn from_integers<I>(denom: u32, trunc: Rational64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = BigInt>,
    {
        let mut s = Self::zero(denom, trunc);
        for (slot, c) in s.num.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    /// Convenience for small literal series with `i64` coefficients.
    pub fn from_i64s(denom: u32, trunc: Rational64, coeffs: &[i64]) -> Self {
        Self::from_integers(denom, trunc, coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn from_rationals(denom: u32, trunc: Rational64, coeffs: &[BigRational]) -> Self {
        let mut s = Self::zero(denom, trunc);
        let den = coeffs
            .iter()
            .take(s.num.len())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        for (slot, c) in s.num.iter_mut().zip(coeffs) {
            *slot = c.numer() * (&den / c.denom());
        }
        s.den = den;
        s.normalize();
        s
    }

    /// `coef * t^exponent` on the grid of the exponent's reduced denominator.
    pub fn monomial(coef: BigRational, exponent: Rational64, trunc: Rational64) -> Self {
        assert!(exponent >= Rational64::zero(), "negative exponent");
        let denom = u32::try_from(*exponent.denom()).expect("grid denominator fits u32");
        let mut s = Self::zero(denom, trunc);
        let e = (*exponent.numer()) as usize;
        if e < s.num.len() {
            s.num[e] = coef.numer().clone();
            s.den = coef.denom().clone();
        }
        s
    }

    pub fn grid_denom(&self) -> u32 {
        self.denom
    }

    pub fn truncation(&self) -> Rational64 {
        self.trunc
    }

    /// Number of stored grid points.
    pub fn grid_len(&self) -> usize {
        self.num.len()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// Common positive denominator of all coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Coefficients by grid index, when all of them are integers.
    pub fn integer_coeffs(&self) -> Option<&[BigInt]> {
        self.is_integral().then_some(self.num.as_slice())
    }

    /// Coefficient at grid index `index`; zero past the end of storage.
    pub fn coeff(&self, index: usize) -> BigRational {
        match self.num.get(index) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    /// Exact coefficient of `t^e`. Exponents below the truncation that fall
    /// between grid points have coefficient zero.
    pub fn coeff_at(&self, e: Rational64) -> Result<BigRational> {
        if e >= self.trunc {
            return Err(Error::OutOfTruncation {
                exponent: fmt_ratio(e),
                trunc: fmt_ratio(self.trunc),
            });
        }
        if e < Rational64::zero() {
            return Ok(BigRational::zero());
        }
        let scaled = e * Rational64::from_integer(i64::from(self.denom));
        if !scaled.is_integer() {
            return Ok(BigRational::zero());
        }
        Ok(self.coeff(*scaled.numer() as usize))
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, BigRational)> + '_ {
        let d = i64::from(self.denom);
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(e, c)| {
                (
                    Rational64::new(e as i64, d),
                    BigRational::new(c.clone(), self.den.clone()),
                )
            })
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Re-express on the finer grid `1/denom`; `denom` must be a multiple of
    /// the current grid denominator.
    pub fn refine(&self, denom: u32) -> Result<Self> {
        if denom == 0 || !denom.is_multiple_of(self.denom) {
            return Err(Error::InvalidArgument(format!(
                "grid 1/{denom} does not refine grid 1/{}",
                self.denom
            )));
        }
        if denom == self.denom {
            return Ok(self.clone());
        }
        let step = (denom / self.denom) as usize;
        let mut out = Self::zero(denom, self.trunc);
        for (e, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                out.num[e * step] = c.clone();
            }
        }
        out.den = self.den.clone();
        Ok(out)
    }

    /// Re-express on the coarser grid `1/denom`, which must divide the current
    /// grid denominator. Fails if a nonzero coefficient lies off the new grid.
    pub fn coarsen(&self, denom: u32) -> Result<Self> {
        if denom == 0 || !self.denom.is_multiple_of(denom) {
            return Err(Error::InvalidArgument(format!(
                "grid 1/{denom} does not divide grid 1/{}",
                self.denom
            )));
        }
        let step = (self.denom / denom) as usize;
        let mut out = Self::zero(denom, self.trunc);
        for (e, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e % step != 0 {
                return Err(Error::GridViolation {
                    exponent: fmt_ratio(Rational64::new(e as i64, i64::from(self.denom))),
                    denom,
                });
            }
            if e / step < out.num.len() {
                out.num[e / step] = c.clone();
            }
        }
        out.den = self.den.clone();
        Ok(out)
    }

    /// Drop every term with exponent `>= trunc`. A larger `trunc` than the
    /// current one leaves the series unchanged.
    pub fn truncate(&self, trunc: Rational64) -> Self {
        check_trunc(trunc);
        if trunc >= self.trunc {
            return self.clone();
        }
        let mut out = self.clone();
        out.trunc = trunc;
        out.num.truncate(grid_len(trunc, self.denom));
        out.normalize();
        out
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let denom = a.denom.lcm(&b.denom);
        let trunc = a.trunc.min(b.trunc);
        let fit = |s: &Self| {
            let s = if s.denom == denom {
                s.clone()
            } else {
                s.refine(denom).expect("lcm refines both grids")
            };
            s.truncate(trunc)
        };
        (fit(a), fit(b))
    }

    fn normalize(&mut self) {
        if self.den.is_one() {
            return;
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in &mut self.num {
                if !c.is_zero() {
                    *c /= &g;
                }
            }
            self.den /= &g;
        }
    }

    /// `alpha * a + beta * b`, computed on the common grid at the smaller
    /// truncation.
    pub fn linear_combine(a: &Self, b: &Self, alpha: &BigRational, beta: &BigRational) -> Self {
        let (a, b) = Self::aligned(a, b);
        let fa = alpha.numer() * beta.denom() * &b.den;
        let fb = beta.numer() * alpha.denom() * &a.den;
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| {
                let mut v = BigInt::zero();
                if !x.is_zero() && !fa.is_zero() {
                    v += x * &fa;
                }
                if !y.is_zero() && !fb.is_zero() {
                    v += y * &fb;
                }
                v
            })
            .collect();
        let mut out = FracSeries {
            denom: a.denom,
            trunc: a.trunc,
            num,
            den: alpha.denom() * beta.denom() * &a.den * &b.den,
        };
        out.normalize();
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for x in &mut out.num {
            if !x.is_zero() {
                *x *= c.numer();
            }
        }
        out.den *= c.denom();
        if out.den.is_negative() {
            out.den = -out.den;
            for x in &mut out.num {
                *x = -&*x;
            }
        }
        out.normalize();
        out
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        if std::ptr::eq(self, other) {
            return self.square();
        }
        let (a, b) = Self::aligned(self, other);
        let len = a.num.len();
        let mut out = FracSeries {
            denom: a.denom,
            trunc: a.trunc,
            num: convolve(&a.num, &b.num, len),
            den: &a.den * &b.den,
        };
        out.normalize();
        out
    }

    pub fn square(&self) -> Self {
        let len = self.num.len();
        let mut out = FracSeries {
            denom: self.denom,
            trunc: self.trunc,
            num: convolve_square(&self.num, len),
            den: &self.den * &self.den,
        };
        out.normalize();
        out
    }

    /// `self^m` by binary powering; `pow(0)` is the constant one.
    pub fn pow(&self, m: u64) -> Self {
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            m >>= 1;
            if m > 0 {
                base = base.square();
            }
        }
        result.unwrap_or_else(|| Self::one(self.denom, self.trunc))
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn invert(&self) -> Result<Self> {
        let c = &self.num[0];
        if c.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let len = self.num.len();
        // With h = 1/N and h_m = H_m / c^(m+1):
        //   H_m = -sum_{i>=1} N_i H_{m-i} c^(i-1).
        let unit = c.abs().is_one();
        let mut cpow = Vec::with_capacity(len);
        if !unit {
            let mut p = BigInt::one();
            for _ in 0..len {
                cpow.push(p.clone());
                p *= c;
            }
        }
        let nz: Vec<usize> = (1..len).filter(|&i| !self.num[i].is_zero()).collect();
        let mut h: Vec<BigInt> = Vec::with_capacity(len);
        h.push(BigInt::one());
        for m in 1..len {
            let mut acc = BigInt::zero();
            for &i in &nz {
                if i > m {
                    break;
                }
                let prev = &h[m - i];
                if prev.is_zero() {
                    continue;
                }
                let term = &self.num[i] * prev;
                if unit {
                    if c.is_negative() && (i - 1) % 2 == 1 {
                        acc -= term;
                    } else {
                        acc += term;
                    }
                } else {
                    acc += term * &cpow[i - 1];
                }
            }
            h.push(-acc);
        }
        // 1/(N/den) = den * h, over the common denominator c^len.
        let (num, mut den) = if unit {
            let num: Vec<BigInt> = h
                .into_iter()
                .enumerate()
                .map(|(m, x)| {
                    if c.is_negative() && m % 2 == 0 {
                        -x * &self.den
                    } else {
                        x * &self.den
                    }
                })
                .collect();
            (num, BigInt::one())
        } else {
            let full = &cpow[len - 1] * c;
            let num = h
                .into_iter()
                .enumerate()
                .map(|(m, x)| x * &cpow[len - 1 - m] * &self.den)
                .collect();
            (num, full)
        };
        let mut num = num;
        if den.is_negative() {
            den = -den;
            for x in &mut num {
                *x = -&*x;
            }
        }
        let mut out = FracSeries {
            denom: self.denom,
            trunc: self.trunc,
            num,
            den,
        };
        out.normalize();
        Ok(out)
    }

    /// Derivative with respect to `t`. The truncation drops by one.
    ///
    /// Fails with [`Error::NegativeExponent`] when a nonzero term has
    /// exponent strictly between 0 and 1, and with
    /// [`Error::PrecisionTooSmall`] when the truncation is at most 1.
    pub fn differentiate(&self) -> Result<Self> {
        let d = self.denom as usize;
        if let Some(e) = (1..d.min(self.num.len())).find(|&e| !self.num[e].is_zero()) {
            return Err(Error::NegativeExponent {
                exponent: fmt_ratio(Rational64::new(e as i64, d as i64)),
            });
        }
        let trunc = self.trunc - Rational64::one();
        if trunc <= Rational64::zero() {
            return Err(Error::PrecisionTooSmall {
                got: fmt_ratio(self.trunc),
                need: "1".into(),
            });
        }
        let mut out = Self::zero(self.denom, trunc);
        for (idx, slot) in out.num.iter_mut().enumerate() {
            let e = idx + d;
            if let Some(c) = self.num.get(e) {
                if !c.is_zero() {
                    *slot = c * BigInt::from(e);
                }
            }
        }
        out.den = &self.den * BigInt::from(self.denom);
        out.normalize();
        Ok(out)
    }

    /// `t * d/dt`, which keeps every exponent in place and never fails.
    pub fn euler_derivative(&self) -> Self {
        let mut out = self.clone();
        for (e, c) in out.num.iter_mut().enumerate() {
            if !c.is_zero() {
                *c *= BigInt::from(e);
            }
        }
        out.den *= BigInt::from(self.denom);
        out.normalize();
        out
    }

    /// Serialize as the golden-file text format.
    ///
    /// ```text
    /// fracseries D T
    /// e/D<TAB>numerator[/denominator]
    /// ```
    /// Only nonzero terms are listed.
    pub fn to_golden(&self) -> String {
        let mut s = format!("fracseries {} {}\n", self.denom, fmt_ratio(self.trunc));
        for (e, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            if r.is_integer() {
                let _ = writeln!(s, "{}/{}\t{}", e, self.denom, r.numer());
            } else {
                let _ = writeln!(s, "{}/{}\t{}/{}", e, self.denom, r.numer(), r.denom());
            }
        }
        s
    }

    pub fn from_golden(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "fracseries" {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let denom: u32 = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad grid denominator {:?}", fields[1])))?;
        if denom == 0 {
            return Err(Error::Parse("grid denominator must be positive".into()));
        }
        let trunc: Rational64 = fields[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad truncation {:?}", fields[2])))?;
        if trunc <= Rational64::zero() {
            return Err(Error::Parse("truncation must be positive".into()));
        }
        let mut coeffs = vec![BigRational::zero(); grid_len(trunc, denom)];
        for line in lines {
            let (exp, coef) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("missing tab in {line:?}")))?;
            let exp: Rational64 = exp
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {exp:?}")))?;
            let coef: BigRational = coef
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {coef:?}")))?;
            let idx = exp * Rational64::from_integer(i64::from(denom));
            if !idx.is_integer() || idx < Rational64::zero() {
                return Err(Error::Parse(format!("exponent {exp} off grid 1/{denom}")));
            }
            let idx = *idx.numer() as usize;
            if idx >= coeffs.len() {
                return Err(Error::Parse(format!("exponent {exp} beyond truncation")));
            }
            coeffs[idx] = coef;
        }
        Ok(Self::from_rationals(denom, trunc, &coeffs))
    }
}

/// Schoolbook convolution truncated to `len`, skipping zero entries so that
/// sparse theta-type series multiply in time proportional to their supports.
fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let nz_b: Vec<usize> = (0..b.len().min(len)).filter(|&j| !b[j].is_zero()).collect();
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for &j in &nz_b {
            if i + j >= len {
                break;
            }
            out[i + j] += x * &b[j];
        }
    }
    out
}

fn convolve_square(a: &[BigInt], len: usize) -> Vec<BigInt> {
    let nz: Vec<usize> = (0..a.len().min(len)).filter(|&j| !a[j].is_zero()).collect();
    let mut cross = vec![BigInt::zero(); len];
    let mut out = vec![BigInt::zero(); len];
    for (p, &i) in nz.iter().enumerate() {
        if 2 * i < len {
            out[2 * i] += &a[i] * &a[i];
        }
        for &j in &nz[p + 1..] {
            if i + j >= len {
                break;
            }
            cross[i + j] += &a[i] * &a[j];
        }
    }
    for (o, c) in out.iter_mut().zip(cross) {
        if !c.is_zero() {
            *o += c << 1;
        }
    }
    out
}

impl PartialEq for FracSeries {
    /// Value-wise equality on the common grid, up to the smaller truncation.
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::aligned(self, other);
        a.num
            .iter()
            .zip(&b.num)
            .all(|(x, y)| x * &b.den == y * &a.den)
    }
}

impl Add for &FracSeries {
    type Output = FracSeries;
    fn add(self, rhs: &FracSeries) -> FracSeries {
        FracSeries::linear_combine(self, rhs, &BigRational::one(), &BigRational::one())
    }
}

impl Sub for &FracSeries {
    type Output = FracSeries;
    fn sub(self, rhs: &FracSeries) -> FracSeries {
        FracSeries::linear_combine(self, rhs, &BigRational::one(), &-BigRational::one())
    }
}

impl Mul for &FracSeries {
    type Output = FracSeries;
    fn mul(self, rhs: &FracSeries) -> FracSeries {
        FracSeries::mul(self, rhs)
    }
}

impl Neg for &FracSeries {
    type Output = FracSeries;
    fn neg(self) -> FracSeries {
        self.scale(&-BigRational::one())
    }
}
