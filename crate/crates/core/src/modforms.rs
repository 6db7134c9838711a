//! The q-expansions used throughout: `E4`, `Delta`, `h = prod (1 - t^r)^-24`,
//! the Construction A theta functions `f_0 .. f_k`, and `theta_1`.
//!
//! Every series is in the variable `t = q^2`. Integer-weight forms live on
//! the grid `D = 1`; the theta functions of `Z/2kZ` residue classes live on
//! `D = 4k`, where `f_i` has a term at grid index `x^2` for each integer
//! `x = i (mod 2k)`.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactseries::FracSeries;

fn whole(terms: usize) -> Rational64 {
    Rational64::from_integer(terms as i64)
}

/// Sum of cubes of the positive divisors of `m`.
pub fn sigma3(m: u64) -> u128 {
    assert!(m >= 1, "sigma3 is defined for m >= 1");
    let mut total = 0u128;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let e = m / d;
            total += u128::from(d).pow(3);
            if e != d {
                total += u128::from(e).pow(3);
            }
        }
        d += 1;
    }
    total
}

/// `E4 = 1 + 240 sum sigma3(m) t^m`, truncated at `t^terms`.
pub fn eisenstein_e4(terms: usize) -> Result<FracSeries> {
    if terms < 1 {
        return Err(Error::PrecisionTooSmall { got: terms.to_string(), need: "0".into() });
    }
    let coeffs = (0..terms).map(|m| {
        if m == 0 {
            BigInt::from(1)
        } else {
            BigInt::from(240u32) * BigInt::from(sigma3(m as u64))
        }
    });
    Ok(FracSeries::from_integers(1, whole(terms), coeffs))
}

/// Coefficients of `prod_{m>=1} (1 - t^m)^power` below `t^len`, built by
/// repeated in-place multiplication with `(1 - t^m)^{sign}`.
fn eta_power(len: usize, power: i32) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::from(1);
    for m in 1..len {
        for _ in 0..power.unsigned_abs() {
            if power > 0 {
                for i in (m..len).rev() {
                    let (lo, hi) = c.split_at_mut(i);
                    hi[0] -= &lo[i - m];
                }
            } else {
                for i in m..len {
                    let (lo, hi) = c.split_at_mut(i);
                    hi[0] += &lo[i - m];
                }
            }
        }
    }
    c
}

/// `Delta = t prod (1 - t^m)^24`, truncated at `t^terms`.
pub fn delta24(terms: usize) -> Result<FracSeries> {
    if terms < 2 {
        return Err(Error::PrecisionTooSmall { got: terms.to_string(), need: "1".into() });
    }
    let body = eta_power(terms - 1, 24);
    let coeffs = std::iter::once(BigInt::zero()).chain(body);
    Ok(FracSeries::from_integers(1, whole(terms), coeffs))
}

/// `h = prod (1 - t^r)^-24 = t / Delta`, truncated at `t^terms`.
pub fn h_series(terms: usize) -> Result<FracSeries> {
    if terms < 1 {
        return Err(Error::PrecisionTooSmall { got: terms.to_string(), need: "0".into() });
    }
    Ok(FracSeries::from_integers(1, whole(terms), eta_power(terms, -24)))
}

/// `f_i = sum_{x = i mod 2k} t^{x^2 / 4k}` on the grid `D = 4k`, truncated
/// at `t^terms`.
///
/// This is the theta series of one residue class. Classes `i` and `-i`
/// give the same series, so `f_i` is also the factor contributed by a
/// codeword coordinate equal to `+-i`.
pub fn theta_f(k: u32, i: u32, terms: usize) -> Result<FracSeries> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if i > k {
        return Err(Error::IndexOutOfRange { i, k });
    }
    if terms < 1 {
        return Err(Error::PrecisionTooSmall { got: terms.to_string(), need: "0".into() });
    }
    let denom = 4 * k;
    let trunc = whole(terms);
    let len = FracSeries::zero(denom, trunc).grid_len() as i64;
    let modulus = 2 * i64::from(k);
    let mut coeffs = vec![0i64; len as usize];
    let bound = (len as f64).sqrt() as i64 + 1;
    for x in -bound..=bound {
        if x * x < len && x.rem_euclid(modulus) == i64::from(i) {
            coeffs[(x * x) as usize] += 1;
        }
    }
    Ok(FracSeries::from_i64s(denom, trunc, &coeffs))
}

/// All `k + 1` class theta functions `f_0 .. f_k` at a common precision.
#[derive(Clone, Debug)]
pub struct ThetaFamily {
    pub k: u32,
    pub terms: usize,
    pub members: Vec<FracSeries>,
}

impl ThetaFamily {
    pub fn new(k: u32, terms: usize) -> Result<Self> {
        let members = (0..=k).map(|i| theta_f(k, i, terms)).collect::<Result<_>>()?;
        Ok(ThetaFamily { k, terms, members })
    }

    pub fn f(&self, i: u32) -> &FracSeries {
        &self.members[i as usize]
    }
}

/// Theta series of `sqrt(2k) Z^8`, i.e. `f_0^8`, on the integer grid.
/// The coefficient of `t^m` counts `x` in `Z^8` with `k |x|^2 = m`.
pub fn theta1(k: u32, terms: usize) -> Result<FracSeries> {
    theta_f(k, 0, terms)?.pow(8).coarsen(1)
}
