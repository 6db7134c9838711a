//! Forced coefficients of a putative extremal theta series.
//!
//! For a Type II code of length `n = 8j` over `Z/2kZ`, write `mu = floor(n/24)`
//! and `j = 3 mu + nu`. The Construction A lattice contains `sqrt(2k) Z^n`,
//! whose theta series is `theta_0 = theta_1^j`. Expanding
//!
//! ```text
//! E4^-j theta_0 = sum_s b_{2s} (Delta / E4^3)^s
//! ```
//!
//! fixes the extremal theta series `sum_{s<=mu} b_{2s} E4^{j-3s} Delta^s`,
//! and its first two coefficients beyond `theta_0` are
//!
//! ```text
//! beta1 = -b_{2(mu+1)}
//! beta2 = -b_{2(mu+2)} + b_{2(mu+1)} (24 mu - 240 nu + 744)
//! ```
//!
//! An extremal code needs `beta1 > 0` and `beta2 >= 0`.
//!
//! `b_{2s}` is indexed by `s` throughout: `b[s]` holds `b_{2s}`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactseries::FracSeries;
use crate::modforms::{delta24, eisenstein_e4, h_series, theta1, ThetaFamily};
use crate::serial;

/// Length parameters `n = 8j`, `mu = floor(n/24)`, `j = 3 mu + nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub n: u64,
    pub j: u64,
    pub mu: u64,
    pub nu: u64,
}

impl Dims {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(8) {
            return Err(Error::InvalidLength(n));
        }
        let j = n / 8;
        let mu = n / 24;
        Ok(Dims { n, j, mu, nu: j - 3 * mu })
    }

    /// `24 mu - 240 nu + 744`, the multiplier of `b_{2(mu+1)}` in `beta2`.
    pub fn threshold(&self) -> i64 {
        24 * self.mu as i64 - 240 * self.nu as i64 + 744
    }
}

fn whole(terms: usize) -> Rational64 {
    Rational64::from_integer(terms as i64)
}

/// Powers of `u = Delta / E4^3` below `t^terms`, stored from their leading
/// term on: `row(s)[m - s]` is the coefficient of `t^m` in `u^s`.
#[derive(Clone, Debug)]
pub struct DeltaRatioPowers {
    terms: usize,
    rows: Vec<Vec<BigInt>>,
}

impl DeltaRatioPowers {
    pub fn new(terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::PrecisionTooSmall { got: "0".into(), need: "0".into() });
        }
        let mut rows = vec![vec![BigInt::one()]
            .into_iter()
            .chain(std::iter::repeat_n(BigInt::zero(), terms - 1))
            .collect::<Vec<_>>()];
        if terms >= 2 {
            let e4_inv = eisenstein_e4(terms)?.invert()?;
            let u = &delta24(terms)? * &e4_inv.pow(3);
            let mut cur = u.clone();
            for s in 1..terms {
                let c = cur.integer_coeffs().expect("u has integer coefficients");
                debug_assert!(c[..s].iter().all(Zero::is_zero) && c[s].is_one());
                rows.push(c[s..].to_vec());
                if s + 1 < terms {
                    cur = &cur * &u;
                }
            }
        }
        Ok(DeltaRatioPowers { terms, rows })
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Coefficient of `t^m` in `u^s`.
    pub fn coeff(&self, s: usize, m: usize) -> BigInt {
        if m < s || m >= self.terms {
            BigInt::zero()
        } else {
            self.rows[s][m - s].clone()
        }
    }

    /// Expand `phi` in powers of `u`: returns the first `count` coefficients
    /// `b_s` with `phi = sum_s b_s u^s`, by forward substitution in the
    /// unitriangular system `phi_m = sum_{s<=m} b_s [t^m] u^s`.
    pub fn expand(&self, phi: &[BigInt], count: usize) -> Vec<BigInt> {
        assert!(count <= self.terms && count <= phi.len(), "precision too small for expansion");
        let mut b: Vec<BigInt> = Vec::with_capacity(count);
        for m in 0..count {
            let mut v = phi[m].clone();
            for (s, bs) in b.iter().enumerate() {
                if !bs.is_zero() {
                    v -= bs * &self.rows[s][m - s];
                }
            }
            b.push(v);
        }
        b
    }
}

/// Forced coefficients for one `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalProfile {
    pub n: u64,
    pub k: u32,
    pub j: u64,
    pub mu: u64,
    pub nu: u64,
    /// `b_{2s}` for `s = 0 ..= mu + 2`.
    #[serde(serialize_with = "serial::bigints")]
    pub b: Vec<BigInt>,
    #[serde(serialize_with = "serial::bigint")]
    pub beta1: BigInt,
    #[serde(serialize_with = "serial::bigint")]
    pub beta2: BigInt,
    pub threshold: i64,
}

impl ExtremalProfile {
    fn from_b(dims: Dims, k: u32, b: Vec<BigInt>) -> Self {
        let mu = dims.mu as usize;
        let beta1 = -&b[mu + 1];
        let beta2 = -&b[mu + 2] + &b[mu + 1] * BigInt::from(dims.threshold());
        ExtremalProfile {
            n: dims.n,
            k,
            j: dims.j,
            mu: dims.mu,
            nu: dims.nu,
            b,
            beta1,
            beta2,
            threshold: dims.threshold(),
        }
    }

    /// `|b_{2(mu+2)} / b_{2(mu+1)}|` as an exact rational.
    pub fn ratio(&self) -> Option<BigRational> {
        let mu = self.mu as usize;
        let lower = &self.b[mu + 1];
        (!lower.is_zero()).then(|| BigRational::new(self.b[mu + 2].abs(), lower.abs()))
    }
}

/// Shared state for computing many profiles at truncation `terms`:
/// `E4`, its inverse, and the powers of `Delta / E4^3`.
#[derive(Clone, Debug)]
pub struct ExtremalContext {
    terms: usize,
    e4_inv: FracSeries,
    powers: DeltaRatioPowers,
}

impl ExtremalContext {
    pub fn new(terms: usize) -> Result<Self> {
        let e4_inv = eisenstein_e4(terms)?.invert()?;
        let powers = DeltaRatioPowers::new(terms)?;
        Ok(ExtremalContext { terms, e4_inv, powers })
    }

    /// Context large enough for profiles of every length up to `n_max`.
    pub fn for_max_length(n_max: u64) -> Result<Self> {
        Self::new(Dims::new(n_max)?.mu as usize + 3)
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn powers(&self) -> &DeltaRatioPowers {
        &self.powers
    }

    /// `theta_1 / E4`, the series whose `j`-th power is `E4^-j theta_0`.
    pub fn theta_ratio(&self, k: u32) -> Result<FracSeries> {
        Ok(&theta1(k, self.terms)? * &self.e4_inv)
    }

    fn check_fits(&self, dims: Dims, extra: usize) -> Result<()> {
        let need = dims.mu as usize + extra + 1;
        if need > self.terms {
            return Err(Error::PrecisionTooSmall {
                got: self.terms.to_string(),
                need: (need - 1).to_string(),
            });
        }
        Ok(())
    }

    /// `b_{2s}` for `s = 0 ..= mu + extra`, given `phi = (theta_1 / E4)^j`.
    pub fn b_from_phi(&self, dims: Dims, extra: usize, phi: &FracSeries) -> Result<Vec<BigInt>> {
        self.check_fits(dims, extra)?;
        let coeffs = phi
            .integer_coeffs()
            .ok_or_else(|| Error::NonIntegral("phi".into()))?;
        Ok(self.powers.expand(coeffs, dims.mu as usize + extra + 1))
    }

    pub fn profile_from_phi(&self, dims: Dims, k: u32, phi: &FracSeries) -> Result<ExtremalProfile> {
        let b = self.b_from_phi(dims, 2, phi)?;
        Ok(ExtremalProfile::from_b(dims, k, b))
    }

    pub fn profile(&self, n: u64, k: u32) -> Result<ExtremalProfile> {
        let dims = Dims::new(n)?;
        self.check_fits(dims, 2)?;
        let phi = self.theta_ratio(k)?.pow(dims.j);
        self.profile_from_phi(dims, k, &phi)
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    Ok(())
}

/// `b_{2s}` for `s = 0 ..= mu + extra` by matching `(theta_1 / E4)^j`
/// against powers of `Delta / E4^3`.
pub fn b_coefficients(n: u64, k: u32, extra: usize) -> Result<Vec<BigInt>> {
    check_k(k)?;
    let dims = Dims::new(n)?;
    let ctx = ExtremalContext::new(dims.mu as usize + extra + 1)?;
    let phi = ctx.theta_ratio(k)?.pow(dims.j);
    ctx.b_from_phi(dims, extra, &phi)
}

/// The same coefficients through the Bürmann form
///
/// ```text
/// b_{2s} = (1/s) [t^{s-1}] phi'(t) (t/u)^s
///        = (-j/s) [t^{s-1}] E4^{3s-j-1} theta_1^{j-1} (theta_1 E4' - theta_1' E4) h^s
/// ```
///
/// which shares no intermediate series with [`b_coefficients`].
pub fn b_coefficients_burmann(n: u64, k: u32, extra: usize) -> Result<Vec<BigInt>> {
    check_k(k)?;
    let dims = Dims::new(n)?;
    let top = dims.mu as usize + extra;
    let mut b = vec![BigInt::one()];
    if top == 0 {
        return Ok(b);
    }
    let terms = top;
    let e4_full = eisenstein_e4(terms + 1)?;
    let th_full = theta1(k, terms + 1)?;
    let e4 = e4_full.truncate(whole(terms));
    let th = th_full.truncate(whole(terms));
    let wronskian = &(&th * &e4_full.differentiate()?) - &(&th_full.differentiate()? * &e4);
    let h = h_series(terms)?;
    let j = dims.j;
    let e4_power = if j <= 2 {
        e4.pow(2 - j)
    } else {
        e4.invert()?.pow(j - 2)
    };
    let step = &e4.pow(3) * &h;
    let mut x = &(&(&th.pow(j - 1) * &wronskian) * &e4_power) * &h;
    let minus_j = -BigInt::from(j);
    for s in 1..=top {
        let c = x.coeff(s - 1);
        let v = c * BigRational::from_integer(minus_j.clone()) / BigRational::from_integer(BigInt::from(s));
        if !v.is_integer() {
            return Err(Error::NonIntegral(format!("b_{} = {v}", 2 * s)));
        }
        b.push(v.to_integer());
        if s < top {
            x = &x * &step;
        }
    }
    Ok(b)
}

pub fn profile(n: u64, k: u32) -> Result<ExtremalProfile> {
    check_k(k)?;
    let dims = Dims::new(n)?;
    ExtremalContext::new(dims.mu as usize + 3)?.profile(n, k)
}

/// `(beta1, beta2)` for length `n` over `Z/2kZ`.
pub fn beta_stars(n: u64, k: u32) -> Result<(BigInt, BigInt)> {
    let p = profile(n, k)?;
    Ok((p.beta1, p.beta2))
}

/// `sum_{s<=mu} b_{2s} E4^{j-3s} Delta^s` below `t^terms`.
pub fn extremal_theta(n: u64, k: u32, terms: usize) -> Result<FracSeries> {
    check_k(k)?;
    let dims = Dims::new(n)?;
    let mu = dims.mu as usize;
    if terms <= mu + 2 {
        return Err(Error::PrecisionTooSmall {
            got: terms.to_string(),
            need: (mu + 2).to_string(),
        });
    }
    let b = b_coefficients(n, k, 0)?;
    let e4 = eisenstein_e4(terms)?;
    let delta = delta24(terms)?;
    let e4_cubed = e4.pow(3);
    // E4^{j-3s} = E4^nu (E4^3)^{mu-s}; accumulate from s = mu downwards.
    let mut e4_part = e4.pow(dims.nu);
    let delta_pows: Vec<FracSeries> = {
        let mut v = vec![FracSeries::one(1, whole(terms))];
        for _ in 0..mu {
            let next = v.last().unwrap() * &delta;
            v.push(next);
        }
        v
    };
    let mut total = FracSeries::zero(1, whole(terms));
    for s in (0..=mu).rev() {
        let term = &e4_part * &delta_pows[s];
        total = FracSeries::linear_combine(
            &total,
            &term,
            &BigRational::one(),
            &BigRational::from_integer(b[s].clone()),
        );
        if s > 0 {
            e4_part = &e4_part * &e4_cubed;
        }
    }
    Ok(total)
}

/// Smallest coefficient found in one of the checked series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityComponent {
    pub label: String,
    #[serde(serialize_with = "serial::rational")]
    pub min_coefficient: BigRational,
    #[serde(serialize_with = "serial::ratio64")]
    pub at_exponent: Rational64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub n: u64,
    pub k: u32,
    /// Largest exponent of `t` checked.
    pub max_exponent: u64,
    #[serde(serialize_with = "serial::rational")]
    pub min_coefficient: BigRational,
    #[serde(serialize_with = "serial::ratio64")]
    pub min_exponent: Rational64,
    pub min_source: String,
    pub components: Vec<PositivityComponent>,
    pub pass: bool,
}

/// The `k`-dependent series the positivity check multiplies by powers of
/// `theta_1` (resp. `f_0^8`).
#[derive(Clone, Debug)]
pub struct CertificateBasis {
    k: u32,
    terms: usize,
    theta1: FracSeries,
    /// `theta_1 E4' - theta_1' E4`.
    wronskian: FracSeries,
    f0: FracSeries,
    /// `t (f_0 f_i' - f_0' f_i)` for `i = 1 ..= k`.
    class_wronskians: Vec<FracSeries>,
}

impl CertificateBasis {
    /// Basis good for every length with `mu + 2 <= terms`.
    pub fn new(k: u32, terms: usize) -> Result<Self> {
        check_k(k)?;
        let e4 = eisenstein_e4(terms + 1)?;
        let th = theta1(k, terms + 1)?;
        let trunc = whole(terms);
        let wronskian = &(&th.truncate(trunc) * &e4.differentiate()?)
            - &(&th.differentiate()? * &e4.truncate(trunc));
        let fam = ThetaFamily::new(k, terms)?;
        let f0 = fam.f(0).clone();
        let df0 = f0.euler_derivative();
        let class_wronskians = (1..=k)
            .map(|i| {
                let fi = fam.f(i);
                &(&f0 * &fi.euler_derivative()) - &(&df0 * fi)
            })
            .collect();
        Ok(CertificateBasis {
            k,
            terms,
            theta1: th.truncate(trunc),
            wronskian,
            f0,
            class_wronskians,
        })
    }

    pub fn theta1(&self) -> &FracSeries {
        &self.theta1
    }

    pub fn f0(&self) -> &FracSeries {
        &self.f0
    }

    /// Check positivity for `dims`, given `theta_1^{j-1}` and `f_0^{8j-1}`.
    pub fn certify(&self, dims: Dims, theta_pow: &FracSeries, f0_pow: &FracSeries) -> Result<PositivityReport> {
        let mu = dims.mu as usize;
        if mu + 2 > self.terms {
            return Err(Error::PrecisionTooSmall {
                got: self.terms.to_string(),
                need: (mu + 1).to_string(),
            });
        }
        let mut components = Vec::with_capacity(self.k as usize + 1);
        // theta_1^{j-1} (theta_1 E4' - theta_1' E4): every coefficient of
        // t^0 ..= t^mu must be positive.
        let main = theta_pow.truncate(whole(mu + 1)).mul(&self.wronskian);
        let (idx, c) = (0..=mu)
            .map(|e| (e, main.coeff(e)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty range");
        components.push(PositivityComponent {
            label: "theta".into(),
            min_coefficient: c,
            at_exponent: Rational64::from_integer(idx as i64),
        });
        // t f_0^{8j-1} (f_0 f_i' - f_0' f_i): terms of P_i with exponent <= mu,
        // i.e. exponent <= mu + 1 after the factor t. Unrepresented exponents
        // have coefficient zero and are skipped.
        let grid = 4 * self.k as usize;
        let last = (mu + 1) * grid;
        let f0_pow = f0_pow.truncate(whole(mu + 2));
        for (i, w) in self.class_wronskians.iter().enumerate() {
            let p = f0_pow.mul(w);
            let mut best: Option<(usize, BigRational)> = None;
            for e in 0..=last.min(p.grid_len() - 1) {
                if p.numerators()[e].is_zero() {
                    continue;
                }
                let c = p.coeff(e);
                if best.as_ref().is_none_or(|(_, b)| &c < b) {
                    best = Some((e, c));
                }
            }
            if let Some((e, c)) = best {
                components.push(PositivityComponent {
                    label: format!("P{}", i + 1),
                    min_coefficient: c,
                    at_exponent: Rational64::new(e as i64, grid as i64) - Rational64::one(),
                });
            }
        }
        let worst = components
            .iter()
            .min_by(|a, b| a.min_coefficient.cmp(&b.min_coefficient))
            .expect("theta component present")
            .clone();
        Ok(PositivityReport {
            n: dims.n,
            k: self.k,
            max_exponent: dims.mu,
            pass: worst.min_coefficient.is_positive(),
            min_coefficient: worst.min_coefficient,
            min_exponent: worst.at_exponent,
            min_source: worst.label,
            components,
        })
    }
}

/// Check that `theta_1^{j-1} (theta_1 E4' - theta_1' E4)` and every
/// `f_0^{8j-1} (f_0 f_i' - f_0' f_i)` have positive coefficients up to `t^mu`.
///
/// `P_i` exponents are reported as exponents of `P_i` itself (they may be
/// negative or fractional).
pub fn positivity_certificate(n: u64, k: u32) -> Result<PositivityReport> {
    let dims = Dims::new(n)?;
    let basis = CertificateBasis::new(k, dims.mu as usize + 2)?;
    let theta_pow = basis.theta1().pow(dims.j - 1);
    let f0_pow = basis.f0().pow(8 * dims.j - 1);
    basis.certify(dims, &theta_pow, &f0_pow)
}

/// `((s+2)(1+2ky)^2 - l) / 4k` with `l = (1+2ky)^2 + sum (2k x_i)^2`, for the
/// `s + 1` integers `xs`.
pub fn eq3_value(s: usize, k: u32, y: i64, xs: &[i64]) -> Result<BigRational> {
    check_k(k)?;
    if xs.len() != s + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} values of x, got {}",
            s + 1,
            xs.len()
        )));
    }
    let two_k = BigInt::from(2 * k);
    let lead = (BigInt::one() + &two_k * y).pow(2);
    let l = xs
        .iter()
        .fold(lead.clone(), |acc, &x| acc + (&two_k * x).pow(2));
    let num = BigInt::from(s + 2) * lead - l;
    Ok(BigRational::new(num, BigInt::from(4 * k)))
}

/// `l = (1+2ky)^2 + sum (2k x_i)^2`.
pub fn eq3_l(k: u32, y: i64, xs: &[i64]) -> BigInt {
    let two_k = BigInt::from(2 * k);
    xs.iter()
        .fold((BigInt::one() + &two_k * y).pow(2), |acc, &x| acc + (&two_k * x).pow(2))
}

fn length_range(n_from: u64, n_to: u64) -> Result<Vec<u64>> {
    Dims::new(n_from)?;
    Dims::new(n_to)?;
    if n_from > n_to {
        return Err(Error::InvalidArgument(format!("empty range {n_from}..{n_to}")));
    }
    Ok((n_from..=n_to).step_by(8).collect())
}

/// Split `ns` into contiguous chunks, one per worker, run `job` on each in
/// parallel, and concatenate the results in input order.
fn run_chunked<T, F>(ns: &[u64], job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[u64]) -> Result<Vec<T>> + Sync,
{
    if ns.is_empty() {
        return Ok(Vec::new());
    }
    let workers = rayon::current_num_threads().clamp(1, ns.len());
    let size = ns.len().div_ceil(workers);
    let parts: Vec<Result<Vec<T>>> = ns.par_chunks(size).map(&job).collect();
    let mut out = Vec::with_capacity(ns.len());
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Profiles for an ascending list of lengths, updating `(theta_1/E4)^j`
/// incrementally between consecutive lengths.
pub fn profiles(ctx: &ExtremalContext, k: u32, ns: &[u64]) -> Result<Vec<ExtremalProfile>> {
    check_k(k)?;
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("lengths must be strictly increasing".into()));
    }
    let ratio = ctx.theta_ratio(k)?;
    run_chunked(ns, |chunk| {
        let mut out = Vec::with_capacity(chunk.len());
        let mut phi: Option<(u64, FracSeries)> = None;
        for &n in chunk {
            let dims = Dims::new(n)?;
            let next = match phi.take() {
                None => ratio.pow(dims.j),
                Some((j, p)) => match dims.j - j {
                    1 => &p * &ratio,
                    d => &p * &ratio.pow(d),
                },
            };
            out.push(ctx.profile_from_phi(dims, k, &next)?);
            phi = Some((dims.j, next));
        }
        Ok(out)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossoverRow {
    pub n: u64,
    #[serde(serialize_with = "serial::bigint")]
    pub beta1: BigInt,
    #[serde(serialize_with = "serial::bigint")]
    pub beta2: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossoverReport {
    pub k: u32,
    pub n_from: u64,
    pub n_to: u64,
    /// Least scanned `n` with `beta2 < 0`.
    pub first_negative: Option<u64>,
    pub rows: Vec<CrossoverRow>,
}

/// Exact `beta1`, `beta2` for every `n = 0 mod 8` in `[n_from, n_to]`.
pub fn crossover_scan(k: u32, n_from: u64, n_to: u64) -> Result<CrossoverReport> {
    let ns = length_range(n_from, n_to)?;
    let ctx = ExtremalContext::for_max_length(n_to)?;
    crossover_scan_with(&ctx, k, &ns)
}

/// [`crossover_scan`] against a caller-provided context, so several `k`
/// can share one table of `Delta / E4^3` powers.
pub fn crossover_scan_with(ctx: &ExtremalContext, k: u32, ns: &[u64]) -> Result<CrossoverReport> {
    let rows: Vec<CrossoverRow> = profiles(ctx, k, ns)?
        .into_iter()
        .map(|p| CrossoverRow { n: p.n, beta1: p.beta1, beta2: p.beta2 })
        .collect();
    let first_negative = rows.iter().find(|r| r.beta2.is_negative()).map(|r| r.n);
    Ok(CrossoverReport {
        k,
        n_from: ns.first().copied().unwrap_or(0),
        n_to: ns.last().copied().unwrap_or(0),
        first_negative,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Row {
    pub n: u64,
    #[serde(serialize_with = "serial::bigint")]
    pub beta1: BigInt,
    pub certificate: PositivityReport,
}

impl Theorem1Row {
    pub fn pass(&self) -> bool {
        self.beta1.is_positive() && self.certificate.pass
    }
}

/// `beta1 > 0` and the positivity certificate for every `n = 0 mod 8` up to
/// `n_max`.
pub fn theorem1_sweep(k: u32, n_max: u64) -> Result<Vec<Theorem1Row>> {
    let ns = length_range(8, n_max)?;
    let ctx = ExtremalContext::for_max_length(n_max)?;
    theorem1_sweep_with(&ctx, k, &ns)
}

pub fn theorem1_sweep_with(ctx: &ExtremalContext, k: u32, ns: &[u64]) -> Result<Vec<Theorem1Row>> {
    let profs = profiles(ctx, k, ns)?;
    let n_max = *ns.last().unwrap_or(&8);
    let basis = CertificateBasis::new(k, Dims::new(n_max)?.mu as usize + 2)?;
    let f0_8 = basis.f0().pow(8);
    let certs = run_chunked(ns, |chunk| {
        let mut out = Vec::with_capacity(chunk.len());
        let mut state: Option<(u64, FracSeries, FracSeries)> = None;
        for &n in chunk {
            let dims = Dims::new(n)?;
            let (theta_pow, f0_pow) = match state.take() {
                None => (basis.theta1().pow(dims.j - 1), basis.f0().pow(8 * dims.j - 1)),
                Some((j, tp, fp)) => {
                    let d = dims.j - j;
                    (&tp * &basis.theta1().pow(d), &fp * &f0_8.pow(d))
                }
            };
            out.push(basis.certify(dims, &theta_pow, &f0_pow)?);
            state = Some((dims.j, theta_pow, f0_pow));
        }
        Ok(out)
    })?;
    Ok(profs
        .into_iter()
        .zip(certs)
        .map(|(p, certificate)| Theorem1Row { n: p.n, beta1: p.beta1, certificate })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn dims_and_threshold() {
        let d = Dims::new(8).unwrap();
        assert_eq!((d.j, d.mu, d.nu), (1, 0, 1));
        assert_eq!(d.threshold(), 504);
        let d = Dims::new(5208).unwrap();
        assert_eq!(d.j, 3 * d.mu + d.nu);
        assert_eq!(Dims::new(12), Err(Error::InvalidLength(12)));
        assert_eq!(Dims::new(0), Err(Error::InvalidLength(0)));
    }

    #[test]
    fn small_b_values() {
        assert_eq!(&b_coefficients(8, 1, 0).unwrap()[..], &[big(1)]);
        assert_eq!(&b_coefficients(8, 1, 1).unwrap()[..], &[big(1), big(-224)]);
        assert_eq!(&b_coefficients(8, 2, 1).unwrap()[..], &[big(1), big(-240)]);
        assert_eq!(b_coefficients(24, 1, 0).unwrap()[1], big(-672));
        assert_eq!(b_coefficients(20, 1, 0), Err(Error::InvalidLength(20)));
    }

    #[test]
    fn burmann_agrees_on_small_cases() {
        for (n, k) in [(8, 1), (8, 2), (24, 1), (48, 3), (72, 6)] {
            assert_eq!(b_coefficients(n, k, 2).unwrap(), b_coefficients_burmann(n, k, 2).unwrap());
        }
        assert_eq!(b_coefficients_burmann(8, 1, 0).unwrap(), vec![big(1)]);
    }

    #[test]
    fn beta_examples() {
        let (b1, _) = beta_stars(8, 1).unwrap();
        assert_eq!(b1, big(224));
        let (b1, _) = beta_stars(8, 2).unwrap();
        assert_eq!(b1, big(240));
        let p = profile(24, 1).unwrap();
        assert_eq!(p.beta1, -&p.b[2]);
        assert!(p.beta1.is_positive());
    }

    #[test]
    fn extremal_theta_small() {
        let e4 = eisenstein_e4(6).unwrap();
        assert_eq!(extremal_theta(8, 2, 6).unwrap(), e4);
        let th = extremal_theta(8, 1, 3).unwrap();
        assert_eq!(th.coeff(1), BigRational::from_integer(big(240)));
        let th24 = extremal_theta(24, 1, 4).unwrap();
        let theta0 = theta1(1, 4).unwrap().pow(3);
        assert_eq!(th24.coeff(0), theta0.coeff(0));
        assert_eq!(th24.coeff(1), theta0.coeff(1));
        assert!(matches!(extremal_theta(24, 1, 3), Err(Error::PrecisionTooSmall { .. })));
    }

    #[test]
    fn positivity_small() {
        for (n, k) in [(8, 1), (24, 1), (48, 6), (96, 4)] {
            let r = positivity_certificate(n, k).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.components.len(), k as usize + 1);
        }
        let r = positivity_certificate(8, 1).unwrap();
        assert_eq!(r.components[0].min_coefficient, BigRational::from_integer(big(224)));
    }

    #[test]
    fn eq3_examples() {
        assert_eq!(eq3_value(7, 1, 0, &[0; 8]).unwrap(), BigRational::from_integer(big(2)));
        assert_eq!(
            eq3_value(1, 1, 0, &[1, 1]).unwrap(),
            BigRational::new(big(-3), big(2))
        );
        assert_eq!(eq3_l(1, 0, &[1, 1]), big(9));
        assert!(eq3_value(2, 1, 0, &[0]).is_err());
    }

    #[test]
    fn scan_matches_single_profiles() {
        let rep = crossover_scan(2, 8, 96).unwrap();
        assert_eq!(rep.rows.len(), 12);
        for row in &rep.rows {
            let (b1, b2) = beta_stars(row.n, 2).unwrap();
            assert_eq!((&row.beta1, &row.beta2), (&b1, &b2));
        }
        assert_eq!(rep.first_negative, None);
        assert!(crossover_scan(1, 16, 8).is_err());
        assert!(crossover_scan(1, 12, 24).is_err());
    }
}
