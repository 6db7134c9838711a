//! Codes over `Z/2kZ`: Euclidean weights, symmetrized weight enumerators,
//! Construction A theta series, and length-8 Type II codes.
//!
//! Only free codes are handled: `r` generator rows spanning `(2k)^r`
//! distinct codewords.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactseries::FracSeries;
use crate::modforms::ThetaFamily;

/// Largest code size the enumerating operations accept.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Largest norm cap accepted by [`theta_cosets`].
pub const MAX_NORM_CAP: u32 = 12;

/// Random candidates tried by [`search_c8`] after the structured ones.
pub const SEARCH_BUDGET: u64 = 2_000_000;

const DATABASE: [&str; 2] = [include_str!("../data/c8_k1.zcode"), include_str!("../data/c8_k2.zcode")];

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    Ok(())
}

/// Signed representative of `x mod 2k` in `(-k, k]`.
pub fn rho(k: u32, x: u32) -> Result<i64> {
    check_k(k)?;
    let m = 2 * k;
    if x >= m {
        return Err(Error::RangeError { x: i64::from(x), modulus: m });
    }
    Ok(if x <= k { i64::from(x) } else { i64::from(x) - i64::from(m) })
}

/// `sum rho(x_i)^2`.
pub fn euclidean_weight(k: u32, word: &[u32]) -> Result<u64> {
    word.iter().try_fold(0u64, |acc, &x| {
        let r = rho(k, x)?;
        Ok(acc + (r * r) as u64)
    })
}

/// A free code over `Z/2kZ` given by generator rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearCode {
    pub k: u32,
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

impl LinearCode {
    pub fn new(k: u32, n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        check_k(k)?;
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!("row of length {} in a length {n} code", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= 2 * k) {
                return Err(Error::RangeError { x: i64::from(x), modulus: 2 * k });
            }
        }
        Ok(LinearCode { k, n, rows })
    }

    /// `[I_4 | A]` over `Z/2kZ`, with `A` given by signed entries.
    pub fn standard_form(k: u32, a: &[[i64; 4]; 4]) -> Result<Self> {
        check_k(k)?;
        let m = 2 * i64::from(k);
        let rows = (0..4)
            .map(|i| {
                let mut row = vec![0u32; 8];
                row[i] = 1;
                for (c, &v) in a[i].iter().enumerate() {
                    row[4 + c] = v.rem_euclid(m) as u32;
                }
                row
            })
            .collect();
        LinearCode::new(k, 8, rows)
    }

    pub fn modulus(&self) -> u32 {
        2 * self.k
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `(2k)^r`, the size of the code if it is free.
    pub fn size(&self) -> Result<u64> {
        let m = u64::from(self.modulus());
        let mut total = 1u64;
        for _ in 0..self.rank() {
            total = total
                .checked_mul(m)
                .filter(|&t| t <= ENUMERATION_LIMIT)
                .ok_or_else(|| Error::TooLarge(format!("(2k)^r with 2k = {m}, r = {}", self.rank())))?;
        }
        Ok(total)
    }

    /// Inner products of all generator pairs vanish mod `2k`.
    pub fn gram_vanishes(&self) -> bool {
        let m = u64::from(self.modulus());
        self.rows.iter().enumerate().all(|(i, a)| {
            self.rows[i..].iter().all(|b| {
                a.iter().zip(b).map(|(&x, &y)| u64::from(x) * u64::from(y)).sum::<u64>() % m == 0
            })
        })
    }

    /// Every codeword once per coefficient vector, in mixed-radix order.
    pub fn codewords(&self) -> Result<Codewords<'_>> {
        self.size()?;
        Ok(Codewords { code: self, coeffs: vec![0; self.rank()], done: false })
    }

    /// Text form: `zcode k n r` followed by the rows.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "zcode {} {} {}", self.k, self.n, self.rank())?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for LinearCode {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "zcode" {
            return Err(Error::Parse(format!("bad header {header:?}, want \"zcode k n r\"")));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
        let k = u32::try_from(num(fields[1])?).map_err(|_| Error::Parse("k too large".into()))?;
        let n = num(fields[2])? as usize;
        let r = num(fields[3])? as usize;
        let mut rows = Vec::with_capacity(r);
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|s| s.parse::<u32>().map_err(|_| Error::Parse(format!("bad residue {s:?}"))))
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        if rows.len() != r {
            return Err(Error::Parse(format!("header says {r} rows, found {}", rows.len())));
        }
        LinearCode::new(k, n, rows)
    }
}

/// Iterator over `sum_i a_i g_i` for all coefficient vectors `a`.
pub struct Codewords<'a> {
    code: &'a LinearCode,
    coeffs: Vec<u32>,
    done: bool,
}

impl Iterator for Codewords<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let m = self.code.modulus();
        let mut word = vec![0u32; self.code.n];
        for (a, row) in self.coeffs.iter().zip(&self.code.rows) {
            if *a == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(row) {
                *w = (*w + a * g) % m;
            }
        }
        self.done = true;
        for a in self.coeffs.iter_mut() {
            *a += 1;
            if *a < m {
                self.done = false;
                break;
            }
            *a = 0;
        }
        Some(word)
    }
}

/// All codewords, each once per coefficient vector.
pub fn enumerate_codewords(code: &LinearCode) -> Result<Vec<Vec<u32>>> {
    Ok(code.codewords()?.collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeIIReport {
    pub k: u32,
    pub n: usize,
    pub gram_vanishes: bool,
    /// Number of distinct codewords.
    pub cardinality: u64,
    /// `(2k)^{n/2}`.
    pub expected_cardinality: u64,
    pub self_dual: bool,
    pub all_weights_div_4k: bool,
    /// Smallest nonzero Euclidean weight.
    pub d_e: Option<u64>,
    pub type2: bool,
}

/// Self-duality and the Type II weight condition, by full enumeration.
pub fn verify_type2(code: &LinearCode) -> Result<TypeIIReport> {
    code.size()?;
    let m = u64::from(code.modulus());
    let expected = if code.n.is_multiple_of(2) {
        (0..code.n / 2).try_fold(1u64, |acc, _| acc.checked_mul(m))
    } else {
        None
    };
    let four_k = 4 * u64::from(code.k);
    let mut seen = HashSet::new();
    let mut divisible = true;
    let mut d_e: Option<u64> = None;
    for word in code.codewords()? {
        let w = euclidean_weight(code.k, &word)?;
        divisible &= w % four_k == 0;
        if word.iter().any(|&x| x != 0) {
            d_e = Some(d_e.map_or(w, |d| d.min(w)));
        }
        seen.insert(word);
    }
    let gram = code.gram_vanishes();
    let cardinality = seen.len() as u64;
    let self_dual = gram && 2 * code.rank() == code.n && Some(cardinality) == expected;
    Ok(TypeIIReport {
        k: code.k,
        n: code.n,
        gram_vanishes: gram,
        cardinality,
        expected_cardinality: expected.unwrap_or(0),
        self_dual,
        all_weights_div_4k: divisible,
        d_e,
        type2: self_dual && divisible,
    })
}

/// Symmetrized weight enumerator: composition `(n_0, .., n_k)` to count,
/// where `n_i` counts coordinates with `|rho(c_j)| = i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweTable {
    pub k: u32,
    pub n: usize,
    pub counts: BTreeMap<Vec<u32>, u64>,
}

impl SweTable {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

impl Serialize for SweTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            composition: &'a [u32],
            count: u64,
        }
        #[derive(Serialize)]
        struct Table<'a> {
            k: u32,
            n: usize,
            entries: Vec<Entry<'a>>,
        }
        let entries = self.counts.iter().map(|(c, &count)| Entry { composition: c, count }).collect();
        Table { k: self.k, n: self.n, entries }.serialize(s)
    }
}

pub fn composition(k: u32, word: &[u32]) -> Result<Vec<u32>> {
    let mut comp = vec![0u32; k as usize + 1];
    for &x in word {
        comp[rho(k, x)?.unsigned_abs() as usize] += 1;
    }
    Ok(comp)
}

pub fn swe(code: &LinearCode) -> Result<SweTable> {
    let mut counts = BTreeMap::new();
    for word in code.codewords()? {
        *counts.entry(composition(code.k, &word)?).or_insert(0u64) += 1;
    }
    Ok(SweTable { k: code.k, n: code.n, counts })
}

/// `sum count * prod f_i^{n_i}`, truncated at `t^terms`; moved to the
/// integer grid when every exponent is integral.
pub fn theta_substitution(table: &SweTable, terms: usize) -> Result<FracSeries> {
    let fam = ThetaFamily::new(table.k, terms)?;
    let denom = 4 * table.k;
    let trunc = Rational64::from_integer(terms as i64);
    // powers[i][e] = f_i^e
    let mut powers: Vec<Vec<FracSeries>> = Vec::new();
    for i in 0..=table.k {
        let f = fam.f(i);
        let mut row = vec![FracSeries::one(denom, trunc)];
        for e in 1..=table.n {
            let next = &row[e - 1] * f;
            row.push(next);
        }
        powers.push(row);
    }
    let mut total = FracSeries::zero(denom, trunc);
    for (comp, &count) in &table.counts {
        let mut term = FracSeries::one(denom, trunc);
        for (i, &e) in comp.iter().enumerate() {
            if e > 0 {
                term = &term * &powers[i][e as usize];
            }
        }
        total = &total + &term.scale(&BigRational::from_integer(BigInt::from(count)));
    }
    Ok(total.coarsen(1).unwrap_or(total))
}

/// Theta series of `A_{2k}(C) = (rho(C) + 2k Z^n) / sqrt(2k)` by listing
/// the lattice vectors of norm at most `norm_cap`.
///
/// A vector of norm `N` contributes `t^{N/2}`; the result lives on the grid
/// `D = 4k` and keeps every exponent up to `norm_cap / 2`.
pub fn theta_cosets(code: &LinearCode, norm_cap: u32) -> Result<FracSeries> {
    if norm_cap > MAX_NORM_CAP {
        return Err(Error::TooLarge(format!("norm cap {norm_cap} above {MAX_NORM_CAP}")));
    }
    let k = i64::from(code.k);
    let m = 2 * k;
    // |v|^2 <= 2k * cap, and the t-exponent of v is |v|^2 / 4k
    let limit = m * i64::from(norm_cap);
    let mut counts = vec![0i64; limit as usize + 1];
    for word in code.codewords()? {
        let base: Vec<i64> = word.iter().map(|&x| rho(code.k, x)).collect::<Result<_>>()?;
        // per-coordinate options ordered by square
        let options: Vec<Vec<i64>> = base
            .iter()
            .map(|&r| {
                let mut vals: Vec<i64> = Vec::new();
                let reach = (limit as f64).sqrt() as i64 / m + 2;
                for s in -reach..=reach {
                    let v = r + m * s;
                    if v * v <= limit {
                        vals.push(v * v);
                    }
                }
                vals.sort_unstable();
                vals
            })
            .collect();
        let floor: Vec<i64> = options.iter().map(|o| o.first().copied().unwrap_or(i64::MAX)).collect();
        let mut rest_min = vec![0i64; floor.len() + 1];
        for i in (0..floor.len()).rev() {
            rest_min[i] = rest_min[i + 1].saturating_add(floor[i]);
        }
        fn walk(i: usize, norm: i64, limit: i64, options: &[Vec<i64>], rest_min: &[i64], counts: &mut [i64]) {
            if norm.saturating_add(rest_min[i]) > limit {
                return;
            }
            if i == options.len() {
                counts[norm as usize] += 1;
                return;
            }
            for &sq in &options[i] {
                if norm + sq + rest_min[i + 1] > limit {
                    break;
                }
                walk(i + 1, norm + sq, limit, options, rest_min, counts);
            }
        }
        walk(0, 0, limit, &options, &rest_min, &mut counts);
    }
    let denom = 2 * code.k * 2;
    let trunc = Rational64::new(limit + 1, denom as i64);
    Ok(FracSeries::from_i64s(denom, trunc, &counts))
}

/// Smallest positive norm `2e` among the nonzero terms `t^e` of a theta series.
pub fn min_norm(theta: &FracSeries) -> Option<Rational64> {
    theta
        .terms()
        .map(|(e, _)| e)
        .find(|e| *e > Rational64::from_integer(0))
        .map(|e| e * 2)
}

/// Where a length-8 code came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Database,
    Quaternion,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundCode {
    pub code: LinearCode,
    pub origin: Origin,
    /// Candidates examined, including the accepted one.
    pub trials: u64,
    pub report: TypeIIReport,
}

/// The stored length-8 Type II code for `k`, if there is one.
pub fn database_c8(k: u32) -> Option<LinearCode> {
    DATABASE.iter().map(|t| t.parse::<LinearCode>().expect("stored code parses")).find(|c| c.k == k)
}

/// `[[a, b, c, d], [-b, a, -d, c], [-c, d, a, -b], [-d, -c, b, a]]`: rows are
/// pairwise orthogonal over `Z` with norm `a^2 + b^2 + c^2 + d^2`.
pub fn quaternion_block(q: [i64; 4]) -> [[i64; 4]; 4] {
    let [a, b, c, d] = q;
    [[a, b, c, d], [-b, a, -d, c], [-c, d, a, -b], [-d, -c, b, a]]
}

/// `(a, b, c, d)` in `[-k, k]^4` with `1 + a^2 + b^2 + c^2 + d^2 = 0 mod 4k`.
pub fn quaternion_candidates(k: u32) -> Vec<[i64; 4]> {
    let k = i64::from(k);
    let mut out = Vec::new();
    for a in -k..=k {
        for b in -k..=k {
            for c in -k..=k {
                for d in -k..=k {
                    if (1 + a * a + b * b + c * c + d * d) % (4 * k) == 0 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Generators of `[I | A]` have weights `0 mod 4k` and vanishing Gram.
/// Since `x -> sum x_i^2 mod 4k` is a quadratic form whose polar form is
/// `2 x.y`, this already forces every codeword weight to be `0 mod 4k`.
fn passes_generator_test(code: &LinearCode) -> bool {
    let four_k = 4 * u64::from(code.k);
    code.gram_vanishes()
        && code.rows.iter().all(|r| euclidean_weight(code.k, r).is_ok_and(|w| w % four_k == 0))
}

/// A length-8 free Type II code over `Z/2kZ` in the form `[I_4 | A]`.
///
/// Uses the stored code when there is one, then shuffled quaternion blocks,
/// then uniformly random `A`; every candidate is confirmed by
/// [`verify_type2`].
pub fn search_c8(k: u32, seed: u64) -> Result<FoundCode> {
    check_k(k)?;
    if k > 6 {
        return Err(Error::InvalidArgument(format!("k = {k} is above 6")));
    }
    if let Some(code) = database_c8(k) {
        let report = verify_type2(&code)?;
        if report.type2 {
            return Ok(FoundCode { code, origin: Origin::Database, trials: 1, report });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = quaternion_candidates(k);
    candidates.shuffle(&mut rng);
    let mut trials = 0u64;
    for q in candidates {
        trials += 1;
        let code = LinearCode::standard_form(k, &quaternion_block(q))?;
        if passes_generator_test(&code) {
            let report = verify_type2(&code)?;
            if report.type2 {
                return Ok(FoundCode { code, origin: Origin::Quaternion, trials, report });
            }
        }
    }
    let m = 2 * i64::from(k);
    for _ in 0..SEARCH_BUDGET {
        trials += 1;
        let mut a = [[0i64; 4]; 4];
        for row in a.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.gen_range(0..m);
            }
        }
        let code = LinearCode::standard_form(k, &a)?;
        if passes_generator_test(&code) {
            let report = verify_type2(&code)?;
            if report.type2 {
                return Ok(FoundCode { code, origin: Origin::Random, trials, report });
            }
        }
    }
    Err(Error::SearchExhausted { modulus: 2 * k, seed, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::eisenstein_e4;
    use proptest::prelude::*;

    fn hamming() -> LinearCode {
        database_c8(1).unwrap()
    }

    fn octacode() -> LinearCode {
        database_c8(2).unwrap()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(2, 3), Ok(-1));
        assert_eq!(rho(3, 5), Ok(-1));
        assert_eq!(rho(3, 3), Ok(3));
        for k in 1..=6 {
            assert_eq!(rho(k, 0), Ok(0));
        }
        assert_eq!(rho(2, 4), Err(Error::RangeError { x: 4, modulus: 4 }));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(euclidean_weight(2, &[1; 8]), Ok(8));
        assert_eq!(euclidean_weight(2, &[2, 0, 0, 0, 0, 0, 0, 0]), Ok(4));
        assert_eq!(euclidean_weight(1, &[1, 0, 1, 1, 0, 0, 1, 0]), Ok(4));
        assert!(euclidean_weight(1, &[2]).is_err());
    }

    proptest! {
        #[test]
        fn weight_two_ways(k in 1u32..=6, raw in proptest::collection::vec(0u32..1000, 0..20)) {
            let m = 2 * k;
            let word: Vec<u32> = raw.iter().map(|x| x % m).collect();
            let direct: u64 = word.iter().map(|&x| u64::from((x * x).min((m - x) * (m - x)))).sum();
            prop_assert_eq!(euclidean_weight(k, &word).unwrap(), direct);
        }

        #[test]
        fn swe_is_negation_invariant(k in 1u32..=4, raw in proptest::collection::vec(0u32..100, 6)) {
            let m = 2 * k;
            let word: Vec<u32> = raw.iter().map(|x| x % m).collect();
            let neg: Vec<u32> = word.iter().map(|&x| (m - x) % m).collect();
            prop_assert_eq!(composition(k, &word).unwrap(), composition(k, &neg).unwrap());
        }
    }

    #[test]
    fn code_file_round_trip() {
        let c = octacode();
        assert_eq!(c.to_text().parse::<LinearCode>().unwrap(), c);
        assert!(matches!("zcode 2 8 2\n1 0\n".parse::<LinearCode>(), Err(Error::Parse(_))));
        assert!(matches!("code 2 8 1\n".parse::<LinearCode>(), Err(Error::Parse(_))));
        assert!(matches!("zcode 2 2 1\n1 4\n".parse::<LinearCode>(), Err(Error::RangeError { .. })));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_codewords(&hamming()).unwrap().len(), 16);
        let words = enumerate_codewords(&octacode()).unwrap();
        assert_eq!(words.len(), 256);
        assert_eq!(words.iter().collect::<HashSet<_>>().len(), 256);
        let empty = LinearCode::new(2, 8, vec![]).unwrap();
        assert_eq!(enumerate_codewords(&empty).unwrap(), vec![vec![0; 8]]);
        let zeros = LinearCode::new(2, 8, vec![vec![0; 8]; 2]).unwrap();
        let distinct: HashSet<_> = enumerate_codewords(&zeros).unwrap().into_iter().collect();
        assert_eq!(distinct.len(), 1);
        let huge = LinearCode::new(6, 24, vec![vec![0; 24]; 12]).unwrap();
        assert!(matches!(enumerate_codewords(&huge), Err(Error::TooLarge(_))));
    }

    #[test]
    fn type2_examples() {
        let h = verify_type2(&hamming()).unwrap();
        assert!(h.type2 && h.self_dual && h.all_weights_div_4k);
        assert_eq!(h.d_e, Some(4));
        let o = verify_type2(&octacode()).unwrap();
        assert!(o.type2);
        assert_eq!(o.d_e, Some(8));
        let rows = (0..4).map(|i| (0..8).map(|j| u32::from(i == j)).collect()).collect();
        let id = LinearCode::new(2, 8, rows).unwrap();
        let r = verify_type2(&id).unwrap();
        assert!(!r.self_dual && !r.gram_vanishes && !r.type2);
    }

    #[test]
    fn swe_examples() {
        let zero = LinearCode::new(1, 8, vec![]).unwrap();
        let t = swe(&zero).unwrap();
        assert_eq!(t.counts.into_iter().collect::<Vec<_>>(), vec![(vec![8, 0], 1)]);
        let h = swe(&hamming()).unwrap();
        let want: BTreeMap<Vec<u32>, u64> = [(vec![8, 0], 1), (vec![4, 4], 14), (vec![0, 8], 1)].into_iter().collect();
        assert_eq!(h.counts, want);
        assert_eq!(swe(&octacode()).unwrap().total(), 256);
    }

    #[test]
    fn substitution_gives_e4() {
        let e4 = eisenstein_e4(10).unwrap();
        for code in [hamming(), octacode()] {
            let th = theta_substitution(&swe(&code).unwrap(), 10).unwrap();
            assert_eq!(th.grid_denom(), 1);
            assert_eq!(th, e4);
        }
        let zero = LinearCode::new(3, 8, vec![]).unwrap();
        let th = theta_substitution(&swe(&zero).unwrap(), 6).unwrap();
        assert_eq!(th, crate::modforms::theta1(3, 6).unwrap());
    }

    #[test]
    fn cosets_match_substitution() {
        let h = theta_cosets(&hamming(), 6).unwrap();
        let ints: Vec<i64> =
            h.coarsen(1).unwrap().integer_coeffs().unwrap().iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(ints, vec![1, 240, 2160, 6720]);
        assert_eq!(min_norm(&h), Some(Rational64::from_integer(2)));
        let o = octacode();
        let by_cosets = theta_cosets(&o, 4).unwrap();
        let by_swe = theta_substitution(&swe(&o).unwrap(), 3).unwrap();
        assert_eq!(by_cosets, by_swe);
        assert!(theta_cosets(&o, 13).is_err());
    }

    #[test]
    fn cosets_see_fractional_norms() {
        // all of Z/2 at length 1: the lattice is Z / sqrt 2, norms m^2 / 2
        let full = LinearCode::new(1, 1, vec![vec![1]]).unwrap();
        let th = theta_cosets(&full, 5).unwrap();
        assert_eq!(min_norm(&th), Some(Rational64::new(1, 2)));
        for (norm, count) in [((1, 2), 2), ((1, 1), 0), ((2, 1), 2), ((9, 2), 2)] {
            let c = th.coeff_at(Rational64::new(norm.0, norm.1) / 2).unwrap();
            assert_eq!(c, num_rational::BigRational::from_integer(count.into()), "norm {norm:?}");
        }
        assert_eq!(th.terms().count(), 4);
    }

    #[test]
    fn quaternion_rows_are_orthogonal() {
        for k in 1..=6 {
            let cands = quaternion_candidates(k);
            assert!(!cands.is_empty(), "k = {k}");
            let code = LinearCode::standard_form(k, &quaternion_block(cands[0])).unwrap();
            assert!(passes_generator_test(&code));
        }
    }

    #[test]
    fn search_every_k() {
        let e4 = eisenstein_e4(10).unwrap();
        for k in 1..=6 {
            let found = search_c8(k, 7).unwrap();
            assert_eq!(found.origin == Origin::Database, k <= 2);
            assert!(found.report.type2);
            assert_eq!(found.report.d_e, Some(4 * u64::from(k)));
            let th = theta_substitution(&swe(&found.code).unwrap(), 10).unwrap();
            assert_eq!(th, e4, "k = {k}");
            assert_eq!(search_c8(k, 7).unwrap(), found);
        }
        assert!(search_c8(7, 0).is_err());
        assert!(search_c8(0, 0).is_err());
    }
}
