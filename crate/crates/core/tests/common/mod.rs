//! Brute-force oracles shared by the integration tests.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use z2kcodes::modforms::theta_f;
use z2kcodes::FracSeries;

/// `t f_0^s (f_0 f_1' - f_0' f_1)` from series arithmetic.
pub fn by_series(k: u32, s: u64, terms: usize) -> FracSeries {
    let f0 = theta_f(k, 0, terms).unwrap();
    let f1 = theta_f(k, 1, terms).unwrap();
    let w = &(&f0 * &f1.euler_derivative()) - &(&f0.euler_derivative() * &f1);
    &f0.pow(s) * &w
}

/// The same series summed term by term over `(x, y, x_1, .., x_s)`.
pub fn by_lattice_points(k: u32, s: usize, terms: usize) -> FracSeries {
    let d = 4 * i64::from(k);
    let limit = d * terms as i64;
    let two_k = 2 * i64::from(k);
    let mut coeffs = vec![BigRational::zero(); limit as usize];
    let reach = ((limit as f64).sqrt() as i64) / two_k + 2;
    let mut squares = Vec::new();
    for x in -reach..=reach {
        let sq = (two_k * x).pow(2);
        if sq < limit {
            squares.push(sq);
        }
    }
    let mut odd = Vec::new();
    for y in -reach..=reach {
        let sq = (1 + two_k * y).pow(2);
        if sq < limit {
            odd.push(sq);
        }
    }
    fn rest(depth: usize, acc: i64, limit: i64, squares: &[i64], hits: &mut Vec<i64>) {
        if acc >= limit {
            return;
        }
        if depth == 0 {
            hits.push(acc);
            return;
        }
        for &sq in squares {
            rest(depth - 1, acc + sq, limit, squares, hits);
        }
    }
    for &a in &odd {
        for &b in &squares {
            let weight = BigRational::new(BigInt::from(a - b), BigInt::from(d));
            let mut hits = Vec::new();
            rest(s, a + b, limit, &squares, &mut hits);
            for l in hits {
                coeffs[l as usize] += &weight;
            }
        }
    }
    FracSeries::from_rationals(d as u32, Rational64::from_integer(terms as i64), &coeffs)
}
