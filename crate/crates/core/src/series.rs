//! Truncated power series with exact integer coefficients, and both sides of
//! the wreath-product generating-series identity.
//!
//! - [`TruncatedSeries`]: integer coefficients modulo `t^(N+1)`; arithmetic
//!   is exact, truncation is the only lossy step.
//! - [`one_minus_pow`]: `(1 - t^m)^e` for any integer exponent.
//! - [`weight`]: `w_k(m) = sum over r_1...r_k = m of r_2 r_3^2 ... r_k^(k-1)`,
//!   the aggregated exponent of the right-hand product.
//! - [`rhs_series`]: `prod_m (1 - t^m)^(-E * w_k(m))`.
//! - [`macdonald_series`]: `(1 - t)^(-chi)`, the k = 0 case.
//! - [`lhs_series`]: `sum_n chi^(k)(X^n, G_n) t^n` from the wreath engine.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::Result;
use crate::gspace::FiniteGSet;
use crate::orbifold::ChiOrder;
use crate::wreath::{chi_k_wreath, WreathOptions};

/// An integer power series truncated after degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// The constant series 1 modulo `t^(N+1)`.
    pub fn one(degree_bound: usize) -> TruncatedSeries {
        let mut coeffs = vec![BigInt::zero(); degree_bound + 1];
        coeffs[0] = BigInt::one();
        TruncatedSeries { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> TruncatedSeries {
        assert!(!coeffs.is_empty(), "a series needs at least degree 0");
        TruncatedSeries { coeffs }
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Truncated product.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.degree_bound().min(other.degree_bound());
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        TruncatedSeries { coeffs }
    }
}

impl std::fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c}*t^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(1 - t^m)^e` modulo `t^(N+1)`, for any integer exponent `e`.
///
/// For `e >= 0` this is the finite binomial expansion; for `e < 0` the
/// coefficients come from the (integer) negative binomial series.
pub fn one_minus_pow(m: usize, e: impl Into<BigInt>, degree_bound: usize) -> TruncatedSeries {
    assert!(m >= 1, "the exponent base needs m >= 1");
    let e: BigInt = e.into();
    let mut coeffs = vec![BigInt::zero(); degree_bound + 1];
    coeffs[0] = BigInt::one();
    if e.is_zero() {
        return TruncatedSeries { coeffs };
    }
    let steps = degree_bound / m;
    if e.is_negative() {
        let f = -e;
        // coefficient of t^(m*j) is C(f + j - 1, j), built incrementally
        let mut binom = BigInt::one();
        for j in 1..=steps {
            binom = binom * (&f + BigInt::from(j as u64) - 1) / BigInt::from(j as u64);
            coeffs[m * j] = binom.clone();
        }
    } else {
        // coefficient of t^(m*j) is (-1)^j C(e, j); stops once j > e
        let mut binom = BigInt::one();
        for j in 1..=steps {
            let jj = BigInt::from(j as u64);
            binom = binom * (&e - (&jj - 1)) / &jj;
            if binom.is_zero() {
                break;
            }
            coeffs[m * j] = if j % 2 == 1 { -binom.clone() } else { binom.clone() };
        }
    }
    TruncatedSeries { coeffs }
}

/// `w_k(m)`: the sum of `r_2 r_3^2 ... r_k^(k-1)` over ordered factorizations
/// `r_1 r_2 ... r_k = m`. By convention `w_0(m) = [m == 1]`, and `w_1(m) = 1`.
pub fn weight(k: u32, m: u64) -> BigUint {
    assert!(m >= 1, "weights are defined for m >= 1");
    if k == 0 {
        return if m == 1 { BigUint::one() } else { BigUint::zero() };
    }
    // Peel r_k with exponent k-1: w_k(m) = sum over d | m of d^(k-1) w_{k-1}(m/d).
    let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut sum = BigUint::zero();
    for &d in &divisors {
        let tail = weight(k - 1, m / d);
        if !tail.is_zero() {
            sum += BigUint::from(d).pow(k - 1) * tail;
        }
    }
    sum
}

/// The right-hand side of the generating-series identity:
/// `prod_{m=1..N} (1 - t^m)^(-E * w_k(m))` modulo `t^(N+1)`.
pub fn rhs_series(k: u32, euler: impl Into<BigInt>, degree_bound: usize) -> TruncatedSeries {
    let e: BigInt = euler.into();
    let mut out = TruncatedSeries::one(degree_bound);
    for m in 1..=degree_bound {
        let w = BigInt::from(weight(k, m as u64));
        if w.is_zero() {
            continue;
        }
        out = out.mul(&one_minus_pow(m, -(&e * w), degree_bound));
    }
    out
}

/// `(1 - t)^(-chi)`: the generating series of the Euler characteristics of
/// symmetric powers.
pub fn macdonald_series(chi: impl Into<BigInt>, degree_bound: usize) -> TruncatedSeries {
    let chi: BigInt = chi.into();
    one_minus_pow(1, -chi, degree_bound)
}

/// The left-hand side: `sum_{n=0..N} chi^(k)(X^n, G_n) t^n`, with each
/// coefficient computed by the type-based wreath engine.
pub fn lhs_series(
    x: &FiniteGSet,
    k: ChiOrder,
    degree_bound: usize,
    options: &WreathOptions,
    budget: &Budget,
) -> Result<TruncatedSeries> {
    let mut coeffs = Vec::with_capacity(degree_bound + 1);
    for n in 0..=degree_bound {
        coeffs.push(chi_k_wreath(x, n as u64, k, options, budget)?);
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(series: &TruncatedSeries) -> Vec<i64> {
        series
            .coeffs()
            .iter()
            .map(|c| i64::try_from(c).expect("coefficient fits i64"))
            .collect()
    }

    #[test]
    fn one_minus_pow_examples() {
        assert_eq!(ints(&one_minus_pow(1, -1, 4)), vec![1, 1, 1, 1, 1]);
        assert_eq!(ints(&one_minus_pow(2, 1, 4)), vec![1, 0, -1, 0, 0]);
        assert_eq!(ints(&one_minus_pow(1, -2, 3)), vec![1, 2, 3, 4]);
        assert_eq!(ints(&one_minus_pow(1, 2, 4)), vec![1, -2, 1, 0, 0]);
        assert_eq!(ints(&one_minus_pow(3, 0, 3)), vec![1, 0, 0, 0]);
    }

    #[test]
    fn weight_examples() {
        for m in 1..=20u64 {
            assert_eq!(weight(1, m), BigUint::from(1u32), "w_1({m})");
        }
        assert_eq!(weight(0, 1), BigUint::from(1u32));
        assert_eq!(weight(0, 2), BigUint::from(0u32));
        // w_2(4) = 1 + 2 + 4 = sigma(4)
        assert_eq!(weight(2, 4), BigUint::from(7u32));
    }

    #[test]
    fn partition_numbers_from_rhs() {
        // k = 1, E = 1 gives the partition generating function
        let s = rhs_series(1, 1, 6);
        assert_eq!(ints(&s), vec![1, 1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn macdonald_examples() {
        assert_eq!(ints(&macdonald_series(2, 4)), vec![1, 2, 3, 4, 5]);
        assert_eq!(ints(&macdonald_series(0, 3)), vec![1, 0, 0, 0]);
        assert_eq!(ints(&macdonald_series(-1, 3)), vec![1, -1, 0, 0]);
        for chi in -3i64..=3 {
            for n in 0..=6usize {
                assert_eq!(
                    macdonald_series(chi, n),
                    rhs_series(0, chi, n),
                    "chi = {chi}, N = {n}"
                );
            }
        }
    }

    #[test]
    fn rhs_zero_exponent_is_one() {
        assert_eq!(rhs_series(3, 0, 5), TruncatedSeries::one(5));
    }

    #[test]
    fn k2_coefficients_match_divisor_product() {
        // prod (1-t^m)^(-sigma(m)) begins 1, 1, 4, 8, 21
        let s = rhs_series(2, 1, 4);
        assert_eq!(ints(&s), vec![1, 1, 4, 8, 21]);
    }
}
