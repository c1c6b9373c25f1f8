//! Exact q-arithmetic: q-brackets, Gaussian coefficients and the standard
//! identities and estimates built from them.

mod lemmas;
mod lnbound;
mod report;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use lemmas::{eqcalc1_check, gauss_bounds_check, pascal_check, sum_bound, sum_bound_rhs};
pub use lnbound::{ln_bounds, LnBounds};
pub use report::{write_csv, BoundReport, Context, Relation};

/// Arbitrary-precision integer used for every count.
pub type ExactInt = BigInt;
/// Reduced rational with positive denominator.
pub type ExactRational = BigRational;

/// `q^e` for `e >= 0`.
pub fn pow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// `base^e` for any integer `e`; `base` must be nonzero when `e < 0`.
pub fn rpow(base: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `q^e` as a rational, for any integer `e`.
pub fn qpow(q: u64, e: i64) -> BigRational {
    rpow(&BigRational::from_integer(q.into()), e)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// [a] = (q^a − 1)/(q − 1); zero for `a <= 0`.
pub fn q_bracket(a: i64, q: u64) -> BigInt {
    if a <= 0 {
        return BigInt::zero();
    }
    (pow(q, a as u64) - 1) / BigInt::from(q - 1)
}

/// Number of k-subspaces of V(n, q); zero when `k < 0` or `k > n`.
pub fn gaussian(n: i64, k: i64, q: u64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=k {
        num *= q_bracket(n - i + 1, q);
        den *= q_bracket(i, q);
    }
    num / den
}

/// k-subspaces of V(n, q) meeting a fixed m-subspace in a fixed ℓ-subspace:
/// q^{(k−ℓ)(m−ℓ)}·gaussian(n−m, k−ℓ).
pub fn count_meeting(n: i64, k: i64, m: i64, ell: i64, q: u64) -> crate::Result<BigInt> {
    if !(0 <= ell && ell <= m && m <= n && ell <= k) {
        return Err(crate::Error::pre(format!(
            "count_meeting needs 0 <= l <= m <= n and l <= k, got n={n} k={k} m={m} l={ell}"
        )));
    }
    Ok(pow(q, ((k - ell) * (m - ell)) as u64) * gaussian(n - m, k - ell, q))
}

/// (1 + (q+1)/(q²−q−1)), the constant in the Gaussian-coefficient upper bound.
pub fn gauss_upper_factor(q: u64) -> BigRational {
    let q = q as i64;
    int(1) + ratio(q + 1, q * q - q - 1)
}

/// q/(q−1).
pub fn q_over_q_minus_one(q: u64) -> BigRational {
    ratio(q as i64, q as i64 - 1)
}

/// Format a rational as `p` or `p/r`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/r`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, r)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let r: BigInt = r.trim().parse().ok()?;
            if r.is_zero() {
                return None;
            }
            Some(BigRational::new(p, r))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}
