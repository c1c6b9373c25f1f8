//! Certified rational enclosures of natural logarithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{int, ratio};

/// `lower <= ln(q) <= upper`, both on a grid of width 10⁻¹².
#[derive(Clone, Debug, PartialEq)]
pub struct LnBounds {
    pub lower: BigRational,
    pub upper: BigRational,
}

const GRID: i64 = 1_000_000_000_000;

/// Enclosure of ln(x) for rational `x` in [1, 2].
///
/// Uses ln x = 2·atanh((x−1)/(x+1)). With y = (x−1)/(x+1) ≤ 1/3, the series
/// tail after the term y^{2N+1}/(2N+1) is at most y^{2N+3}/((2N+3)(1−y²)).
fn ln_small(x: &BigRational) -> (BigRational, BigRational) {
    let y = (x - int(1)) / (x + int(1));
    if y.is_zero() {
        return (int(0), int(0));
    }
    let y2 = &y * &y;
    let mut term = y.clone();
    let mut sum = BigRational::zero();
    let mut j: i64 = 0;
    loop {
        sum += &term / int(2 * j + 1);
        term = &term * &y2;
        j += 1;
        let tail = &term / (int(2 * j + 1) * (int(1) - &y2));
        if tail < ratio(1, GRID * 100) {
            return (int(2) * &sum, int(2) * (sum + tail));
        }
    }
}

fn floor_to_grid(x: &BigRational) -> BigRational {
    let scaled = x * int(GRID);
    BigRational::new(scaled.numer().div_floor(scaled.denom()), BigInt::from(GRID))
}

fn ceil_to_grid(x: &BigRational) -> BigRational {
    let scaled = x * int(GRID);
    BigRational::new(scaled.numer().div_ceil(scaled.denom()), BigInt::from(GRID))
}

/// Certified bounds on ln(q) for an integer `q >= 1`.
pub fn ln_bounds(q: u64) -> LnBounds {
    assert!(q >= 1, "ln of {q}");
    let e = 63 - q.leading_zeros() as i64;
    let mantissa = BigRational::new(q.into(), BigInt::one() << e as usize);
    let (l2_lo, l2_hi) = ln_small(&int(2));
    let (m_lo, m_hi) = ln_small(&mantissa);
    LnBounds {
        lower: floor_to_grid(&(int(e) * l2_lo + m_lo)),
        upper: ceil_to_grid(&(int(e) * l2_hi + m_hi)),
    }
}
