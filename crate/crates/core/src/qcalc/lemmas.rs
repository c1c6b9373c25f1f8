//! Report-producing checks of the basic Gaussian-coefficient identities and
//! estimates.

use num_rational::BigRational;

use super::{
    gauss_upper_factor, gaussian, int, pow, q_bracket, q_over_q_minus_one, qpow, ratio, rpow,
    BoundReport, Context, Relation,
};
use crate::error::{Error, Result};

/// Both q-Pascal recurrences for gaussian(n, k).
pub fn pascal_check(n: i64, k: i64, q: u64) -> Result<[BoundReport; 2]> {
    if !(n >= k && k >= 0) {
        return Err(Error::pre(format!("pascal needs n >= k >= 0, got n={n} k={k}")));
    }
    let ctx = Context::new().q(q).n(n).k(k);
    let g = int(gaussian(n, k, q));
    let first = gaussian(n - 1, k - 1, q) + pow(q, k as u64) * gaussian(n - 1, k, q);
    let second = pow(q, (n - k) as u64) * gaussian(n - 1, k - 1, q) + gaussian(n - 1, k, q);
    Ok([
        BoundReport::new("pascal/fix-hyperplane", ctx.clone(), g.clone(), Relation::Eq, int(first)),
        BoundReport::new("pascal/fix-point", ctx, g, Relation::Eq, int(second)),
    ])
}

/// The elementary bounds on [a] and gaussian(a, b), plus the sharper q = 2
/// lower bounds with constants 28/10 and 32/10 where their hypotheses hold.
pub fn gauss_bounds_check(a: i64, b: i64, q: u64) -> Result<Vec<BoundReport>> {
    if !(a >= b && b >= 0 && q >= 2) {
        return Err(Error::pre(format!("need a >= b >= 0 and q >= 2, got a={a} b={b} q={q}")));
    }
    let ctx = Context::new().q(q).with("a", a).with("b", b);
    let mut out = Vec::new();
    let qq = q_over_q_minus_one(q);
    // The bracket bounds are vacuous-false at a = 0 ([0] = 0), so they start at a = 1.
    if a >= 1 {
        let bracket = int(q_bracket(a, q));
        let base = qpow(q, a - 1);
        out.push(BoundReport::new(
            "gauss-bounds/bracket-lower",
            ctx.clone(),
            base.clone(),
            Relation::Le,
            bracket.clone(),
        ));
        out.push(BoundReport::new(
            "gauss-bounds/bracket-upper",
            ctx.clone(),
            bracket,
            Relation::Le,
            &qq * &base,
        ));
        out.push(BoundReport::new(
            "gauss-bounds/bracket-upper-by-two",
            ctx.clone(),
            &qq * &base,
            Relation::Le,
            int(2) * base,
        ));
    }
    let g = int(gaussian(a, b, q));
    let base = qpow(q, b * (a - b));
    let upper = gauss_upper_factor(q);
    out.push(BoundReport::new(
        "gauss-bounds/coefficient-lower",
        ctx.clone(),
        base.clone(),
        Relation::Le,
        g.clone(),
    ));
    out.push(BoundReport::new(
        "gauss-bounds/coefficient-upper",
        ctx.clone(),
        g.clone(),
        Relation::Le,
        &upper * &base,
    ));
    out.push(BoundReport::new(
        "gauss-bounds/coefficient-upper-squared-factor",
        ctx.clone(),
        &upper * &base,
        Relation::Le,
        rpow(&qq, 2) * &base,
    ));
    if q == 2 && b >= 4 && a >= 2 * b - 1 {
        out.push(BoundReport::new(
            "gauss-bounds/binary-2.8",
            ctx.clone(),
            ratio(28, 10) * &base,
            Relation::Le,
            g.clone(),
        ));
    }
    if q == 2 && b >= 4 && a >= 4 * b - 1 {
        out.push(BoundReport::new(
            "gauss-bounds/binary-3.2",
            ctx,
            ratio(32, 10) * &base,
            Relation::Le,
            g,
        ));
    }
    Ok(out)
}

/// C·q^{k(n−k)−(s+t+1)(n−k−s−1)} with the regime-dependent constant C.
pub fn sum_bound_rhs(n: i64, k: i64, t: i64, s: i64, q: u64) -> BigRational {
    let h2 = rpow(&gauss_upper_factor(q), 2);
    let qq = q_over_q_minus_one(q);
    let c = if n == 2 * k + s + 1 {
        int(2) * rpow(&qq, k - t + 1) * h2
    } else {
        rpow(&qq, s + 3) * h2
    };
    c * qpow(q, k * (n - k) - (s + t + 1) * (n - k - s - 1))
}

/// Σ_{i=s+t+1}^{k} gaussian(n−i, k−i)·gaussian(i, t)·[i−t+1]^{i−t} against its
/// closed-form bound.
pub fn sum_bound(n: i64, k: i64, t: i64, s: i64, q: u64) -> Result<BoundReport> {
    if !(n >= 2 * k + s + 1 && s + t < k && t >= 1 && s >= 0 && q >= 2) {
        return Err(Error::pre(format!(
            "sum bound needs n >= 2k+s+1, s+t+1 <= k, t >= 1, s >= 0; got n={n} k={k} t={t} s={s}"
        )));
    }
    let mut lhs = num_bigint::BigInt::from(0);
    for i in s + t + 1..=k {
        lhs += gaussian(n - i, k - i, q)
            * gaussian(i, t, q)
            * num_traits::pow(q_bracket(i - t + 1, q), (i - t) as usize);
    }
    Ok(BoundReport::new(
        "sum-bound",
        Context::new().q(q).n(n).k(k).t(t).s(s),
        int(lhs),
        Relation::Le,
        sum_bound_rhs(n, k, t, s, q),
    ))
}

/// The exponent identity k(n−2k+t) − (s+t+1)(n−k−s−1) = (k−(s+t+1))(n−2k−s−1).
pub fn eqcalc1_check(n: i64, k: i64, t: i64, s: i64) -> BoundReport {
    let lhs = k * (n - 2 * k + t) - (s + t + 1) * (n - k - s - 1);
    let rhs = (k - (s + t + 1)) * (n - 2 * k - s - 1);
    BoundReport::new(
        "sum-bound/exponent-identity",
        Context::new().n(n).k(k).t(t).s(s),
        int(lhs),
        Relation::Eq,
        int(rhs),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_small() {
        let [a, b] = pascal_check(4, 2, 2).unwrap();
        assert_eq!(a.lhs, int(35));
        assert!(a.verdict && b.verdict);
        let [a, _] = pascal_check(5, 0, 3).unwrap();
        assert_eq!(a.rhs, int(1));
        assert!(pascal_check(2, 3, 2).is_err());
    }

    #[test]
    fn gauss_bounds_examples() {
        let r = gauss_bounds_check(4, 2, 2).unwrap();
        let lower = r.iter().find(|r| r.label == "gauss-bounds/coefficient-lower").unwrap();
        let upper = r.iter().find(|r| r.label == "gauss-bounds/coefficient-upper").unwrap();
        assert_eq!((lower.lhs.clone(), lower.rhs.clone()), (int(16), int(35)));
        assert_eq!(upper.rhs, int(64));
        let r = gauss_bounds_check(7, 4, 2).unwrap();
        let sharp = r.iter().find(|r| r.label == "gauss-bounds/binary-2.8").unwrap();
        assert_eq!(sharp.rhs, int(11811));
        assert_eq!(sharp.lhs, ratio(28 * 4096, 10));
        assert!(r.iter().all(|r| r.verdict));
        assert!(!r.iter().any(|r| r.label == "gauss-bounds/binary-3.2"));
    }

    #[test]
    fn sum_bound_example() {
        let r = sum_bound(7, 3, 1, 0, 2).unwrap();
        assert_eq!(r.lhs, int(622));
        assert_eq!(r.rhs, int(16384));
        assert!(r.verdict);
        assert!(sum_bound(6, 3, 1, 0, 2).is_err());
    }

    #[test]
    fn exponent_identity_examples() {
        assert_eq!(eqcalc1_check(7, 3, 1, 0).lhs, int(0));
        assert_eq!(eqcalc1_check(9, 3, 1, 0).rhs, int(2));
    }
}
