//! Desk-scale checks of the extremal statements: maximum size, maximum
//! diversity, relative diversity, regular families and the tightness of the
//! structural remainder.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::construct::{build, ConstructionSpec};
use crate::error::{Error, Result};
use crate::family::SubspaceFamily;
use crate::peel::structural_remainder;
use crate::qcalc::{
    count_meeting, gaussian, int, pow, q_bracket, qpow, sum_bound_rhs, BoundReport, Context, Relation,
};
use crate::qspace::{enumerate_grassmannian, Ambient, QuotientMap, Subspace};

use super::oracle::{oracle_maximal_families, OracleResult};

fn common_meet(f: &SubspaceFamily) -> Subspace {
    let mut it = f.iter();
    let first = it.next().expect("nonempty family").clone();
    it.fold(first, |acc, s| acc.meet(s))
}

fn common_join(f: &SubspaceFamily) -> Subspace {
    f.iter().fold(f.ambient().zero(), |acc, s| acc.join(s))
}

/// Oracle maximum size against gaussian(n−t, k−t), plus the shape of the
/// maximum families: stars when n ≥ 2k+1, stars or their duals when n = 2k.
pub fn check_tint_extremal(q: u8, n: usize, k: usize, t: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    let oracle = oracle_maximal_families(q, n, k, t, budget)?;
    Ok(tint_extremal_reports(&oracle))
}

pub fn tint_extremal_reports(oracle: &OracleResult) -> Vec<BoundReport> {
    let (q, n, k, t) = (oracle.q as u64, oracle.n, oracle.k, oracle.t);
    let ctx = Context::new().q(q).n(n as i64).k(k as i64).t(t as i64);
    let mut out = vec![BoundReport::new(
        "extremal/max-size",
        ctx.clone(),
        int(oracle.max_size),
        Relation::Eq,
        int(gaussian((n - t) as i64, (k - t) as i64, q)),
    )];
    let maximum: Vec<SubspaceFamily> = oracle.maximum_families().map(|(i, _)| oracle.family(i)).collect();
    let stars = maximum.iter().filter(|f| common_meet(f).dim() >= t).count();
    let duals = maximum.iter().filter(|f| common_join(f).dim() <= n - t).count();
    if n > 2 * k {
        out.push(BoundReport::new(
            "extremal/maximum-are-stars",
            ctx,
            int(stars),
            Relation::Eq,
            int(maximum.len()),
        ));
    } else if n == 2 * k {
        let either = maximum
            .iter()
            .filter(|f| common_meet(f).dim() >= t || common_join(f).dim() <= n - t)
            .count();
        out.push(BoundReport::new(
            "extremal/maximum-star-or-dual",
            ctx.with("stars", stars).with("duals", duals),
            int(either),
            Relation::Eq,
            int(maximum.len()),
        ));
    }
    out
}

/// Oracle maximum diversity of intersecting families against the diversity of
/// the built 2-out-of-3 family, and that diversity against q^k·gaussian(n−3, k−2).
pub fn check_max_diversity(q: u8, n: usize, k: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    if n < 2 * k || k < 2 {
        return Err(Error::pre(format!("max diversity needs k >= 2 and n >= 2k, got n={n} k={k}")));
    }
    let oracle = oracle_maximal_families(q, n, k, 1, budget)?;
    let g2 = build(&ConstructionSpec::g(2, q, n, k), budget)?;
    let div = g2.diversity()?;
    let achieved = oracle.families.iter().filter(|f| f.diversity == oracle.max_diversity).count();
    let ctx = Context::new().q(q as u64).n(n as i64).k(k as i64);
    let (qq, n, k) = (q as u64, n as i64, k as i64);
    Ok(vec![
        BoundReport::new(
            "max-diversity/oracle",
            ctx.clone().with("achieved_by", achieved),
            int(oracle.max_diversity),
            Relation::Eq,
            int(div.clone()),
        ),
        BoundReport::new(
            "max-diversity/g2-closed-form",
            ctx,
            int(div),
            Relation::Eq,
            int(pow(qq, k as u64) * gaussian(n - 3, k - 2, qq)),
        ),
    ])
}

/// |F| against C·(1−α)^{−1}·q^{(k−t)(n−k)−(n−k−t−1)} for a t-intersecting F in
/// which no t-subspace lies in more than an α-fraction of the members.
pub fn check_relative_diversity(f: &SubspaceFamily, t: usize, alpha: &BigRational) -> Result<BoundReport> {
    let k = f
        .uniform_dim()
        .ok_or_else(|| Error::pre("relative diversity needs a nonempty uniform family"))?;
    let n = f.ambient().n();
    if n < 2 * k + 1 || t == 0 || t >= k {
        return Err(Error::pre(format!("need n >= 2k+1 and 1 <= t < k, got n={n} k={k} t={t}")));
    }
    if *alpha <= BigRational::zero() || *alpha >= BigRational::one() {
        return Err(Error::pre(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !f.is_t_intersecting(t) {
        return Err(Error::pre(format!("family is not {t}-intersecting")));
    }
    let (x, deg) = f.degree_max(t)?;
    if int(deg.clone()) > alpha * int(f.len()) {
        return Err(Error::pre(format!(
            "a {t}-subspace lies in {deg} of {} members, above the alpha fraction {alpha} (witness {x})",
            f.len()
        )));
    }
    let q = f.ambient().q() as u64;
    let (n, k, t) = (n as i64, k as i64, t as i64);
    let rhs = sum_bound_rhs(n, k, t, 0, q) / (int(1) - alpha);
    Ok(BoundReport::new(
        "relative-diversity/size",
        Context::new()
            .q(q)
            .n(n)
            .k(k)
            .t(t)
            .with("alpha", crate::qcalc::format_rational(alpha))
            .with("max_degree", deg),
        int(f.len()),
        Relation::Le,
        rhs,
    ))
}

/// [k]² ≤ [n], the inequality whose failure a regular family would force.
pub fn check_no_regular(q: u64, n: i64, k: i64) -> Result<BoundReport> {
    if n < 2 * k || k < 1 || q < 2 {
        return Err(Error::pre(format!("need n >= 2k >= 2 and q >= 2, got n={n} k={k} q={q}")));
    }
    let b = q_bracket(k, q);
    Ok(BoundReport::new(
        "regular/bracket-square",
        Context::new().q(q).n(n).k(k),
        int(&b * &b),
        Relation::Le,
        int(q_bracket(n, q)),
    ))
}

/// [`check_no_regular`] plus, through the oracle, the number of maximal
/// intersecting families with constant point degree (expected 0).
pub fn check_no_regular_oracle(q: u8, n: usize, k: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    let bracket = check_no_regular(q as u64, n as i64, k as i64)?;
    let oracle = oracle_maximal_families(q, n, k, 1, budget)?;
    let regular = oracle.families.iter().filter(|f| f.is_regular()).count();
    Ok(vec![
        bracket,
        BoundReport::new(
            "regular/oracle-count",
            Context::new()
                .q(q as u64)
                .n(n as i64)
                .k(k as i64)
                .with("families", oracle.families.len()),
            int(regular),
            Relation::Eq,
            int(0),
        ),
    ])
}

/// Peel the family {F : dim(F ∩ W) ≥ t+i}, dim W = t+2i, down to dimension
/// t+i−1 and sandwich what the core misses:
/// q^{(k−t)(n−k)−i(n−k−t−i)} ≤ |remainder| ≤ C·q^{(k−t)(n−k)−i(n−k−t−i)}.
pub fn check_structural_tightness(
    q: u8,
    n: usize,
    k: usize,
    t: usize,
    i: usize,
    budget: &Budget,
) -> Result<Vec<BoundReport>> {
    if i == 0 {
        return Err(Error::pre("tightness needs i >= 1"));
    }
    let f = build(&ConstructionSpec::k_family(i, q, n, k, t), budget)?;
    let sr = structural_remainder(&f, t, i - 1, budget)?;
    let (qq, n, k, t, i) = (q as u64, n as i64, k as i64, t as i64, i as i64);
    let lower = qpow(qq, (k - t) * (n - k) - i * (n - k - t - i));
    let ctx = Context::new().q(qq).n(n).k(k).t(t).s(i - 1).i(i);
    let mut upper = sr.report;
    upper.label = "tightness/upper".into();
    upper.context = ctx.clone();
    Ok(vec![
        BoundReport::new(
            "tightness/lower",
            ctx.with("family_size", f.len()),
            lower,
            Relation::Le,
            int(sr.remainder.len()),
        ),
        upper,
    ])
}

/// How the diversity of {F : dim(F ∩ Z) ≥ 2}, dim Z = 3, was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G2Route {
    /// Filter the whole Grassmannian and measure the built family.
    Built,
    /// Generate the members directly from the 2-subspaces of Z, then measure.
    Closure,
    /// Count members and the degrees of the two point orbits (on Z, off Z).
    OrbitCount,
}

impl std::fmt::Display for G2Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            G2Route::Built => "built",
            G2Route::Closure => "closure",
            G2Route::OrbitCount => "orbit-count",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2Diversity {
    pub route: G2Route,
    pub size: BigInt,
    pub max_degree: BigInt,
    pub diversity: BigInt,
}

const BUILT_LIMIT: u64 = 1_000_000;
const CLOSURE_INCIDENCE_LIMIT: u64 = 5_000_000;

pub(crate) fn g2_orbit_counts(q: u64, n: i64, k: i64) -> Result<(BigInt, BigInt, BigInt)> {
    let mut size = BigInt::zero();
    let mut off = BigInt::zero();
    for ell in 2..=3.min(k) {
        size += gaussian(3, ell, q) * count_meeting(n, k, 3, ell, q)?;
        if ell <= k - 1 {
            off += gaussian(3, ell, q) * count_meeting(n - 1, k - 1, 3, ell, q)?;
        }
    }
    let on = gaussian(n - 1, k - 1, q) - count_meeting(n - 1, k - 1, 2, 0, q)?;
    Ok((size, on, off))
}

fn g2_closure(q: u8, n: usize, k: usize, budget: &Budget) -> Result<SubspaceFamily> {
    let a = Ambient::new(n, q)?;
    let z = a.coordinate_span(&[0, 1, 2]);
    let mut members = Vec::new();
    for l in crate::qspace::enumerate_subspaces_of(&z, 2) {
        let qm = QuotientMap::new(&l);
        let zbar = qm.push(&z)?;
        for g in enumerate_grassmannian(qm.codomain(), k - 2, budget)? {
            if g.meet_dim(&zbar) == 0 {
                members.push(qm.pull(&g)?);
            }
        }
    }
    if k >= 3 {
        let qm = QuotientMap::new(&z);
        for g in enumerate_grassmannian(qm.codomain(), k - 3, budget)? {
            members.push(qm.pull(&g)?);
        }
    }
    Ok(SubspaceFamily::from_unsorted(a, {
        members.sort_unstable();
        members
    }))
}

/// Diversity of the 2-out-of-3 family by an explicit route.
pub fn g2_diversity_via(route: G2Route, q: u8, n: usize, k: usize, budget: &Budget) -> Result<G2Diversity> {
    if k < 2 || n < k + 1 || n < 3 {
        return Err(Error::pre(format!("2-out-of-3 family needs k >= 2, n >= max(k+1, 3); got n={n} k={k}")));
    }
    let measure = |f: SubspaceFamily| -> Result<G2Diversity> {
        let (_, top) = f.degree_max(1)?;
        Ok(G2Diversity {
            route,
            size: f.len().into(),
            diversity: BigInt::from(f.len()) - &top,
            max_degree: top,
        })
    };
    match route {
        G2Route::Built => measure(build(&ConstructionSpec::g(2, q, n, k), budget)?),
        G2Route::Closure => measure(g2_closure(q, n, k, budget)?),
        G2Route::OrbitCount => {
            let (size, on, off) = g2_orbit_counts(q as u64, n as i64, k as i64)?;
            let top = on.max(off);
            Ok(G2Diversity {
                route,
                diversity: &size - &top,
                size,
                max_degree: top,
            })
        }
    }
}

/// Diversity of the 2-out-of-3 family by the cheapest route that fits:
/// built, then closure, then orbit counting.
pub fn g2_diversity(q: u8, n: usize, k: usize, budget: &Budget) -> Result<G2Diversity> {
    let (qq, ni, ki) = (q as u64, n as i64, k as i64);
    let grass = gaussian(ni, ki, qq);
    let route = if grass <= BigInt::from(BUILT_LIMIT.min(budget.enumeration_cap)) {
        G2Route::Built
    } else {
        let (size, _, _) = g2_orbit_counts(qq, ni, ki)?;
        let inner = gaussian(ni - 2, ki - 2, qq);
        if size * q_bracket(ki, qq) <= BigInt::from(CLOSURE_INCIDENCE_LIMIT)
            && inner <= BigInt::from(budget.enumeration_cap)
        {
            G2Route::Closure
        } else {
            G2Route::OrbitCount
        }
    };
    g2_diversity_via(route, q, n, k, budget)
}

/// Diversity of the 2-out-of-3 family against q^k·gaussian(n−3, k−2).
pub fn check_g2_diversity(q: u8, n: usize, k: usize, budget: &Budget) -> Result<BoundReport> {
    let d = g2_diversity(q, n, k, budget)?;
    let (qq, n, k) = (q as u64, n as i64, k as i64);
    Ok(BoundReport::new(
        "g2-diversity/closed-form",
        Context::new().q(qq).n(n).k(k).with("route", d.route).with("size", &d.size),
        int(d.diversity),
        Relation::Eq,
        int(pow(qq, k as u64) * gaussian(n - 3, k - 2, qq)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Kind;
    use crate::qcalc::ratio;

    #[test]
    fn extremal_sizes() {
        let r = check_tint_extremal(2, 5, 2, 1, &Budget::default()).unwrap();
        assert!(r.iter().all(|r| r.verdict), "{r:?}");
        assert_eq!(r[0].lhs, int(15));
        let r = check_tint_extremal(2, 4, 2, 1, &Budget::default()).unwrap();
        assert!(r.iter().all(|r| r.verdict), "{r:?}");
        assert_eq!(r[1].context.extra["stars"], "15");
        assert_eq!(r[1].context.extra["duals"], "15");
        let r = check_tint_extremal(2, 5, 2, 2, &Budget::default()).unwrap();
        assert_eq!(r[0].rhs, int(1));
        assert!(r[0].verdict);
    }

    #[test]
    fn plane_family_has_most_diversity() {
        let r = check_max_diversity(2, 5, 2, &Budget::default()).unwrap();
        assert!(r.iter().all(|r| r.verdict), "{r:?}");
        assert_eq!(r[0].lhs, int(4));
    }

    #[test]
    fn relative_diversity_of_plane_lines() {
        let spec = ConstructionSpec::k_family(1, 2, 5, 2, 1);
        let f = build(&spec, &Budget::default()).unwrap();
        assert_eq!(f.len(), 7);
        let r = check_relative_diversity(&f, 1, &ratio(3, 7)).unwrap();
        assert!(r.verdict);
        assert!(check_relative_diversity(&f, 1, &ratio(2, 7)).is_err());
        let star = build(&ConstructionSpec::star(2, 5, 2, 1), &Budget::default()).unwrap();
        assert!(check_relative_diversity(&star, 1, &ratio(99, 100)).is_err());
    }

    #[test]
    fn no_regular() {
        let r = check_no_regular(2, 4, 2).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(9), int(15)));
        let r = check_no_regular(3, 6, 3).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(169), int(364)));
        assert!(check_no_regular(2, 3, 2).is_err());
        let r = check_no_regular_oracle(2, 5, 2, &Budget::default()).unwrap();
        assert!(r.iter().all(|r| r.verdict));
    }

    #[test]
    fn tightness_sandwich() {
        for (n, i) in [(8, 2), (7, 1)] {
            let r = check_structural_tightness(2, n, 3, 1, i, &Budget::default()).unwrap();
            assert!(r.iter().all(|r| r.verdict), "{r:?}");
        }
    }

    #[test]
    fn g2_routes_agree() {
        let b = Budget::default();
        for (q, n, k) in [(2, 7, 3), (2, 8, 3), (3, 7, 3), (2, 5, 2), (2, 9, 4)] {
            let built = g2_diversity_via(G2Route::Built, q, n, k, &b).unwrap();
            let closure = g2_diversity_via(G2Route::Closure, q, n, k, &b).unwrap();
            let orbit = g2_diversity_via(G2Route::OrbitCount, q, n, k, &b).unwrap();
            assert_eq!(built, G2Diversity { route: G2Route::Built, ..closure.clone() });
            assert_eq!(built, G2Diversity { route: G2Route::Built, ..orbit.clone() });
        }
        let spec = ConstructionSpec::new(Kind::G(2), 2, 7, 3);
        let f = build(&spec, &b).unwrap();
        assert_eq!(f, g2_closure(2, 7, 3, &b).unwrap());
        assert_eq!(g2_diversity(2, 7, 3, &b).unwrap().diversity, BigInt::from(120));
    }
}
