//! Named families of k-subspaces, each with a closed-form size.
//!
//! Every family is obtained by filtering the Grassmannian through a membership
//! predicate over anchor subspaces. Default anchors are aligned with the
//! standard basis (X = ⟨e₁⟩, Yᵢ = ⟨e₂, …, e_{i+1}⟩, and so on); any other
//! anchors satisfying the same incidences give an isomorphic family.
//!
//! Kinds and their command-line names:
//!
//! | name | family |
//! |------|--------|
//! | `star` | all k-subspaces through a fixed t-subspace |
//! | `g{i}` | 𝒢ᵢ = {F: X ⊂ F, F ∩ Yᵢ ≠ 0} ∪ {G: Yᵢ ⊂ X + G} |
//! | `g{i}-delta`, `g{i}-gamma` | the halves of 𝒢ᵢ containing and avoiding X |
//! | `k{i}` | 𝒦ᵢ^{k,t}: all k-subspaces containing a (t+i)-subspace of a fixed (t+2i)-space |
//! | `hm` | {F: X ⊂ F, F ∩ Y ≠ 0} ∪ {F: F ⊂ X + Y} with dim Y = k |
//! | `line1`, `line2` | the maximal intersecting families of 2-subspaces |
//! | `plane1` … `plane11` | the large maximal intersecting families of 3-subspaces |

mod anchors;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use anchors::{default_anchors, validate_anchors, Anchors};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::SubspaceFamily;
use crate::qcalc::{gaussian, int, pow, q_bracket, BoundReport, Context, Relation};
use crate::qspace::{enumerate_grassmannian, Ambient, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Star,
    G(usize),
    GDelta(usize),
    GGamma(usize),
    K(usize),
    HiltonMilner,
    Line(u8),
    Plane(u8),
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Star => write!(f, "star"),
            Kind::G(i) => write!(f, "g{i}"),
            Kind::GDelta(i) => write!(f, "g{i}-delta"),
            Kind::GGamma(i) => write!(f, "g{i}-gamma"),
            Kind::K(i) => write!(f, "k{i}"),
            Kind::HiltonMilner => write!(f, "hm"),
            Kind::Line(j) => write!(f, "line{j}"),
            Kind::Plane(j) => write!(f, "plane{j}"),
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        let bad = || Error::Format(format!("unknown construction kind {s:?}"));
        let num = |rest: &str| rest.parse::<usize>().map_err(|_| bad());
        let s = s.trim().to_ascii_lowercase();
        if s == "star" {
            return Ok(Kind::Star);
        }
        if s == "hm" {
            return Ok(Kind::HiltonMilner);
        }
        if let Some(rest) = s.strip_prefix("plane") {
            return Ok(Kind::Plane(num(rest)?.try_into().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("line") {
            return Ok(Kind::Line(num(rest)?.try_into().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix('k') {
            return Ok(Kind::K(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix('g') {
            if let Some(i) = rest.strip_suffix("-delta") {
                return Ok(Kind::GDelta(num(i)?));
            }
            if let Some(i) = rest.strip_suffix("-gamma") {
                return Ok(Kind::GGamma(num(i)?));
            }
            return Ok(Kind::G(num(rest)?));
        }
        Err(bad())
    }
}

impl Serialize for Kind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Kind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Kind, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A construction: kind plus parameters. `t` is the center dimension of a
/// star and the intersection parameter of 𝒦ᵢ^{k,t}; other kinds ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub kind: Kind,
    pub q: u8,
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

impl ConstructionSpec {
    pub fn new(kind: Kind, q: u8, n: usize, k: usize) -> Self {
        ConstructionSpec { kind, q, n, k, t: 1 }
    }

    pub fn with_t(mut self, t: usize) -> Self {
        self.t = t;
        self
    }

    pub fn star(q: u8, n: usize, k: usize, t: usize) -> Self {
        Self::new(Kind::Star, q, n, k).with_t(t)
    }

    pub fn g(i: usize, q: u8, n: usize, k: usize) -> Self {
        Self::new(Kind::G(i), q, n, k)
    }

    pub fn k_family(i: usize, q: u8, n: usize, k: usize, t: usize) -> Self {
        Self::new(Kind::K(i), q, n, k).with_t(t)
    }

    pub fn hilton_milner(q: u8, n: usize, k: usize) -> Self {
        Self::new(Kind::HiltonMilner, q, n, k)
    }

    pub fn line(j: u8, q: u8, n: usize) -> Self {
        Self::new(Kind::Line(j), q, n, 2)
    }

    pub fn plane(j: u8, q: u8, n: usize) -> Self {
        Self::new(Kind::Plane(j), q, n, 3)
    }

    pub fn ambient(&self) -> Result<Ambient> {
        Ambient::new(self.n, self.q)
    }

    /// The t for which the family is claimed to be t-intersecting.
    pub fn claimed_t(&self) -> usize {
        match self.kind {
            Kind::Star | Kind::K(_) => self.t,
            _ => 1,
        }
    }

    /// Parameter ranges in which the kind and its anchors make sense.
    pub fn validate(&self) -> Result<()> {
        self.ambient()?;
        let (n, k, t) = (self.n, self.k, self.t);
        let fail = |why: &str| Err(Error::pre(format!("{}: {why} (n={n} k={k} t={t})", self.kind)));
        if k == 0 || k > n {
            return fail("need 1 <= k <= n");
        }
        match self.kind {
            Kind::Star if t > k => fail("need t <= k"),
            Kind::G(i) | Kind::GDelta(i) | Kind::GGamma(i) if !(2 <= i && i <= k && i < n) => {
                fail("need 2 <= i <= k and i < n")
            }
            Kind::K(i) if !(i >= 1 && t + i <= k && t + 2 * i <= n) => {
                fail("need i >= 1, t+i <= k and t+2i <= n")
            }
            Kind::HiltonMilner if !(2 <= k && k < n) => fail("need 2 <= k < n"),
            Kind::Line(j) if !(j == 1 || j == 2) => fail("line families are numbered 1..2"),
            Kind::Line(_) if k != 2 || n < 3 => fail("line families need k = 2 and n >= 3"),
            Kind::Plane(j) if !(1..=11).contains(&j) => fail("plane families are numbered 1..11"),
            Kind::Plane(_) if k != 3 || n < 6 => fail("plane families need k = 3 and n >= 6"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} q={} n={} k={}", self.kind, self.q, self.n, self.k)?;
        if matches!(self.kind, Kind::Star | Kind::K(_)) {
            write!(f, " t={}", self.t)?;
        }
        Ok(())
    }
}

/// A closed-form size. `exact` is false when the formula is only a lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaSize {
    pub value: BigInt,
    pub exact: bool,
}

/// |𝒢ᵢ^Δ| = gaussian(n−1,k−1) − q^{(k−1)i}·gaussian(n−i−1,k−1).
pub fn g_delta_size(q: u64, n: i64, k: i64, i: i64) -> BigInt {
    gaussian(n - 1, k - 1, q) - pow(q, ((k - 1) * i) as u64) * gaussian(n - i - 1, k - 1, q)
}

/// |𝒢ᵢ^γ| = q^k·gaussian(n−i−1,k−i).
pub fn g_gamma_size(q: u64, n: i64, k: i64, i: i64) -> BigInt {
    pow(q, k as u64) * gaussian(n - i - 1, k - i, q)
}

/// |𝒢₂| counted by the 2-subspace the member shares with the fixed 3-space:
/// gaussian(n−3,k−3) + gaussian(3,2)·q^{k−2}·gaussian(n−3,k−2).
pub fn g2_size(q: u64, n: i64, k: i64) -> BigInt {
    gaussian(n - 3, k - 3, q) + gaussian(3, 2, q) * pow(q, (k - 2) as u64) * gaussian(n - 3, k - 2, q)
}

/// gaussian(n−1,k−1) − q^{k(k−1)}·gaussian(n−k−1,k−1) + q^k.
pub fn hilton_milner_size(q: u64, n: i64, k: i64) -> BigInt {
    gaussian(n - 1, k - 1, q) - pow(q, (k * (k - 1)) as u64) * gaussian(n - k - 1, k - 1, q)
        + pow(q, k as u64)
}

/// gaussian(t+2i,t+i)·q^{(k−t−i)i}·gaussian(n−t−2i,k−t−i), a lower bound on |𝒦ᵢ^{k,t}|.
pub fn k_family_lower(q: u64, n: i64, k: i64, t: i64, i: i64) -> BigInt {
    gaussian(t + 2 * i, t + i, q) * pow(q, ((k - t - i) * i) as u64) * gaussian(n - t - 2 * i, k - t - i, q)
}

/// Size of the j-th large intersecting family of 3-subspaces.
pub fn plane_size(j: u8, q: u64, n: i64) -> BigInt {
    let b = |m: i64| q_bracket(m, q);
    let p = |e: u64| pow(q, e);
    let qb = BigInt::from(q);
    match j {
        1 => gaussian(n - 1, 2, q),
        2 | 3 => b(3) * b(n - 2) - &qb * b(2),
        4 => b(2) * b(n - 2) + BigInt::from(2) * p(4) + p(3) - &qb,
        5 => b(n - 2) + p(2) * b(2) * b(3),
        6 => b(n - 2) + BigInt::from(5) * p(3) + p(2),
        7 => b(n - 2) + BigInt::from(6) * p(2),
        8 => b(n - 2) + p(4) + BigInt::from(2) * p(3) + BigInt::from(3) * p(2),
        9 => b(n - 2) + BigInt::from(2) * p(2) * b(2),
        10 => gaussian(5, 3, q),
        _ => p(4) + BigInt::from(3) * p(3) + BigInt::from(4) * p(2) + &qb + 1,
    }
}

pub fn formula_size(spec: &ConstructionSpec) -> Result<FormulaSize> {
    spec.validate()?;
    let q = spec.q as u64;
    let (n, k, t) = (spec.n as i64, spec.k as i64, spec.t as i64);
    let exact = |value| FormulaSize { value, exact: true };
    Ok(match spec.kind {
        Kind::Star => exact(gaussian(n - t, k - t, q)),
        Kind::G(2) => exact(g2_size(q, n, k)),
        Kind::G(i) => {
            let i = i as i64;
            exact(g_delta_size(q, n, k, i) + g_gamma_size(q, n, k, i))
        }
        Kind::GDelta(i) => exact(g_delta_size(q, n, k, i as i64)),
        Kind::GGamma(i) => exact(g_gamma_size(q, n, k, i as i64)),
        Kind::K(i) => FormulaSize {
            value: k_family_lower(q, n, k, t, i as i64),
            exact: false,
        },
        Kind::HiltonMilner => exact(hilton_milner_size(q, n, k)),
        Kind::Line(1) => exact(q_bracket(n - 1, q)),
        Kind::Line(_) => exact(q_bracket(3, q)),
        Kind::Plane(j) => exact(plane_size(j, q, n)),
    })
}

pub fn build(spec: &ConstructionSpec, budget: &Budget) -> Result<SubspaceFamily> {
    let anchors = default_anchors(spec)?;
    build_with_anchors(spec, &anchors, budget)
}

pub fn build_with_anchors(
    spec: &ConstructionSpec,
    anchors: &Anchors,
    budget: &Budget,
) -> Result<SubspaceFamily> {
    spec.validate()?;
    validate_anchors(spec, anchors)?;
    let keep = anchors::predicate(spec, anchors)?;
    let a = spec.ambient()?;
    let members: Vec<Subspace> = enumerate_grassmannian(a, spec.k, budget)?
        .filter(|f| keep(f))
        .collect();
    // Enumeration order is canonical, so the filtered list is already sorted.
    Ok(SubspaceFamily::from_unsorted(a, members))
}

/// Build several families with default anchors, enumerating each
/// Grassmannian only once. Output follows input order.
pub fn build_many(specs: &[ConstructionSpec], budget: &Budget) -> Result<Vec<SubspaceFamily>> {
    let mut groups: HashMap<(u8, usize, usize), Vec<usize>> = HashMap::new();
    for (idx, s) in specs.iter().enumerate() {
        groups.entry((s.q, s.n, s.k)).or_default().push(idx);
    }
    let mut out: Vec<Option<SubspaceFamily>> = vec![None; specs.len()];
    let mut keys: Vec<_> = groups.keys().copied().collect();
    keys.sort_unstable();
    for key in keys {
        let idxs = &groups[&key];
        let preds = idxs
            .iter()
            .map(|&i| anchors::predicate(&specs[i], &default_anchors(&specs[i])?))
            .collect::<Result<Vec<_>>>()?;
        let a = Ambient::new(key.1, key.0)?;
        let mut lists: Vec<Vec<Subspace>> = vec![Vec::new(); idxs.len()];
        for f in enumerate_grassmannian(a, key.2, budget)? {
            for (list, keep) in lists.iter_mut().zip(&preds) {
                if keep(&f) {
                    list.push(f.clone());
                }
            }
        }
        for (&i, list) in idxs.iter().zip(lists) {
            out[i] = Some(SubspaceFamily::from_unsorted(a, list));
        }
    }
    Ok(out.into_iter().map(|f| f.expect("every spec is in a group")).collect())
}

/// Built size against the formula: equality, or formula <= size for the
/// lower-bound kinds.
pub fn size_report(spec: &ConstructionSpec, family: &SubspaceFamily) -> Result<BoundReport> {
    let formula = formula_size(spec)?;
    let mut ctx = Context::new()
        .q(spec.q as u64)
        .n(spec.n as i64)
        .k(spec.k as i64)
        .with("kind", spec.kind);
    if matches!(spec.kind, Kind::Star | Kind::K(_)) {
        ctx = ctx.t(spec.t as i64);
    }
    if let Kind::G(i) | Kind::GDelta(i) | Kind::GGamma(i) | Kind::K(i) = spec.kind {
        ctx = ctx.i(i as i64);
    }
    let size = int(family.len());
    Ok(if formula.exact {
        BoundReport::new("construct/size", ctx, size, Relation::Eq, formula.value)
    } else {
        BoundReport::new("construct/size-lower-bound", ctx, formula.value, Relation::Le, size)
    })
}

/// Size and diversity relations among 𝒢₂, …, 𝒢ₖ at (q, n, k).
///
/// Closed-form relations are always reported. Built-family checks (size and
/// diversity of each 𝒢ᵢ against its formula) are added when the Grassmannian
/// fits the budget, and carry `source=built` in their context.
pub fn gi_size_relations(q: u8, n: usize, k: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    if k < 3 || n < 2 * k + 1 {
        return Err(Error::pre(format!("need k >= 3 and n >= 2k+1, got n={n} k={k}")));
    }
    Ambient::new(n, q)?;
    let qq = q as u64;
    let (n, k) = (n as i64, k as i64);
    let ctx = |i: i64| Context::new().q(qq).n(n).k(k).i(i);
    let size = |i: i64| {
        if i == 2 {
            g2_size(qq, n, k)
        } else {
            g_delta_size(qq, n, k, i) + g_gamma_size(qq, n, k, i)
        }
    };
    let mut out = vec![
        BoundReport::new(
            "g-family/g2-two-routes",
            ctx(2),
            int(g2_size(qq, n, k)),
            Relation::Eq,
            int(g_delta_size(qq, n, k, 2) + g_gamma_size(qq, n, k, 2)),
        ),
        BoundReport::new("g-family/g2-equals-g3", ctx(3), int(size(2)), Relation::Eq, int(size(3))),
    ];
    for i in 2..=k {
        out.push(BoundReport::new(
            "g-family/diversity-identity",
            ctx(i),
            int(g_gamma_size(qq, n, k, i)),
            Relation::Eq,
            int(pow(qq, i as u64) * (gaussian(n - i, k - i, qq) - gaussian(n - i - 1, k - i - 1, qq))),
        ));
    }
    if k >= 4 {
        let factor = crate::qcalc::gauss_upper_factor(qq);
        let qfrac = crate::qcalc::q_over_q_minus_one(qq);
        for i in 3..=k {
            let upper = &qfrac * &factor * int(pow(qq, ((k - 2) * (n - k) + i - 1) as u64))
                + &factor * int(pow(qq, ((k - i) * (n - k - 1) + k) as u64));
            out.push(BoundReport::new("g-family/upper-bound", ctx(i), int(size(i)), Relation::Le, upper));
            let lower = q_bracket(i, qq) * pow(qq, ((k - 2) * (i - 1)) as u64) * gaussian(n - i - 1, k - 2, qq);
            out.push(BoundReport::new(
                "g-family/lower-bound-power",
                ctx(i),
                int(q_bracket(i, qq) * pow(qq, ((k - 2) * (n - k)) as u64)),
                Relation::Le,
                int(lower.clone()),
            ));
            out.push(BoundReport::new("g-family/lower-bound", ctx(i), int(lower), Relation::Le, int(size(i))));
        }
        for i in 4..=k {
            out.push(BoundReport::new(
                "g-family/strict-growth",
                ctx(i),
                int(size(i - 1)),
                Relation::Lt,
                int(size(i)),
            ));
        }
    }
    let a = Ambient::new(n as usize, q)?;
    if budget.admit("Grassmannian", &gaussian(n, k, qq)).is_ok() {
        let specs: Vec<ConstructionSpec> = (2..=k as usize)
            .map(|i| ConstructionSpec::g(i, q, a.n(), k as usize))
            .collect();
        for (spec, fam) in specs.iter().zip(build_many(&specs, budget)?) {
            let i = spec.kind_index();
            let c = ctx(i).with("source", "built");
            out.push(BoundReport::new("g-family/built-size", c.clone(), int(fam.len()), Relation::Eq, int(size(i))));
            out.push(BoundReport::new(
                "g-family/built-diversity",
                c,
                int(fam.diversity()?),
                Relation::Eq,
                int(g_gamma_size(qq, n, k, i)),
            ));
        }
    }
    Ok(out)
}

impl ConstructionSpec {
    fn kind_index(&self) -> i64 {
        match self.kind {
            Kind::G(i) | Kind::GDelta(i) | Kind::GGamma(i) | Kind::K(i) => i as i64,
            Kind::Line(j) | Kind::Plane(j) => j as i64,
            _ => 0,
        }
    }
}

/// Direct count behind |𝒢ᵢ^γ|: with H = ⟨e₂, …, eₙ⟩ the complement of
/// X = ⟨e₁⟩ containing Yᵢ, every k-subspace G₀ of H through Yᵢ arises as
/// (G + X) ∩ H for exactly q^k k-subspaces G avoiding X.
///
/// Reports one count per G₀ (with G₀ in the context), then the number of
/// classes against gaussian(n−1−i, k−i).
pub fn complement_count_check(q: u8, n: usize, k: usize, i: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    let spec = ConstructionSpec::new(Kind::GGamma(i), q, n, k);
    let anchors = default_anchors(&spec)?;
    let a = spec.ambient()?;
    let (x, y) = (&anchors["X"], &anchors["Y"]);
    let h = a.coordinate_span(&(1..n).collect::<Vec<_>>());
    let mut classes: HashMap<Subspace, usize> = HashMap::new();
    for g in enumerate_grassmannian(a, k, budget)? {
        if g.meet_dim(x) == 0 {
            let g0 = g.join(x).meet(&h);
            if g0.contains(y) {
                *classes.entry(g0).or_insert(0) += 1;
            }
        }
    }
    let qq = q as u64;
    let ctx = Context::new().q(qq).n(n as i64).k(k as i64).i(i as i64);
    let mut sorted: Vec<_> = classes.into_iter().collect();
    sorted.sort_unstable();
    let mut out: Vec<BoundReport> = sorted
        .iter()
        .map(|(g0, c)| {
            BoundReport::new(
                "g-family/complement-count",
                ctx.clone().with("g0", g0),
                int(*c),
                Relation::Eq,
                int(pow(qq, k as u64)),
            )
        })
        .collect();
    out.push(BoundReport::new(
        "g-family/complement-classes",
        ctx,
        int(sorted.len()),
        Relation::Eq,
        int(gaussian((n - 1 - i) as i64, (k - i) as i64, qq)),
    ));
    Ok(out)
}

/// Every kind for which the default anchors exist at (q, n, k), with the
/// parameters i and t swept over their valid ranges.
pub fn catalog(q: u8, n: usize, k: usize) -> Vec<ConstructionSpec> {
    let mut out = Vec::new();
    let mut push = |s: ConstructionSpec| {
        if s.validate().is_ok() {
            out.push(s);
        }
    };
    for t in 1..=k {
        push(ConstructionSpec::star(q, n, k, t));
    }
    for i in 2..=k {
        push(ConstructionSpec::g(i, q, n, k));
        push(ConstructionSpec::new(Kind::GDelta(i), q, n, k));
        push(ConstructionSpec::new(Kind::GGamma(i), q, n, k));
    }
    for t in 1..k {
        for i in 1..=k - t {
            push(ConstructionSpec::k_family(i, q, n, k, t));
        }
    }
    push(ConstructionSpec::hilton_milner(q, n, k));
    if k == 2 {
        for j in 1..=2 {
            push(ConstructionSpec::line(j, q, n));
        }
    }
    if k == 3 {
        for j in 1..=11 {
            push(ConstructionSpec::plane(j, q, n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::is_cross_t_intersecting;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn kind_names_round_trip() {
        for name in ["star", "g2", "g3-delta", "g4-gamma", "k1", "hm", "line2", "plane11"] {
            let k: Kind = name.parse().unwrap();
            assert_eq!(k.to_string(), name);
        }
        assert!("g".parse::<Kind>().is_err());
        assert!("plane".parse::<Kind>().is_err());
        assert!(ConstructionSpec::plane(12, 2, 6).validate().is_err());
    }

    #[test]
    fn small_sizes() {
        let star = build(&ConstructionSpec::star(2, 5, 2, 1), &b()).unwrap();
        assert_eq!(star.len(), 15);
        let g2 = build(&ConstructionSpec::g(2, 2, 7, 3), &b()).unwrap();
        assert_eq!(g2.len(), 211);
        assert_eq!(g2.diversity().unwrap(), 120.into());
        let k1 = build(&ConstructionSpec::k_family(1, 2, 5, 2, 1), &b()).unwrap();
        assert_eq!(k1.len(), 7);
        let line2 = build(&ConstructionSpec::line(2, 2, 5), &b()).unwrap();
        assert_eq!(k1, line2);
    }

    #[test]
    fn hilton_milner_agrees_three_ways() {
        let spec = ConstructionSpec::hilton_milner(2, 7, 3);
        assert_eq!(formula_size(&spec).unwrap().value, 211.into());
        assert_eq!(plane_size(2, 2, 7), 211.into());
        assert_eq!(g2_size(2, 7, 3), 211.into());
        let hm = build(&spec, &b()).unwrap();
        assert_eq!(hm.len(), 211);
        assert!(hm.is_t_intersecting(1));
    }

    #[test]
    fn g_families_match_formulas_and_split() {
        for (q, n, k) in [(2u8, 7usize, 3usize), (3, 7, 3), (2, 8, 3)] {
            for i in 2..=k {
                let whole = build(&ConstructionSpec::g(i, q, n, k), &b()).unwrap();
                let delta = build(&ConstructionSpec::new(Kind::GDelta(i), q, n, k), &b()).unwrap();
                let gamma = build(&ConstructionSpec::new(Kind::GGamma(i), q, n, k), &b()).unwrap();
                assert_eq!(whole, delta.union(&gamma).unwrap());
                assert_eq!(whole.len(), delta.len() + gamma.len());
                for (s, f) in [
                    (ConstructionSpec::g(i, q, n, k), &whole),
                    (ConstructionSpec::new(Kind::GDelta(i), q, n, k), &delta),
                    (ConstructionSpec::new(Kind::GGamma(i), q, n, k), &gamma),
                ] {
                    assert!(size_report(&s, f).unwrap().verdict, "{s}");
                }
                assert!(whole.is_t_intersecting(1));
                assert!(is_cross_t_intersecting(&delta, &gamma, 1).unwrap());
                let x = whole.ambient().coordinate_span(&[0]);
                assert!(delta.iter().all(|f| f.contains(&x)));
                assert!(gamma.iter().all(|f| f.meet_dim(&x) == 0));
            }
        }
    }

    #[test]
    fn g3_diversity_at_seven() {
        let g3 = build(&ConstructionSpec::g(3, 2, 7, 3), &b()).unwrap();
        assert_eq!(g3.diversity().unwrap(), 8.into());
    }

    #[test]
    fn k_families_are_t_intersecting_and_above_the_lower_bound() {
        for (q, n, k, t, i) in [(2u8, 5usize, 2usize, 1usize, 1usize), (2, 7, 3, 1, 1), (2, 7, 3, 1, 2), (2, 7, 3, 2, 1), (3, 6, 3, 1, 1)] {
            let spec = ConstructionSpec::k_family(i, q, n, k, t);
            let f = build(&spec, &b()).unwrap();
            assert!(f.is_t_intersecting(t), "{spec}");
            assert!(size_report(&spec, &f).unwrap().verdict, "{spec}");
        }
    }

    #[test]
    fn line_families() {
        for n in 3..=6 {
            for j in 1..=2 {
                let spec = ConstructionSpec::line(j, 2, n);
                let f = build(&spec, &b()).unwrap();
                assert!(size_report(&spec, &f).unwrap().verdict);
                assert!(f.is_t_intersecting(1));
            }
        }
    }

    #[test]
    fn plane_catalog_at_six_over_two() {
        let specs: Vec<_> = (1..=11).map(|j| ConstructionSpec::plane(j, 2, 6)).collect();
        let fams = build_many(&specs, &b()).unwrap();
        for (s, f) in specs.iter().zip(&fams) {
            let r = size_report(s, f).unwrap();
            assert!(r.verdict, "{r}");
            assert!(f.is_t_intersecting(1), "{s}");
        }
        for (s, f) in specs.iter().zip(&fams).take(3) {
            assert_eq!(build(s, &b()).unwrap(), *f);
        }
    }

    #[test]
    fn anchors_are_checked() {
        let spec = ConstructionSpec::g(2, 2, 6, 3);
        let mut a = default_anchors(&spec).unwrap();
        let amb = spec.ambient().unwrap();
        a.insert("Y".into(), amb.coordinate_span(&[0, 1]));
        assert!(matches!(build_with_anchors(&spec, &a, &b()), Err(Error::InvalidAnchors(_))));
        let spec9 = ConstructionSpec::plane(9, 3, 6);
        let mut a9 = default_anchors(&spec9).unwrap();
        assert_eq!(a9.keys().filter(|k| k.starts_with('R')).count(), 4);
        let r1 = a9["R1"].clone();
        a9.insert("R2".into(), r1);
        assert!(validate_anchors(&spec9, &a9).is_err());
    }

    #[test]
    fn relations_hold() {
        for (q, n, k) in [(2u8, 7usize, 3usize), (3, 7, 3), (2, 9, 4), (3, 9, 4), (2, 11, 5)] {
            let rs = gi_size_relations(q, n, k, &b()).unwrap();
            for r in &rs {
                assert!(r.verdict, "{r}");
            }
        }
        let rs = gi_size_relations(2, 9, 4, &b()).unwrap();
        assert!(rs.iter().any(|r| r.label == "g-family/built-diversity"));
    }

    #[test]
    fn complement_counts() {
        let rs = complement_count_check(2, 7, 3, 3, &b()).unwrap();
        assert!(rs.iter().all(|r| r.verdict));
        let rs = complement_count_check(2, 6, 3, 2, &b()).unwrap();
        assert_eq!(rs.len(), 8);
        assert!(rs.iter().all(|r| r.verdict));
    }
}
