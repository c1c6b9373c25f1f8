//! Named report suites, shared by the command line and the acceptance tests.
//!
//! Each suite returns a flat list of [`BoundReport`]s. Predicates that are
//! not inequalities (a family is intersecting, a replay matches) are reported
//! as `1 = 1` or `0 = 1` so that every outcome goes through the same channel.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::budget::Budget;
use crate::construct::{
    build, build_many, catalog, complement_count_check, formula_size, gi_size_relations,
    size_report, ConstructionSpec, Kind,
};
use crate::error::{Error, Result};
use crate::family::SubspaceFamily;
use crate::peel::{check_layer_bound, check_no_spread_subfamily, peel, structural_remainder};
use crate::qcalc::{
    count_meeting, eqcalc1_check, gauss_bounds_check, gaussian, int, pascal_check, sum_bound,
    BoundReport, Context, Relation,
};
use crate::qspace::{enumerate_grassmannian, Ambient};
use crate::verify::oracle::oracle_maximal_families;
use crate::verify::proofs::{check_proof_constants, GridPoint, ProofTarget};
use crate::verify::random::random_maximal_families;
use crate::verify::theorems::{
    check_g2_diversity, check_max_diversity, check_no_regular, check_no_regular_oracle,
    check_structural_tightness, tint_extremal_reports,
};

/// Field orders supported by the subspace layer.
pub const FIELD_ORDERS: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Qcalc,
    Peel,
    Construct,
    Oracle,
    Proofs,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Qcalc, Suite::Peel, Suite::Construct, Suite::Oracle, Suite::Proofs];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qcalc => "qcalc",
            Suite::Peel => "peel",
            Suite::Construct => "construct",
            Suite::Oracle => "oracle",
            Suite::Proofs => "proofs",
        }
    }

    /// Suites that draw random families and therefore need a seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, Suite::Peel)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::pre(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Seed for randomized suites. Required by [`Suite::is_randomized`] suites.
    pub seed: Option<u64>,
    /// Number of random families in the peel suite (default 200).
    pub count: Option<usize>,
    /// Restrict the proof suite to one target.
    pub target: Option<ProofTarget>,
    /// Grid for the proof suite; the default grid of each target when empty.
    pub grid: Option<Vec<GridPoint>>,
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions, budget: &Budget) -> Result<Vec<BoundReport>> {
    match suite {
        Suite::Qcalc => qcalc_suite(budget),
        Suite::Peel => {
            let seed = opts
                .seed
                .ok_or_else(|| Error::pre("the peel suite is randomized and needs a seed"))?;
            peel_suite(seed, opts.count.unwrap_or(200), budget)
        }
        Suite::Construct => construct_suite(budget),
        Suite::Oracle => oracle_suite(budget),
        Suite::Proofs => Ok(proofs_suite(opts.target, opts.grid.as_deref())),
    }
}

/// A predicate as a report: `1 = 1` when it holds, `0 = 1` otherwise.
pub fn flag(label: &str, ctx: Context, holds: bool) -> BoundReport {
    BoundReport::new(label, ctx, int(i64::from(holds)), Relation::Eq, int(1))
}

fn fam_ctx(f: &SubspaceFamily) -> Context {
    let a = f.ambient();
    let ctx = Context::new().q(a.q() as u64).n(a.n() as i64);
    match f.max_dim() {
        Some(k) => ctx.k(k as i64),
        None => ctx,
    }
}

// ---------------------------------------------------------------------------
// qcalc

/// Gaussian coefficients against Grassmannian enumeration on
/// (q=2, n≤7), (q=3, n≤5), (q∈{4,5}, n≤4).
pub fn gaussian_enumeration_reports(budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for (q, top) in [(2u8, 7usize), (3, 5), (4, 4), (5, 4)] {
        for n in 1..=top {
            let a = Ambient::new(n, q)?;
            for k in 0..=n {
                let count = enumerate_grassmannian(a, k, budget)?.count();
                out.push(BoundReport::new(
                    "gaussian/enumerated",
                    Context::new().q(q as u64).n(n as i64).k(k as i64),
                    int(count),
                    Relation::Eq,
                    int(gaussian(n as i64, k as i64, q as u64)),
                ));
            }
        }
    }
    Ok(out)
}

/// The meeting count against exhaustive counts in V(n, 2), n ≤ 5, for every
/// m, ℓ and k. The fixed m-space and ℓ-space are coordinate spans.
pub fn count_meeting_reports(budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for n in 1..=5usize {
        let a = Ambient::new(n, 2)?;
        for k in 0..=n {
            let all: Vec<_> = enumerate_grassmannian(a, k, budget)?.collect();
            for m in 0..=n {
                let big = a.coordinate_span(&(0..m).collect::<Vec<_>>());
                for ell in 0..=m.min(k) {
                    let small = a.coordinate_span(&(0..ell).collect::<Vec<_>>());
                    let found = all.iter().filter(|f| f.meet(&big) == small).count();
                    out.push(BoundReport::new(
                        "count-meeting/exhaustive",
                        Context::new().q(2).n(n as i64).k(k as i64).with("m", m).with("l", ell),
                        int(found),
                        Relation::Eq,
                        int(count_meeting(n as i64, k as i64, m as i64, ell as i64, 2)?),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Pascal recurrences, elementary bounds, the sum bound and its exponent
/// identity, and [k]² ≤ [n].
pub fn formula_reports() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for q in FIELD_ORDERS.map(u64::from) {
        for n in 1..=12 {
            for k in 0..=n {
                out.extend(pascal_check(n, k, q)?);
            }
        }
        for a in 0..=12 {
            for b in 0..=a {
                out.extend(gauss_bounds_check(a, b, q)?);
            }
        }
    }
    // The sharper binary constants only apply from b = 4 on.
    for a in 7..=24 {
        for b in 4..=a {
            out.extend(gauss_bounds_check(a, b, 2)?.into_iter().filter(|r| r.label.starts_with("gauss-bounds/binary")));
        }
    }
    for q in [2u64, 3] {
        for k in 2..=6i64 {
            for t in 1..k {
                for s in 0..k - t {
                    for n in 2 * k + s + 1..=2 * k + s + 3 {
                        out.push(sum_bound(n, k, t, s, q)?);
                        out.push(eqcalc1_check(n, k, t, s));
                    }
                }
            }
        }
    }
    out.extend(no_regular_bracket_reports()?);
    Ok(out)
}

/// [k]² ≤ [n] for all n ≥ 2k on q ≤ 9, n ≤ 30.
pub fn no_regular_bracket_reports() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for q in FIELD_ORDERS.map(u64::from) {
        for n in 2..=30i64 {
            for k in 1..=n / 2 {
                out.push(check_no_regular(q, n, k)?);
            }
        }
    }
    Ok(out)
}

fn qcalc_suite(budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = gaussian_enumeration_reports(budget)?;
    out.extend(count_meeting_reports(budget)?);
    out.extend(formula_reports()?);
    Ok(out)
}

// ---------------------------------------------------------------------------
// construct

/// Size and intersecting checks for every catalog family at (q, n, k).
pub fn catalog_reports(q: u8, n: usize, k: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    let specs = catalog(q, n, k);
    let fams = build_many(&specs, budget)?;
    let mut out = Vec::new();
    for (s, f) in specs.iter().zip(&fams) {
        let size = size_report(s, f)?;
        let ctx = size.context.clone();
        out.push(size);
        out.push(flag("construct/intersecting", ctx.with("claimed_t", s.claimed_t()), f.is_t_intersecting(s.claimed_t())));
    }
    Ok(out)
}

/// Hilton–Milner size, built 𝒢₂ and the second 3-subspace family at
/// (q=2, k=3, n=7) all agree.
pub fn hilton_milner_triangulation(budget: &Budget) -> Result<Vec<BoundReport>> {
    let (q, n, k) = (2u8, 7usize, 3usize);
    let ctx = Context::new().q(q as u64).n(n as i64).k(k as i64);
    let hm = formula_size(&ConstructionSpec::hilton_milner(q, n, k))?.value;
    let g2 = build(&ConstructionSpec::g(2, q, n, k), budget)?;
    let plane = formula_size(&ConstructionSpec::plane(2, q, n))?.value;
    Ok(vec![
        BoundReport::new("construct/hm-vs-built-g2", ctx.clone(), int(hm.clone()), Relation::Eq, int(g2.len())),
        BoundReport::new("construct/hm-vs-plane2", ctx.clone(), int(hm), Relation::Eq, int(plane.clone())),
        BoundReport::new("construct/hm-size", ctx, int(plane), Relation::Eq, int(211)),
    ])
}

fn construct_suite(budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for n in 2..=7 {
        for k in 1..=3.min(n - 1) {
            out.extend(catalog_reports(2, n, k, budget)?);
        }
    }
    out.extend(catalog_reports(3, 6, 3, budget)?);
    out.extend(hilton_milner_triangulation(budget)?);
    out.extend(gi_size_relations(2, 7, 3, budget)?);
    out.extend(gi_size_relations(2, 8, 3, budget)?);
    out.extend(complement_count_check(2, 7, 3, 2, budget)?);
    out.extend(complement_count_check(2, 7, 3, 3, budget)?);
    for (q, k) in [(2u8, 3usize), (3, 3), (2, 4), (3, 4)] {
        for n in 2 * k + 1..=2 * k + 3 {
            out.push(check_g2_diversity(q, n, k, budget)?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// oracle

fn oracle_suite(budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for (q, n, k, t) in [(2u8, 4usize, 2usize, 1usize), (2, 5, 2, 1), (2, 5, 2, 2), (2, 6, 2, 1), (3, 4, 2, 1)] {
        let r = oracle_maximal_families(q, n, k, t, budget)?;
        let ctx = Context::new().q(q as u64).n(n as i64).k(k as i64).t(t as i64);
        out.push(flag("oracle/maximality", ctx, r.verify_maximality()));
        out.extend(tint_extremal_reports(&r));
    }
    out.extend(check_max_diversity(2, 5, 2, budget)?);
    out.extend(check_max_diversity(2, 6, 2, budget)?);
    for n in 4..=5 {
        out.extend(check_no_regular_oracle(2, n, 2, budget)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// peel

/// Random corpus parameters (q, n, k, t), cycled through in order.
const RANDOM_GRID: [(u8, usize, usize, usize); 5] =
    [(2, 5, 2, 1), (2, 6, 2, 1), (2, 6, 3, 1), (2, 6, 3, 2), (2, 7, 3, 1)];

/// `count` seeded random maximal families, spread over a fixed small grid.
pub fn random_corpus(seed: u64, count: usize, budget: &Budget) -> Result<Vec<(SubspaceFamily, usize)>> {
    let mut out = Vec::new();
    for (j, &(q, n, k, t)) in RANDOM_GRID.iter().enumerate() {
        let share = count / RANDOM_GRID.len() + usize::from(j < count % RANDOM_GRID.len());
        let fams = random_maximal_families(q, n, k, t, share, seed.wrapping_add(j as u64), budget)?;
        out.extend(fams.into_iter().map(|f| (f, t)));
    }
    Ok(out)
}

/// Constructed families at (q=2, n≤7, k≤3) and (q=2, n=8, k=3), with their
/// intersection parameter.
pub fn constructed_corpus(budget: &Budget) -> Result<Vec<(SubspaceFamily, usize)>> {
    let mut specs = Vec::new();
    for n in 3..=7 {
        for k in 2..=3.min(n - 1) {
            specs.extend(catalog(2, n, k));
        }
    }
    specs.extend(catalog(2, 8, 3));
    // Peeling needs a room above t.
    specs.retain(|s| s.claimed_t() < s.k);
    let fams = build_many(&specs, budget)?;
    Ok(fams.into_iter().zip(specs.iter().map(|s| s.claimed_t())).collect())
}

/// Peel one t-intersecting family down to 𝒞_t and report every guarantee:
/// layer bounds, reconstruction, intersecting intermediates, no spread
/// subfamily, and a byte-identical second run.
pub fn peel_reports(f: &SubspaceFamily, t: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    let trace = peel(f, t, t, budget)?;
    let ctx = fam_ctx(f).t(t as i64).with("size", f.len());
    let mut out = check_layer_bound(&trace)?;
    let rebuilt = trace.reconstruction().iter().all(|&(_, ok)| ok);
    out.push(flag("peel/reconstruction", ctx.clone(), rebuilt));
    out.push(flag("peel/intermediates-intersecting", ctx.clone(), trace.intermediates_intersecting()?));
    for l in &trace.layers {
        out.push(flag(
            "peel/no-spread-subfamily",
            ctx.clone().i(l.stage as i64),
            check_no_spread_subfamily(&trace, l.stage)?,
        ));
    }
    let again = peel(f, t, t, budget)?;
    out.push(flag("peel/deterministic-trace", ctx, again.to_json() == trace.to_json()));
    Ok(out)
}

fn peel_suite(seed: u64, count: usize, budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for (f, t) in random_corpus(seed, count, budget)?.iter().chain(&constructed_corpus(budget)?) {
        out.extend(peel_reports(f, *t, budget)?);
    }
    out.extend(structural_reports(STRUCTURE_CAP, budget)?);
    out.extend(tightness_reports(STRUCTURE_CAP, budget)?);
    Ok(out)
}

/// The remainder bound for every t-intersecting constructed family with
/// q ∈ {2,3}, n ≤ 9, k ≤ 4, t ≤ 2, s ≤ 1 whose Grassmannian has at most
/// `grassmannian_cap` members.
pub fn structural_reports(grassmannian_cap: u64, budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for q in [2u8, 3] {
        for k in 2..=4usize {
            for n in 2 * k + 1..=9 {
                if gaussian(n as i64, k as i64, q as u64) > BigInt::from(grassmannian_cap) {
                    continue;
                }
                let specs: Vec<ConstructionSpec> = catalog(q, n, k)
                    .into_iter()
                    .filter(|s| s.claimed_t() <= 2 && !matches!(s.kind, Kind::GDelta(_) | Kind::GGamma(_)))
                    .collect();
                let fams = build_many(&specs, budget)?;
                for (s, f) in specs.iter().zip(&fams) {
                    let t = s.claimed_t();
                    for sv in 0..=1usize {
                        if k >= sv + t + 1 && n >= 2 * k + sv + 1 && f.is_t_intersecting(t) {
                            let mut r = structural_remainder(f, t, sv, budget)?.report;
                            r.context = r.context.with("kind", s.kind);
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The remainder sandwich for 𝒦ᵢ^{k,t} (peeled with s = i−1) at every
/// admissible point of the same grid.
pub fn tightness_reports(grassmannian_cap: u64, budget: &Budget) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for q in [2u8, 3] {
        for k in 2..=4usize {
            for n in 2 * k + 1..=9 {
                if gaussian(n as i64, k as i64, q as u64) > BigInt::from(grassmannian_cap) {
                    continue;
                }
                for t in 1..=2usize {
                    for i in 1..=2usize {
                        if k >= t + i && n >= 2 * k + i {
                            out.extend(check_structural_tightness(q, n, k, t, i, budget)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Grassmannian size above which the peel suite's remainder sweep skips a point.
pub const STRUCTURE_CAP: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// proofs

pub fn proofs_suite(target: Option<ProofTarget>, grid: Option<&[GridPoint]>) -> Vec<BoundReport> {
    let targets: Vec<ProofTarget> = match target {
        Some(t) => vec![t],
        None => ProofTarget::ALL.to_vec(),
    };
    let mut out = Vec::new();
    for t in targets {
        let g = match grid {
            Some(g) => g.to_vec(),
            None => crate::verify::proofs::default_grid(t),
        };
        out.extend(check_proof_constants(t, &g));
    }
    out
}
