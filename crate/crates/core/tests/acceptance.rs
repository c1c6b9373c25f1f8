//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N [PASS|FAIL] ...` line straight to stderr (so it shows up even
//! when output is captured) and then asserts.
//!
//! Tolerances are pinned: every comparison is exact, and each criterion has a
//! wall-clock limit.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use qpeel_core::construct::{build_many, size_report, ConstructionSpec};
use qpeel_core::qcalc::BoundReport;
use qpeel_core::verify::suite::{
    catalog_reports, constructed_corpus, count_meeting_reports, formula_reports,
    gaussian_enumeration_reports, hilton_milner_triangulation, no_regular_bracket_reports,
    peel_reports, proofs_suite, random_corpus, structural_reports, tightness_reports,
};
use qpeel_core::verify::{
    check_g2_diversity, check_max_diversity, check_no_regular_oracle, oracle_maximal_families,
    tint_extremal_reports,
};
use qpeel_core::Budget;

const SEED: u64 = 20_240_601;

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

/// False reports grouped by label, for the summary line.
fn failures(reports: &[BoundReport]) -> String {
    let mut by: BTreeMap<&str, usize> = BTreeMap::new();
    for r in reports.iter().filter(|r| !r.verdict) {
        *by.entry(&r.label).or_default() += 1;
    }
    by.iter().map(|(l, c)| format!("{l} x{c}")).collect::<Vec<_>>().join(", ")
}

/// Print the criterion line and fail the test when it does not pass.
fn finish(n: u8, name: &str, started: Instant, limit: Duration, reports: &[BoundReport], extra: &str) {
    let elapsed = started.elapsed();
    let bad = reports.iter().filter(|r| !r.verdict).count();
    let fast = elapsed <= limit;
    let pass = bad == 0 && fast && !reports.is_empty();
    let mut line = format!(
        "criterion {n} [{}] {name}: {} checks, {bad} false, {:.1}s of {}s",
        if pass { "PASS" } else { "FAIL" },
        reports.len(),
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    if !extra.is_empty() {
        line.push_str(&format!("; {extra}"));
    }
    if bad > 0 {
        line.push_str(&format!("; false: {}", failures(reports)));
    }
    writeln!(std::io::stderr(), "{line}").unwrap();
    assert!(pass, "{line}");
}

fn check(label: &str, holds: bool) -> BoundReport {
    qpeel_core::verify::suite::flag(label, Default::default(), holds)
}

#[test]
fn criterion_01_gaussian_agrees_with_enumeration() {
    let t0 = Instant::now();
    let r = gaussian_enumeration_reports(&Budget::default()).unwrap();
    finish(1, "gaussian = enumerated Grassmannian size", t0, minutes(1), &r, "");
}

#[test]
fn criterion_02_meeting_counts_agree_with_exhaustive_counts() {
    let t0 = Instant::now();
    let r = count_meeting_reports(&Budget::default()).unwrap();
    finish(2, "meeting counts = exhaustive counts (q=2, n<=5)", t0, minutes(1), &r, "");
}

#[test]
fn criterion_03_gaussian_lemma_suites() {
    let t0 = Instant::now();
    let r = formula_reports().unwrap();
    let sums = r.iter().filter(|r| r.label == "sum-bound").count();
    finish(
        3,
        "pascal, elementary bounds, sum bound and exponent identity",
        t0,
        minutes(1),
        &r,
        &format!("{sums} sum-bound points"),
    );
}

#[test]
fn criterion_04_peeling_guarantees() {
    let t0 = Instant::now();
    let b = Budget::default();
    let random = random_corpus(SEED, 200, &b).unwrap();
    let built = constructed_corpus(&b).unwrap();
    let mut r = Vec::new();
    for (f, t) in random.iter().chain(&built) {
        r.extend(peel_reports(f, *t, &b).unwrap());
    }
    // The corpus must be reproducible from the seed.
    let again = random_corpus(SEED, 200, &b).unwrap();
    r.push(check(
        "peel/corpus-reproducible",
        random.iter().zip(&again).all(|((a, _), (b, _))| a == b),
    ));
    finish(
        4,
        "peeling reconstruction, intersecting intermediates, layer bound, replay",
        t0,
        minutes(10),
        &r,
        &format!("{} random + {} constructed families", random.len(), built.len()),
    );
    assert!(random.len() >= 200);
}

#[test]
fn criterion_05_structural_remainder() {
    let t0 = Instant::now();
    let b = Budget::default();
    let mut r = structural_reports(b.enumeration_cap, &b).unwrap();
    let plain = r.len();
    r.extend(tightness_reports(b.enumeration_cap, &b).unwrap());
    finish(
        5,
        "remainder bound on constructed families, tightness sandwich",
        t0,
        minutes(15),
        &r,
        &format!("{plain} remainder checks, {} sandwich lines", r.len() - plain),
    );
}

#[test]
fn criterion_06_extremal_reproduction() {
    let t0 = Instant::now();
    let b = Budget::default();
    let mut r = Vec::new();

    let four = oracle_maximal_families(2, 4, 2, 1, &b).unwrap();
    r.extend(tint_extremal_reports(&four));
    // V(4,2): 15 points give 15 stars and 15 planes give 15 dual families, all of size 7.
    let maximum: Vec<_> = four.maximum_families().map(|(i, _)| four.family(i)).collect();
    r.push(check("extremal/n4-maximum-count", maximum.len() == 30));
    let stars = maximum
        .iter()
        .filter(|f| f.iter().skip(1).fold(f.members()[0].clone(), |acc, s| acc.meet(s)).dim() == 1)
        .count();
    r.push(check("extremal/n4-star-count", stars == 15));
    r.push(check("extremal/n4-max-size", four.max_size == 7));

    let five = oracle_maximal_families(2, 5, 2, 1, &b).unwrap();
    r.extend(tint_extremal_reports(&five));
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for f in &five.families {
        *sizes.entry(f.size).or_default() += 1;
    }
    r.push(check("extremal/n5-family-count", five.families.len() == 186));
    r.push(check("extremal/n5-size-multiset", sizes == BTreeMap::from([(7, 155), (15, 31)])));
    r.push(check("extremal/maximality", four.verify_maximality() && five.verify_maximality()));
    finish(6, "oracle maxima at (2,4,2,1) and (2,5,2,1)", t0, minutes(5), &r, "");
}

#[test]
fn criterion_07_diversity() {
    let t0 = Instant::now();
    let b = Budget::default();
    let mut r = check_max_diversity(2, 5, 2, &b).unwrap();
    let oracle = oracle_maximal_families(2, 5, 2, 1, &b).unwrap();
    r.push(check("max-diversity/q-squared", oracle.max_diversity == 4));
    let mut routes = BTreeMap::<String, usize>::new();
    for q in [2u8, 3] {
        for k in [3usize, 4] {
            for n in 2 * k + 1..=2 * k + 3 {
                let rep = check_g2_diversity(q, n, k, &b).unwrap();
                *routes.entry(rep.context.extra["route"].clone()).or_default() += 1;
                r.push(rep);
            }
        }
    }
    let routes = routes.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
    finish(7, "oracle max diversity q^2, G2 diversity closed form", t0, minutes(10), &r, &routes);
}

#[test]
fn criterion_08_hilton_milner_triangulation() {
    let t0 = Instant::now();
    let r = hilton_milner_triangulation(&Budget::default()).unwrap();
    finish(8, "HM formula = |built G2| = plane family 2 = 211", t0, minutes(1), &r, "");
}

#[test]
fn criterion_09_plane_catalog() {
    let t0 = Instant::now();
    let b = Budget::default();
    let mut r = Vec::new();
    for q in [2u8, 3] {
        let specs: Vec<_> = (1..=11).map(|j| ConstructionSpec::plane(j, q, 6)).collect();
        let fams = build_many(&specs, &b).unwrap();
        for (s, f) in specs.iter().zip(&fams) {
            r.push(size_report(s, f).unwrap());
            r.push(check("construct/intersecting", f.is_t_intersecting(1)));
        }
    }
    // The rest of the catalog at the same points, as a cross-check of the builders.
    r.extend(catalog_reports(2, 6, 3, &b).unwrap());
    finish(9, "11 plane families at (2,6) and (3,6): sizes and intersecting", t0, minutes(20), &r, "");
}

#[test]
fn criterion_10_proof_constants() {
    let t0 = Instant::now();
    let r = proofs_suite(None, None);
    let binary: Vec<_> = r
        .iter()
        .filter(|x| x.label == "max-diversity/step5/case-a-total" || x.label == "max-diversity/step5/case-b-total")
        .collect();
    let totals: Vec<_> = r.iter().filter(|x| x.label == "cross-peel/step4/total").collect();
    let note = format!(
        "7/8 and 7/4 fractions: {}/{} true; cross ledger sums < 1: {}/{} true",
        binary.iter().filter(|x| x.verdict).count(),
        binary.len(),
        totals.iter().filter(|x| x.verdict).count(),
        totals.len()
    );
    assert!(!binary.is_empty() && !totals.is_empty());
    finish(10, "proof-constant ledger on the default grids", t0, minutes(5), &r, &note);
}

#[test]
fn criterion_11_no_regular_families() {
    let t0 = Instant::now();
    let b = Budget::default();
    let mut r = no_regular_bracket_reports().unwrap();
    for n in 4..=5 {
        r.extend(check_no_regular_oracle(2, n, 2, &b).unwrap());
    }
    finish(11, "[k]^2 <= [n] on q<=9, n<=30; no regular oracle family", t0, minutes(1), &r, "");
}
