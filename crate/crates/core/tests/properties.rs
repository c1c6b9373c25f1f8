//! Property suites for the subspace layer, the family calculus and the
//! Gaussian-coefficient identities. Vector sets are computed by brute force
//! from the field tables and serve as the reference.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use qpeel_core::field::FieldTable;
use qpeel_core::qcalc::{count_meeting, gaussian, q_bracket};
use qpeel_core::qspace::{enumerate_grassmannian, enumerate_subspaces_of, QuotientMap};
use qpeel_core::verify::random_maximal_families;
use qpeel_core::{Ambient, Budget, Subspace, SubspaceFamily};

const QS: [u8; 5] = [2, 3, 4, 5, 7];

/// Every vector in the span of `rows`, by summing all coefficient choices.
fn vectors(q: u8, n: usize, rows: &[Vec<u8>]) -> BTreeSet<Vec<u8>> {
    let f = FieldTable::get(q).unwrap();
    let mut out = BTreeSet::from([vec![0u8; n]]);
    for r in rows {
        let mut next = BTreeSet::new();
        for v in &out {
            for c in 0..q {
                let w: Vec<u8> = v.iter().zip(r).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect();
                next.insert(w);
            }
        }
        out = next;
    }
    out
}

fn log_q(q: u8, size: usize) -> usize {
    let mut d = 0;
    let mut s = 1usize;
    while s < size {
        s *= q as usize;
        d += 1;
    }
    assert_eq!(s, size);
    d
}

/// (q, n, rows) with up to `max_rows` random rows of length n.
fn setup(max_rows: usize) -> impl Strategy<Value = (u8, usize, Vec<Vec<u8>>, Vec<Vec<u8>>)> {
    (0..QS.len(), 1usize..=4).prop_flat_map(move |(qi, n)| {
        let q = QS[qi];
        let row = prop::collection::vec(0..q, n);
        (
            Just(q),
            Just(n),
            prop::collection::vec(row.clone(), 0..=max_rows),
            prop::collection::vec(row, 0..=max_rows),
        )
    })
}

/// Random linear combinations of `rows`, plus the rows themselves reversed.
fn recombine(q: u8, n: usize, rows: &[Vec<u8>], coeffs: &[u8]) -> Vec<Vec<u8>> {
    let f = FieldTable::get(q).unwrap();
    let mut out: Vec<Vec<u8>> = rows.iter().rev().cloned().collect();
    for (j, chunk) in coeffs.chunks(rows.len().max(1)).enumerate().take(3) {
        let mut v = vec![0u8; n];
        for (c, r) in chunk.iter().zip(rows) {
            let c = c % q;
            for (x, &y) in v.iter_mut().zip(r) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        out.insert(j.min(out.len()), v);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_is_unique((q, n, a, _) in setup(4), coeffs in prop::collection::vec(any::<u8>(), 12)) {
        let amb = Ambient::new(n, q).unwrap();
        let s = amb.span(&a).unwrap();
        let other = recombine(q, n, &a, &coeffs);
        let t = amb.span(&other).unwrap();
        // Same span as vector sets exactly when the canonical forms agree.
        let same = vectors(q, n, &a) == vectors(q, n, &other);
        prop_assert!(same);
        prop_assert_eq!(&s, &t);
        prop_assert_eq!(amb.span(&s.basis()).unwrap(), s.clone());
        prop_assert_eq!(q_pow(q, s.dim()), vectors(q, n, &a).len());
    }

    #[test]
    fn equality_matches_vector_sets((q, n, a, b) in setup(3)) {
        let amb = Ambient::new(n, q).unwrap();
        let (s, t) = (amb.span(&a).unwrap(), amb.span(&b).unwrap());
        prop_assert_eq!(s == t, vectors(q, n, &a) == vectors(q, n, &b));
    }

    #[test]
    fn meet_and_join_match_vector_sets((q, n, a, b) in setup(3)) {
        let amb = Ambient::new(n, q).unwrap();
        let (s, t) = (amb.span(&a).unwrap(), amb.span(&b).unwrap());
        let (va, vb) = (vectors(q, n, &a), vectors(q, n, &b));
        let common = va.intersection(&vb).count();
        prop_assert_eq!(s.meet_dim(&t), log_q(q, common));
        prop_assert_eq!(s.meet(&t).dim(), s.meet_dim(&t));
        let both: Vec<Vec<u8>> = a.iter().chain(&b).cloned().collect();
        prop_assert_eq!(s.join(&t).dim(), log_q(q, vectors(q, n, &both).len()));
        // dim(A+B) + dim(A∩B) = dim A + dim B.
        prop_assert_eq!(s.join(&t).dim() + s.meet_dim(&t), s.dim() + t.dim());
        prop_assert!(s.join(&t).contains(&s) && s.contains(&s.meet(&t)));
        prop_assert_eq!(t.contains(&s), va.is_subset(&vb));
    }

    #[test]
    fn modular_law((q, n, a, b) in setup(3), c_extra in prop::collection::vec(prop::collection::vec(0u8..2, 4), 0..2)) {
        let amb = Ambient::new(n, q).unwrap();
        let (x, y) = (amb.span(&a).unwrap(), amb.span(&b).unwrap());
        // C ⊇ A: join A with a few more vectors.
        let extra: Vec<Vec<u8>> = c_extra.iter().map(|r| r[..n].to_vec()).collect();
        let z = x.join(&amb.span(&extra).unwrap());
        prop_assert!(z.contains(&x));
        prop_assert_eq!(x.join(&y.meet(&z)), x.join(&y).meet(&z));
    }

    #[test]
    fn quotient_is_a_bijection((q, n, a, b) in setup(3)) {
        let amb = Ambient::new(n, q).unwrap();
        let x = amb.span(&a).unwrap();
        let qm = QuotientMap::new(&x);
        prop_assert_eq!(qm.codomain().n(), n - x.dim());
        // Subspaces containing X go to subspaces of V/X and back.
        let s = x.join(&amb.span(&b).unwrap());
        let image = qm.push(&s).unwrap();
        prop_assert_eq!(image.dim(), s.dim() - x.dim());
        prop_assert_eq!(qm.pull(&image).unwrap(), s.clone());
        // Inclusion is preserved both ways.
        let bigger = s.join(&amb.span(&a.iter().chain(&b).cloned().collect::<Vec<_>>()).unwrap());
        prop_assert_eq!(qm.push(&bigger).unwrap().contains(&image), bigger.contains(&s));
    }

    #[test]
    fn gaussian_identities(qi in 0..QS.len(), n in 0i64..12, k in 0i64..12) {
        let q = QS[qi] as u64;
        prop_assume!(k <= n);
        prop_assert_eq!(gaussian(n, k, q), gaussian(n, n - k, q));
        if n >= 1 && k >= 1 {
            let pascal = gaussian(n - 1, k - 1, q) + num_traits::pow(BigInt::from(q), k as usize) * gaussian(n - 1, k, q);
            prop_assert_eq!(gaussian(n, k, q), pascal);
        }
        prop_assert_eq!(gaussian(n, 1, q), q_bracket(n, q));
        // Splitting the k-subspaces by their meet with a fixed m-space.
        for m in 0..=n {
            let total: BigInt = (0..=m.min(k)).map(|l| gaussian(m, l, q) * count_meeting(n, k, m, l, q).unwrap()).sum();
            prop_assert_eq!(total, gaussian(n, k, q));
        }
    }

    #[test]
    fn family_json_round_trip(seed in any::<u64>(), k in 1usize..=2) {
        let fam = &random_maximal_families(2, 4, k, 1, 1, seed, &Budget::default()).unwrap()[0];
        let text = fam.to_json();
        let back = SubspaceFamily::from_json(&text).unwrap();
        prop_assert_eq!(&back, fam);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn family_invariants(seed in any::<u64>()) {
        let b = Budget::default();
        let fam = &random_maximal_families(3, 4, 2, 1, 1, seed, &b).unwrap()[0];
        prop_assert!(fam.is_t_intersecting(1));
        let points: Vec<Subspace> = enumerate_grassmannian(fam.ambient(), 1, &b).unwrap().collect();
        let mut best = 0;
        for p in &points {
            let loc = fam.localize(p).unwrap();
            prop_assert!(loc.iter().all(|m| m.contains(p)));
            prop_assert_eq!(loc.len(), fam.iter().filter(|m| m.contains(p)).count());
            let rest = fam.difference(&loc).unwrap();
            prop_assert_eq!(rest.len() + loc.len(), fam.len());
            prop_assert_eq!(rest.union(&loc).unwrap(), fam.clone());
            best = best.max(loc.len());
        }
        prop_assert_eq!(fam.diversity().unwrap(), BigInt::from(fam.len() - best));
        let profile = fam.point_degree_profile();
        prop_assert_eq!(profile.len(), points.len());
        prop_assert_eq!(profile.iter().sum::<usize>(), fam.len() * q_bracket(2, 3).to_string().parse::<usize>().unwrap());
    }

    #[test]
    fn subspaces_of_a_subspace(qi in 0..3usize, rows in prop::collection::vec(prop::collection::vec(0u8..2, 4), 1..4), j in 0usize..4) {
        let q = QS[qi];
        let amb = Ambient::new(4, q).unwrap();
        let s = amb.span(&rows).unwrap();
        prop_assume!(j <= s.dim());
        let subs = enumerate_subspaces_of(&s, j);
        prop_assert_eq!(BigInt::from(subs.len()), gaussian(s.dim() as i64, j as i64, q as u64));
        prop_assert!(subs.iter().all(|x| x.dim() == j && s.contains(x)));
        let distinct: BTreeSet<_> = subs.iter().collect();
        prop_assert_eq!(distinct.len(), subs.len());
    }
}

fn q_pow(q: u8, d: usize) -> usize {
    (q as usize).pow(d as u32)
}
