//! Seeded random maximal t-intersecting families.
//!
//! The k-subspaces are visited in a ChaCha8-shuffled order and each one is
//! kept when it meets every kept member in dimension ≥ t. A rejected subspace
//! already conflicts with a kept one, so the result is maximal.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::SubspaceFamily;
use crate::qspace::{enumerate_grassmannian, Ambient, Subspace};

/// Greedy maximal family over a shuffled copy of `universe`.
pub fn greedy_maximal(universe: &[Subspace], t: usize, rng: &mut ChaCha8Rng) -> Vec<Subspace> {
    let mut order: Vec<&Subspace> = universe.iter().collect();
    order.shuffle(rng);
    let mut kept: Vec<Subspace> = Vec::new();
    for s in order {
        if kept.iter().all(|m| m.meet_dim(s) >= t) {
            kept.push(s.clone());
        }
    }
    kept.sort_unstable();
    kept
}

/// `count` random maximal t-intersecting families of k-subspaces of V(n, q),
/// reproducible from `seed`.
pub fn random_maximal_families(
    q: u8,
    n: usize,
    k: usize,
    t: usize,
    count: usize,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<SubspaceFamily>> {
    if t == 0 || t > k || k > n {
        return Err(Error::pre(format!("need 1 <= t <= k <= n, got n={n} k={k} t={t}")));
    }
    let a = Ambient::new(n, q)?;
    let universe: Vec<Subspace> = enumerate_grassmannian(a, k, budget)?.collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| SubspaceFamily::from_unsorted(a, greedy_maximal(&universe, t, &mut rng)))
        .collect())
}

/// No k-subspace outside `f` meets all of its members in dimension ≥ t.
pub fn is_maximal(f: &SubspaceFamily, k: usize, t: usize, budget: &Budget) -> Result<bool> {
    for s in enumerate_grassmannian(f.ambient(), k, budget)? {
        if !f.contains_member(&s) && f.iter().all(|m| m.meet_dim(&s) >= t) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_families_are_maximal_and_reproducible() {
        let b = Budget::default();
        let a = random_maximal_families(2, 5, 2, 1, 10, 7, &b).unwrap();
        let again = random_maximal_families(2, 5, 2, 1, 10, 7, &b).unwrap();
        assert_eq!(a, again);
        for f in &a {
            assert!(f.is_t_intersecting(1));
            assert!(is_maximal(f, 2, 1, &b).unwrap());
            assert!(f.len() == 15 || f.len() == 7);
        }
        let other = random_maximal_families(2, 5, 2, 1, 10, 8, &b).unwrap();
        assert_ne!(a, other);
    }
}
