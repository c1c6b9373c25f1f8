//! Subspace-spreadness and the search for a spread restriction.
//!
//! A family 𝒞 is r-spread if every i-subspace X (i ≥ 1) satisfies
//! |𝒞(X)|·rⁱ < |𝒞|. Only subspaces inside some member can violate this.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::family::SubspaceFamily;
use crate::qspace::{enumerate::for_each_subspace_of, QuotientMap, Subspace};

/// Outcome of a spreadness test; `witness` is the first violator in
/// canonical order together with its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadVerdict {
    pub spread: bool,
    pub witness: Option<(Subspace, usize)>,
}

/// Test r-spreadness over subspace dimensions 1..=max_dim.
pub fn is_r_spread(c: &SubspaceFamily, r: &BigInt, max_dim: usize) -> Result<SpreadVerdict> {
    if c.is_empty() {
        return Err(Error::pre("spreadness of an empty family"));
    }
    if *r < BigInt::from(1) {
        return Err(Error::pre("spreadness needs r >= 1"));
    }
    let size = BigInt::from(c.len());
    for i in 1..=max_dim {
        let threshold = num_traits::pow(r.clone(), i);
        let witness = c
            .degree_counts(i)
            .into_iter()
            .filter(|(_, n)| BigInt::from(*n) * &threshold >= size)
            .min_by(|a, b| a.0.cmp(&b.0));
        if witness.is_some() {
            return Ok(SpreadVerdict {
                spread: false,
                witness,
            });
        }
    }
    Ok(SpreadVerdict {
        spread: true,
        witness: None,
    })
}

/// An inclusion-maximal X with |𝒞(X)|·r^{dim X} ≥ |𝒞|, and the checks that
/// make 𝒞(X) a usable spread piece.
#[derive(Clone, Debug)]
pub struct SpreadRestriction {
    pub x: Subspace,
    /// The chain of subspaces visited by the greedy ascent, ending at `x`.
    pub ascent: Vec<Subspace>,
    pub quotient: SubspaceFamily,
    /// |𝒞(X)| > 1.
    pub more_than_one: bool,
    /// 𝒞(X) is r-spread with max_dim its largest member dimension.
    pub quotient_is_spread: bool,
}

impl SpreadRestriction {
    pub fn certified(&self) -> bool {
        self.more_than_one && self.quotient_is_spread
    }
}

/// Strict superspaces Y ⊋ X inside members of `c` with |𝒞(Y)|·r^{dim Y} ≥ |𝒞|,
/// with their degrees, in canonical order.
pub fn superspaces_meeting_criterion(
    c: &SubspaceFamily,
    r: &BigInt,
    x: &Subspace,
) -> Result<Vec<(Subspace, usize)>> {
    let qm = QuotientMap::new(x);
    let mut counts: HashMap<Subspace, usize> = HashMap::new();
    for s in c.iter().filter(|s| s.contains(x)) {
        let image = qm.push_unchecked(s);
        for j in 1..=image.dim() {
            for_each_subspace_of(&image, j, |t| *counts.entry(t).or_insert(0) += 1);
        }
    }
    let size = BigInt::from(c.len());
    let mut out: Vec<(Subspace, usize)> = counts
        .into_iter()
        .filter(|(t, n)| {
            BigInt::from(*n) * num_traits::pow(r.clone(), x.dim() + t.dim()) >= size
        })
        .map(|(t, n)| (qm.pull(&t).expect("codomain subspace"), n))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Greedy ascent from the zero subspace, always moving to the canonically
/// smallest superspace that still meets the criterion.
pub fn find_spread_restriction(
    c: &SubspaceFamily,
    r: &BigInt,
    k: usize,
) -> Result<SpreadRestriction> {
    if BigInt::from(c.len()) <= num_traits::pow(r.clone(), k) {
        return Err(Error::pre(format!(
            "spread restriction needs |C| > r^k, got |C|={} r={r} k={k}",
            c.len()
        )));
    }
    if c.max_dim().unwrap_or(0) > k {
        return Err(Error::pre(format!("family has members of dimension above k={k}")));
    }
    let mut x = c.ambient().zero();
    let mut ascent = vec![x.clone()];
    while let Some((y, _)) = superspaces_meeting_criterion(c, r, &x)?.into_iter().next() {
        x = y;
        ascent.push(x.clone());
    }
    let quotient = c.quotient_localize(&x)?;
    let more_than_one = quotient.len() > 1;
    let quotient_is_spread = if quotient.is_empty() {
        false
    } else {
        is_r_spread(&quotient, r, quotient.max_dim().unwrap_or(0))?.spread
    };
    Ok(SpreadRestriction {
        x,
        ascent,
        quotient,
        more_than_one,
        quotient_is_spread,
    })
}
