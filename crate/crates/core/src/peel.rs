//! The peeling-simplification procedure and its cross-intersecting variant.
//!
//! Stage i starts from a family 𝒞ᵢ of subspaces of dimension at most i and
//! repeatedly replaces 𝒞[X] by {X} whenever X is a strict subspace of some
//! member and the enlarged family stays (cross) t-intersecting. Candidates
//! are taken smallest dimension first, then in canonical order.
//!
//! One ascending scan per stage suffices. A candidate that fails has a
//! witness member meeting it in dimension below t; replacements only shrink
//! members, so the witness (or its replacement) keeps failing it. Replacements
//! also never create new strict subspaces, so the candidate pool only shrinks.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::{cross_t_intersecting_violation, SubspaceFamily};
use crate::qcalc::{
    gaussian, int, q_bracket, sum_bound_rhs, BoundReport, Context, Relation,
};
use crate::qspace::{enumerate::for_each_subspace_of, Subspace};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum PeelMode {
    Single,
    /// Peeling 𝒞 against a fixed partner family of uniform dimension `a`.
    Cross { a: usize, partner: SubspaceFamily },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelStep {
    pub stage: usize,
    pub x: Subspace,
    /// |𝒞[X]| at the moment of replacement.
    pub removed: usize,
}

/// Output of stage i: 𝒞_{i−1} (`lower`) and 𝒲ᵢ (`top`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelLayer {
    pub stage: usize,
    pub lower: SubspaceFamily,
    pub top: SubspaceFamily,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeelingTrace {
    pub t: usize,
    /// Dimension of the starting stage (the largest member dimension of the input).
    pub k: usize,
    pub stop_dim: usize,
    #[serde(flatten)]
    pub mode: PeelMode,
    pub input: SubspaceFamily,
    /// Stages k, k−1, …, stop_dim+1 in that order.
    pub layers: Vec<PeelLayer>,
    pub steps: Vec<PeelStep>,
}

/// Run the single-family procedure on a t-intersecting family down to
/// 𝒞_{stop_dim}.
pub fn peel(f: &SubspaceFamily, t: usize, stop_dim: usize, budget: &Budget) -> Result<PeelingTrace> {
    if let Some((a, b)) = f.t_intersecting_violation(t) {
        return Err(Error::pre(format!("family is not {t}-intersecting: {a} and {b}")));
    }
    run(f, t, stop_dim, PeelMode::Single, budget)
}

/// Run the procedure on `b` while keeping it cross t-intersecting with the
/// fixed family `a`. The partner's uniformity sets the spreadness parameter.
pub fn peel_cross(
    b: &SubspaceFamily,
    a: &SubspaceFamily,
    t: usize,
    stop_dim: usize,
    budget: &Budget,
) -> Result<PeelingTrace> {
    if let Some((x, y)) = cross_t_intersecting_violation(a, b, t)? {
        return Err(Error::pre(format!("families are not cross {t}-intersecting: {x} and {y}")));
    }
    let dim_a = if a.is_empty() {
        0
    } else {
        a.uniform_dim()
            .ok_or_else(|| Error::pre("partner family must have a single dimension"))?
    };
    let mode = PeelMode::Cross {
        a: dim_a,
        partner: a.clone(),
    };
    run(b, t, stop_dim, mode, budget)
}

fn run(
    f: &SubspaceFamily,
    t: usize,
    stop_dim: usize,
    mode: PeelMode,
    budget: &Budget,
) -> Result<PeelingTrace> {
    let k = f
        .max_dim()
        .ok_or_else(|| Error::pre("cannot peel an empty family"))?;
    if !(t <= stop_dim && stop_dim <= k) {
        return Err(Error::pre(format!("need t <= stop_dim <= k, got t={t} stop={stop_dim} k={k}")));
    }
    let ambient = f.ambient();
    let mut layers = Vec::new();
    let mut steps = Vec::new();
    let mut current: Vec<Subspace> = f.members().to_vec();
    for stage in (stop_dim + 1..=k).rev() {
        let mut state = Stage {
            t,
            mode: &mode,
            alive: current,
            last_violator: 0,
        };
        state.run(stage, &mut steps, budget)?;
        let (top, lower): (Vec<Subspace>, Vec<Subspace>) =
            state.alive.into_iter().partition(|s| s.dim() == stage);
        let lower = SubspaceFamily::from_unsorted(ambient, lower);
        layers.push(PeelLayer {
            stage,
            lower: lower.clone(),
            top: SubspaceFamily::from_unsorted(ambient, top),
        });
        current = lower.members().to_vec();
    }
    Ok(PeelingTrace {
        t,
        k,
        stop_dim,
        mode,
        input: f.clone(),
        layers,
        steps,
    })
}

struct Stage<'a> {
    t: usize,
    mode: &'a PeelMode,
    alive: Vec<Subspace>,
    last_violator: usize,
}

impl Stage<'_> {
    fn run(&mut self, stage: usize, steps: &mut Vec<PeelStep>, budget: &Budget) -> Result<()> {
        let opposition_empty = match self.mode {
            PeelMode::Single => self.alive.is_empty(),
            PeelMode::Cross { partner, .. } => partner.is_empty(),
        };
        // Below dimension t a candidate cannot t-intersect anything.
        let first = if opposition_empty { 0 } else { self.t };
        for j in first..stage {
            let mut counts: HashMap<Subspace, usize> = HashMap::new();
            for m in self.alive.iter().filter(|m| m.dim() > j) {
                for_each_subspace_of(m, j, |z| *counts.entry(z).or_insert(0) += 1);
            }
            let mut pool: Vec<Subspace> = counts.keys().cloned().collect();
            pool.sort_unstable();
            for z in pool {
                if counts[&z] == 0 || !self.admits(&z) {
                    continue;
                }
                let mut gone = Vec::new();
                self.alive.retain(|m| {
                    let hit = m.contains(&z);
                    if hit {
                        gone.push(m.clone());
                    }
                    !hit
                });
                for m in gone.iter().filter(|m| m.dim() > j) {
                    for_each_subspace_of(m, j, |y| {
                        *counts.get_mut(&y).expect("counted at pool build") -= 1
                    });
                }
                let removed = gone.len();
                self.alive.push(z.clone());
                self.last_violator = 0;
                steps.push(PeelStep {
                    stage,
                    x: z,
                    removed,
                });
                if steps.len() as u64 > budget.step_cap {
                    return Err(Error::BudgetExceeded {
                        what: "peeling replacements".into(),
                        needed: steps.len().to_string(),
                        cap: budget.step_cap,
                    });
                }
            }
        }
        Ok(())
    }

    /// Whether adding `z` keeps the family (cross) t-intersecting. The last
    /// witness of failure is tried first; it often rejects the next candidate too.
    fn admits(&mut self, z: &Subspace) -> bool {
        let t = self.t;
        let others: &[Subspace] = match self.mode {
            PeelMode::Single => &self.alive,
            PeelMode::Cross { partner, .. } => partner.members(),
        };
        if others.is_empty() {
            return true;
        }
        let start = self.last_violator.min(others.len() - 1);
        if z.meet_dim(&others[start]) < t {
            return false;
        }
        for (i, m) in others.iter().enumerate() {
            if z.meet_dim(m) < t {
                self.last_violator = i;
                return false;
            }
        }
        true
    }
}

impl PeelingTrace {
    pub fn layer(&self, stage: usize) -> Option<&PeelLayer> {
        self.layers.iter().find(|l| l.stage == stage)
    }

    /// 𝒞ᵢ for stop_dim ≤ i ≤ k.
    pub fn stage_input(&self, i: usize) -> Option<&SubspaceFamily> {
        if i == self.k {
            Some(&self.input)
        } else {
            self.layer(i + 1).map(|l| &l.lower)
        }
    }

    /// 𝒞_{stop_dim}, the final low-dimensional family.
    pub fn core(&self) -> &SubspaceFamily {
        self.stage_input(self.stop_dim).expect("stop_dim is recorded")
    }

    /// Spreadness parameter used by the guarantees of `stage`:
    /// [i−t+1] in single mode, [a−t+1] in cross mode.
    pub fn spread_parameter(&self, stage: usize) -> BigInt {
        let q = self.input.ambient().q() as u64;
        match &self.mode {
            PeelMode::Single => q_bracket(stage as i64 - self.t as i64 + 1, q),
            PeelMode::Cross { a, .. } => q_bracket(*a as i64 - self.t as i64 + 1, q),
        }
    }

    /// For every recorded i, whether ℱ = ℱ[𝒞ᵢ] ∪ ⋃_{j>i} ℱ[𝒲ⱼ].
    pub fn reconstruction(&self) -> Vec<(usize, bool)> {
        let f = &self.input;
        let mut out = Vec::new();
        let mut tops: Vec<&Subspace> = Vec::new();
        for i in (self.stop_dim..=self.k).rev() {
            let ci = self.stage_input(i).expect("recorded stage");
            let covered = f
                .iter()
                .filter(|s| ci.iter().chain(tops.iter().copied()).any(|x| s.contains(x)))
                .count();
            out.push((i, covered == f.len()));
            if let Some(l) = self.layer(i) {
                tops.extend(l.top.iter());
            }
        }
        out
    }

    /// Re-run the logged steps and hand every intermediate family to `visit`.
    /// Fails if the replay does not land on the recorded layers.
    pub fn replay(&self, mut visit: impl FnMut(usize, &SubspaceFamily)) -> Result<()> {
        let ambient = self.input.ambient();
        let mut cur = self.input.clone();
        visit(self.k, &cur);
        for layer in &self.layers {
            for step in self.steps.iter().filter(|s| s.stage == layer.stage) {
                let kept: Vec<Subspace> = cur
                    .iter()
                    .filter(|m| !m.contains(&step.x))
                    .cloned()
                    .chain(std::iter::once(step.x.clone()))
                    .collect();
                let removed = cur.len() + 1 - kept.len();
                if removed != step.removed {
                    return Err(Error::pre(format!(
                        "replay removed {removed} members at {}, log says {}",
                        step.x, step.removed
                    )));
                }
                cur = SubspaceFamily::from_unsorted(ambient, kept);
                visit(layer.stage, &cur);
            }
            let rebuilt = layer.lower.union(&layer.top)?;
            if rebuilt != cur {
                return Err(Error::pre(format!("replay diverges at stage {}", layer.stage)));
            }
            cur = layer.lower.clone();
        }
        Ok(())
    }

    /// Every intermediate family is t-intersecting (single mode) or cross
    /// t-intersecting with the partner (cross mode).
    pub fn intermediates_intersecting(&self) -> Result<bool> {
        let mut ok = true;
        let t = self.t;
        self.replay(|_, fam| {
            if !ok {
                return;
            }
            ok = match &self.mode {
                PeelMode::Single => fam.is_t_intersecting(t),
                PeelMode::Cross { partner, .. } => {
                    cross_t_intersecting_violation(partner, fam, t)
                        .map(|v| v.is_none())
                        .unwrap_or(false)
                }
            };
        })?;
        Ok(ok)
    }

    /// True when no admissible candidate is left in any stage's output, by
    /// brute force over every strict subspace of every member.
    pub fn stages_saturated(&self) -> bool {
        self.layers.iter().all(|layer| {
            let fam = layer.lower.union(&layer.top).expect("same ambient");
            let others: Vec<&Subspace> = match &self.mode {
                PeelMode::Single => fam.iter().collect(),
                PeelMode::Cross { partner, .. } => partner.iter().collect(),
            };
            fam.iter().all(|m| {
                (0..m.dim()).all(|j| {
                    let mut none = true;
                    for_each_subspace_of(m, j, |z| {
                        if none && others.iter().all(|o| z.meet_dim(o) >= self.t) {
                            none = false;
                        }
                    });
                    none
                })
            })
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    fn context(&self, stage: usize) -> Context {
        let a = self.input.ambient();
        let ctx = Context::new()
            .q(a.q() as u64)
            .n(a.n() as i64)
            .k(self.k as i64)
            .t(self.t as i64)
            .i(stage as i64);
        match &self.mode {
            PeelMode::Single => ctx,
            PeelMode::Cross { a, .. } => ctx.with("a", a),
        }
    }
}

/// |𝒲ᵢ| ≤ gaussian(i, t)·[i−t+1]^{i−t} for every layer of a single-family trace.
pub fn check_layer_bound(trace: &PeelingTrace) -> Result<Vec<BoundReport>> {
    if !matches!(trace.mode, PeelMode::Single) {
        return Err(Error::pre("layer bound applies to single-family traces"));
    }
    let q = trace.input.ambient().q() as u64;
    let t = trace.t as i64;
    Ok(trace
        .layers
        .iter()
        .map(|l| {
            let i = l.stage as i64;
            let rhs = gaussian(i, t, q) * num_traits::pow(q_bracket(i - t + 1, q), (i - t) as usize);
            BoundReport::new(
                "peel/layer-bound",
                trace.context(l.stage),
                int(l.top.len()),
                Relation::Le,
                int(rhs),
            )
        })
        .collect())
}

/// |𝒲ᵢ| ≤ gaussian(a, t)·[a−t+1]^{i−t} for every layer of a cross trace.
pub fn check_cross_layer_bound(trace: &PeelingTrace) -> Result<Vec<BoundReport>> {
    let PeelMode::Cross { a, .. } = &trace.mode else {
        return Err(Error::pre("cross layer bound applies to cross traces"));
    };
    let q = trace.input.ambient().q() as u64;
    let (a, t) = (*a as i64, trace.t as i64);
    Ok(trace
        .layers
        .iter()
        .map(|l| {
            let i = l.stage as i64;
            let rhs = gaussian(a, t, q)
                * num_traits::pow(q_bracket(a - t + 1, q), (i - t).max(0) as usize);
            BoundReport::new(
                "cross-peel/layer-bound",
                trace.context(l.stage),
                int(l.top.len()),
                Relation::Le,
                int(rhs),
            )
        })
        .collect())
}

/// Cardinality form of "no spread subfamily": with L = 𝒞_{i−1} ∪ 𝒲ᵢ and r the
/// stage's spreadness parameter, every subspace X of dimension below i inside
/// a member satisfies |L[X]| ≤ r^{i−dim X}. A larger L[X] would, after
/// quotienting by X, contain a spread piece by the restriction lemma.
///
/// Returns the first violating X with its degree, or `None`.
pub fn no_spread_subfamily_violation(
    trace: &PeelingTrace,
    i: usize,
) -> Result<Option<(Subspace, usize)>> {
    let layer = trace
        .layer(i)
        .ok_or_else(|| Error::pre(format!("stage {i} is not part of the trace")))?;
    let l = layer.lower.union(&layer.top)?;
    let r = trace.spread_parameter(i);
    let mut worst: Option<(Subspace, usize)> = None;
    for d in 0..i {
        let counts = if d == 0 {
            let mut c = HashMap::new();
            if !l.is_empty() {
                c.insert(l.ambient().zero(), l.len());
            }
            c
        } else {
            l.degree_counts(d)
        };
        let cap = num_traits::pow(r.clone(), i - d);
        let bad = counts
            .into_iter()
            .filter(|(_, n)| BigInt::from(*n) > cap)
            .min_by(|a, b| a.0.cmp(&b.0));
        if bad.is_some() {
            worst = bad;
            break;
        }
    }
    Ok(worst)
}

pub fn check_no_spread_subfamily(trace: &PeelingTrace, i: usize) -> Result<bool> {
    Ok(no_spread_subfamily_violation(trace, i)?.is_none())
}

/// Result of peeling down to 𝒞_{s+t} and measuring what it misses.
#[derive(Clone, Debug)]
pub struct StructuralRemainder {
    pub core: SubspaceFamily,
    pub remainder: SubspaceFamily,
    pub report: BoundReport,
    pub trace: PeelingTrace,
}

/// Peel a t-intersecting k-uniform family to 𝒞_{s+t} and compare
/// |ℱ ∖ ℱ[𝒞_{s+t}]| with C·q^{(k−t)(n−k)−(s+1)(n−k−t−s−1)}.
pub fn structural_remainder(
    f: &SubspaceFamily,
    t: usize,
    s: usize,
    budget: &Budget,
) -> Result<StructuralRemainder> {
    let k = f
        .uniform_dim()
        .ok_or_else(|| Error::pre("structural remainder needs a nonempty uniform family"))?;
    let n = f.ambient().n();
    if !(k >= s + t + 1 && n >= 2 * k + s + 1) {
        return Err(Error::pre(format!(
            "need k >= s+t+1 and n >= 2k+s+1, got n={n} k={k} t={t} s={s}"
        )));
    }
    let trace = peel(f, t, s + t, budget)?;
    let core = trace.core().clone();
    let remainder = f.difference(&f.localize_many(&core)?)?;
    let q = f.ambient().q() as u64;
    let (n, k, t, s) = (n as i64, k as i64, t as i64, s as i64);
    let report = BoundReport::new(
        "structure/remainder",
        Context::new().q(q).n(n).k(k).t(t).s(s),
        int(remainder.len()),
        Relation::Le,
        sum_bound_rhs(n, k, t, s, q),
    );
    Ok(StructuralRemainder {
        core,
        remainder,
        report,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::{enumerate_grassmannian, Ambient};

    fn grass(a: Ambient, k: usize) -> SubspaceFamily {
        SubspaceFamily::from_members(a, enumerate_grassmannian(a, k, &Budget::default()).unwrap())
            .unwrap()
    }

    fn lines_of(a: Ambient, plane: &Subspace) -> SubspaceFamily {
        let lines = grass(a, 2);
        SubspaceFamily::from_members(a, lines.iter().filter(|l| plane.contains(l)).cloned()).unwrap()
    }

    #[test]
    fn star_collapses_to_its_center() {
        let a = Ambient::new(7, 2).unwrap();
        let p = a.coordinate_span(&[0]);
        let star = grass(a, 3).localize(&p).unwrap();
        let trace = peel(&star, 1, 1, &Budget::default()).unwrap();
        assert_eq!(trace.steps[0].x, p);
        assert_eq!(trace.steps[0].removed, star.len());
        assert_eq!(trace.core().members(), &[p]);
        assert!(trace.layers.iter().all(|l| l.top.is_empty()));
        assert!(check_layer_bound(&trace).unwrap().iter().all(|r| r.lhs == int(0)));
    }

    #[test]
    fn lines_of_a_plane_cannot_be_simplified() {
        let a = Ambient::new(5, 2).unwrap();
        let plane = a.coordinate_span(&[0, 1, 2]);
        let f = lines_of(a, &plane);
        let trace = peel(&f, 1, 1, &Budget::default()).unwrap();
        assert!(trace.steps.is_empty());
        let layer = trace.layer(2).unwrap();
        assert_eq!(layer.top, f);
        assert!(layer.lower.is_empty());
        let bound = &check_layer_bound(&trace).unwrap()[0];
        assert_eq!((bound.lhs.clone(), bound.rhs.clone()), (int(7), int(9)));
        assert!(check_no_spread_subfamily(&trace, 2).unwrap());
        assert!(trace.stages_saturated());
    }

    #[test]
    fn empty_partner_collapses_to_zero() {
        let a = Ambient::new(5, 2).unwrap();
        let b = grass(a, 2).localize(&a.coordinate_span(&[0])).unwrap();
        let trace = peel_cross(&b, &SubspaceFamily::empty(a), 1, 1, &Budget::default()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert!(trace.steps[0].x.is_zero());
        assert_eq!(trace.core().members(), &[a.zero()]);
    }

    #[test]
    fn preconditions_are_enforced() {
        let a = Ambient::new(4, 2).unwrap();
        let all = grass(a, 2);
        assert!(peel(&all, 1, 1, &Budget::default()).is_err());
        let star = all.localize(&a.coordinate_span(&[0])).unwrap();
        assert!(peel(&star, 1, 3, &Budget::default()).is_err());
        assert!(peel(&SubspaceFamily::empty(a), 1, 1, &Budget::default()).is_err());
    }

    #[test]
    fn step_budget_is_enforced() {
        let a = Ambient::new(5, 2).unwrap();
        let star = grass(a, 2).localize(&a.coordinate_span(&[0])).unwrap();
        let tight = Budget::default().with_step_cap(0);
        assert!(peel(&star, 1, 1, &tight).unwrap_err().is_budget());
    }
}
