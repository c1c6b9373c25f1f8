//! Families of subspaces of one ambient space, possibly of mixed dimension.

use std::collections::HashMap;
use std::io::{Read, Write};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qspace::{enumerate::for_each_subspace_of, Ambient, QuotientMap, Subspace};

/// A sorted, duplicate-free set of subspaces of a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceFamily {
    ambient: Ambient,
    members: Vec<Subspace>,
}

/// On-disk form: `{"q":..,"n":..,"subspaces":[[row,..],..]}`.
#[derive(Serialize, Deserialize)]
struct FamilyFile {
    q: u8,
    n: usize,
    subspaces: Vec<Vec<Vec<u8>>>,
}

impl SubspaceFamily {
    pub fn empty(ambient: Ambient) -> Self {
        SubspaceFamily {
            ambient,
            members: Vec::new(),
        }
    }

    /// Sort and deduplicate; every member must live in `ambient`.
    pub fn from_members(ambient: Ambient, members: impl IntoIterator<Item = Subspace>) -> Result<Self> {
        let members: Vec<Subspace> = members.into_iter().collect();
        if members.iter().any(|s| s.ambient() != ambient) {
            return Err(Error::AmbientMismatch);
        }
        Ok(Self::from_unsorted(ambient, members))
    }

    pub(crate) fn from_unsorted(ambient: Ambient, mut members: Vec<Subspace>) -> Self {
        members.sort_unstable();
        members.dedup();
        SubspaceFamily { ambient, members }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subspace> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_member(&self, s: &Subspace) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// Largest member dimension; `None` for the empty family.
    pub fn max_dim(&self) -> Option<usize> {
        self.members.iter().map(Subspace::dim).max()
    }

    /// The common dimension when every member has the same one.
    pub fn uniform_dim(&self) -> Option<usize> {
        let d = self.members.first()?.dim();
        self.members.iter().all(|s| s.dim() == d).then_some(d)
    }

    pub fn union(&self, other: &SubspaceFamily) -> Result<SubspaceFamily> {
        self.check_ambient(other.ambient)?;
        let all = self.members.iter().chain(other.members.iter()).cloned().collect();
        Ok(Self::from_unsorted(self.ambient, all))
    }

    pub fn difference(&self, other: &SubspaceFamily) -> Result<SubspaceFamily> {
        self.check_ambient(other.ambient)?;
        let rest = self
            .members
            .iter()
            .filter(|s| !other.contains_member(s))
            .cloned()
            .collect();
        Ok(SubspaceFamily {
            ambient: self.ambient,
            members: rest,
        })
    }

    fn check_ambient(&self, a: Ambient) -> Result<()> {
        if a != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    fn filtered(&self, keep: impl Fn(&Subspace) -> bool) -> SubspaceFamily {
        SubspaceFamily {
            ambient: self.ambient,
            members: self.members.iter().filter(|s| keep(s)).cloned().collect(),
        }
    }

    /// Members containing `x`.
    pub fn localize(&self, x: &Subspace) -> Result<SubspaceFamily> {
        self.check_ambient(x.ambient())?;
        Ok(self.filtered(|s| s.contains(x)))
    }

    /// Members containing at least one member of `xs`.
    pub fn localize_many(&self, xs: &SubspaceFamily) -> Result<SubspaceFamily> {
        self.check_ambient(xs.ambient)?;
        Ok(self.filtered(|s| xs.members.iter().any(|x| s.contains(x))))
    }

    /// Images S/X of the members S ⊇ X, in the quotient ambient.
    pub fn quotient_localize(&self, x: &Subspace) -> Result<SubspaceFamily> {
        self.check_ambient(x.ambient())?;
        let qm = QuotientMap::new(x);
        let images = self
            .members
            .iter()
            .filter(|s| s.contains(x))
            .map(|s| qm.push_unchecked(s))
            .collect();
        Ok(Self::from_unsorted(qm.codomain(), images))
    }

    /// A pair of members meeting in dimension below `t`, if one exists.
    ///
    /// Members through a most popular t-subspace meet each other in at least
    /// that subspace, so only pairs involving the other members are tested.
    pub fn t_intersecting_violation(&self, t: usize) -> Option<(Subspace, Subspace)> {
        let m = &self.members;
        if t == 0 || m.len() < 2 {
            return None;
        }
        if let Some(small) = m.iter().find(|s| s.dim() < t) {
            let other = m.iter().find(|s| *s != small).unwrap();
            return Some((small.clone(), other.clone()));
        }
        let through: Vec<bool> = if m.len() >= 32 {
            let (x, _) = self.degree_max(t).expect("nonempty, t <= dim");
            m.iter().map(|s| s.contains(&x)).collect()
        } else {
            vec![false; m.len()]
        };
        for a in 0..m.len() {
            if through[a] {
                continue;
            }
            for b in 0..m.len() {
                // Pairs of two outside members are visited once, with a < b.
                if b == a || (!through[b] && b < a) {
                    continue;
                }
                if m[a].meet_dim(&m[b]) < t {
                    let (i, j) = if a < b { (a, b) } else { (b, a) };
                    return Some((m[i].clone(), m[j].clone()));
                }
            }
        }
        None
    }

    pub fn is_t_intersecting(&self, t: usize) -> bool {
        self.t_intersecting_violation(t).is_none()
    }

    /// Degree of every d-subspace lying in at least one member.
    pub fn degree_counts(&self, d: usize) -> HashMap<Subspace, usize> {
        let mut counts = HashMap::new();
        for s in &self.members {
            for_each_subspace_of(s, d, |x| *counts.entry(x).or_insert(0) += 1);
        }
        counts
    }

    /// A d-subspace in the most members, with that count; ties go to the
    /// canonically smallest subspace.
    pub fn degree_max(&self, d: usize) -> Result<(Subspace, BigInt)> {
        if self.members.is_empty() {
            return Err(Error::pre("degree_max of an empty family"));
        }
        if d == 0 || d > self.ambient.n() {
            return Err(Error::pre(format!("degree_max needs 1 <= d <= n, got d={d}")));
        }
        let best = self
            .degree_counts(d)
            .into_iter()
            .max_by(|(x, c), (y, e)| c.cmp(e).then_with(|| y.cmp(x)));
        Ok(match best {
            Some((x, c)) => (x, c.into()),
            None => (
                self.ambient.coordinate_span(&(0..d).collect::<Vec<_>>()),
                0.into(),
            ),
        })
    }

    /// Members avoiding a most popular 1-subspace.
    pub fn diversity(&self) -> Result<BigInt> {
        let (_, c) = self.degree_max(1)?;
        Ok(BigInt::from(self.len()) - c)
    }

    /// Sorted multiset of 1-subspace degrees, over all points of the ambient
    /// space (points on no member contribute 0).
    pub fn point_degree_profile(&self) -> Vec<usize> {
        let counts = self.degree_counts(1);
        let total_points = crate::qcalc::q_bracket(self.ambient.n() as i64, self.ambient.q() as u64);
        let total: usize = total_points.try_into().expect("at most [16]_9 points");
        let mut profile: Vec<usize> = counts.into_values().collect();
        profile.resize(total, 0);
        profile.sort_unstable();
        profile
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<SubspaceFamily> {
        Self::from_file(serde_json::from_str(text)?)
    }

    fn from_file(file: FamilyFile) -> Result<SubspaceFamily> {
        let ambient = Ambient::new(file.n, file.q)?;
        let members = file
            .subspaces
            .iter()
            .map(|rows| ambient.span(rows))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_unsorted(ambient, members))
    }

    pub fn read_json<R: Read>(mut r: R) -> Result<SubspaceFamily> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_json().as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    }
}

impl Serialize for SubspaceFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyFile {
            q: self.ambient.q(),
            n: self.ambient.n(),
            subspaces: self.members.iter().map(Subspace::basis).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = FamilyFile::deserialize(d)?;
        Self::from_file(file).map_err(serde::de::Error::custom)
    }
}

impl<'a> IntoIterator for &'a SubspaceFamily {
    type Item = &'a Subspace;
    type IntoIter = std::slice::Iter<'a, Subspace>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// A pair (F, G) ∈ A × B with dim(F ∩ G) < t, if one exists.
pub fn cross_t_intersecting_violation(
    a: &SubspaceFamily,
    b: &SubspaceFamily,
    t: usize,
) -> Result<Option<(Subspace, Subspace)>> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch);
    }
    for f in &a.members {
        for g in &b.members {
            if f.meet_dim(g) < t {
                return Ok(Some((f.clone(), g.clone())));
            }
        }
    }
    Ok(None)
}

pub fn is_cross_t_intersecting(a: &SubspaceFamily, b: &SubspaceFamily, t: usize) -> Result<bool> {
    Ok(cross_t_intersecting_violation(a, b, t)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::qspace::enumerate_grassmannian;

    fn grass(n: usize, k: usize, q: u8) -> SubspaceFamily {
        let a = Ambient::new(n, q).unwrap();
        SubspaceFamily::from_members(a, enumerate_grassmannian(a, k, &Budget::default()).unwrap())
            .unwrap()
    }

    #[test]
    fn localization_examples() {
        let c = grass(5, 2, 2);
        let a = c.ambient();
        assert_eq!(c.localize(&a.zero()).unwrap(), c);
        assert_eq!(c.localize(&a.coordinate_span(&[0])).unwrap().len(), 15);
        assert!(c.localize(&a.coordinate_span(&[0, 1, 2])).unwrap().is_empty());
        let c4 = grass(4, 2, 2);
        let a4 = c4.ambient();
        let pts = SubspaceFamily::from_members(
            a4,
            [a4.coordinate_span(&[0]), a4.coordinate_span(&[1])],
        )
        .unwrap();
        assert_eq!(c4.localize_many(&pts).unwrap().len(), 13);
        assert!(c4.localize_many(&SubspaceFamily::empty(a4)).unwrap().is_empty());
    }

    #[test]
    fn quotient_localization_of_a_star_is_a_grassmannian() {
        let c = grass(5, 2, 2);
        let x = c.ambient().coordinate_span(&[2]);
        let img = c.quotient_localize(&x).unwrap();
        assert_eq!(img.ambient().n(), 4);
        assert_eq!(img, grass(4, 1, 2));
        assert_eq!(c.quotient_localize(&c.ambient().zero()).unwrap(), c);
    }

    #[test]
    fn intersecting_predicates() {
        let c = grass(4, 2, 2);
        let (a, b) = c.t_intersecting_violation(1).unwrap();
        assert_eq!(a.meet_dim(&b), 0);
        let plane = c.ambient().coordinate_span(&[0, 1, 2]);
        let lines = c.localize(&c.ambient().zero()).unwrap();
        let in_plane = SubspaceFamily::from_members(
            c.ambient(),
            lines.iter().filter(|l| plane.contains(l)).cloned(),
        )
        .unwrap();
        assert_eq!(in_plane.len(), 7);
        assert!(in_plane.is_t_intersecting(1));
        assert!(!in_plane.is_t_intersecting(2));
        let big = grass(5, 2, 2);
        assert!(!big.is_t_intersecting(1));
        let star = big.localize(&big.ambient().coordinate_span(&[4])).unwrap();
        assert!(star.is_t_intersecting(1));
        assert!(is_cross_t_intersecting(&SubspaceFamily::empty(c.ambient()), &c, 1).unwrap());
    }

    #[test]
    fn degree_and_diversity() {
        let c = grass(5, 2, 2);
        let p = c.ambient().coordinate_span(&[3]);
        let star = c.localize(&p).unwrap();
        let (x, n) = star.degree_max(1).unwrap();
        assert_eq!((x, n), (p, BigInt::from(15)));
        assert_eq!(star.diversity().unwrap(), 0.into());
        assert!(SubspaceFamily::empty(c.ambient()).degree_max(1).is_err());
        let profile = star.point_degree_profile();
        assert_eq!(profile.len(), 31);
        assert_eq!(profile.iter().sum::<usize>(), 15 * 3);
    }

    #[test]
    fn json_round_trip() {
        let a = Ambient::new(3, 3).unwrap();
        let text = r#"{"q":3,"n":3,"subspaces":[[[2,2,0]],[[1,1,0]],[],[[0,1,0],[1,0,0]]]}"#;
        let f = SubspaceFamily::from_json(text).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.members()[0], a.zero());
        let once = f.to_json();
        assert_eq!(SubspaceFamily::from_json(&once).unwrap().to_json(), once);
        assert!(SubspaceFamily::from_json(r#"{"q":6,"n":3,"subspaces":[]}"#).is_err());
        assert!(SubspaceFamily::from_json(r#"{"q":2,"n":3,"subspaces":[[[1,0]]]}"#).is_err());
    }
}
