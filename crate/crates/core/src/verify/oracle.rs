//! Exhaustive search for maximal t-intersecting families.
//!
//! Vertices are the k-subspaces of V(n, q) in canonical order; F and G are
//! adjacent when dim(F ∩ G) ≥ t. Maximal cliques are the maximal
//! t-intersecting families. Enumeration is Bron–Kerbosch with Tomita pivoting
//! over bitset rows.

use num_bigint::BigInt;
use serde::Serialize;

use crate::budget::{Budget, ORACLE_VERTEX_CAP};
use crate::error::{Error, Result};
use crate::family::SubspaceFamily;
use crate::qcalc::gaussian;
use crate::qspace::{enumerate_grassmannian, Ambient, Subspace};

type Bits = Vec<u64>;

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn clear(b: &mut Bits, i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn is_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn and_count(a: &Bits, b: &Bits) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn ones(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let bit = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + bit)
        })
    })
}

/// Adjacency of the t-intersection graph.
struct Graph {
    adj: Vec<Bits>,
}

impl Graph {
    fn new(vertices: &[Subspace], t: usize) -> Self {
        let v = vertices.len();
        let mut adj = vec![vec![0u64; words(v)]; v];
        for i in 0..v {
            for j in i + 1..v {
                if vertices[i].meet_dim(&vertices[j]) >= t {
                    set(&mut adj[i], j);
                    set(&mut adj[j], i);
                }
            }
        }
        Graph { adj }
    }

    fn expand(&self, r: &mut Vec<usize>, mut p: Bits, mut x: Bits, out: &mut Vec<Vec<usize>>) {
        if is_empty(&p) {
            if is_empty(&x) {
                out.push(r.clone());
            }
            return;
        }
        // Pivot: the vertex of P ∪ X with most neighbours in P, lowest index on ties.
        let pivot = ones(&p)
            .chain(ones(&x))
            .max_by(|&a, &b| {
                and_count(&p, &self.adj[a])
                    .cmp(&and_count(&p, &self.adj[b]))
                    .then(b.cmp(&a))
            })
            .expect("P is nonempty");
        let candidates: Vec<usize> = ones(&p)
            .filter(|&v| self.adj[pivot][v / 64] >> (v % 64) & 1 == 0)
            .collect();
        for v in candidates {
            r.push(v);
            self.expand(r, and(&p, &self.adj[v]), and(&x, &self.adj[v]), out);
            r.pop();
            clear(&mut p, v);
            set(&mut x, v);
        }
    }
}

/// One maximal family, identified by vertex indices, with its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub size: usize,
    pub diversity: usize,
    /// Sorted 1-subspace degrees over all points of V(n, q).
    pub degree_profile: Vec<usize>,
    pub members: Vec<usize>,
}

impl Fingerprint {
    /// Every 1-subspace of the ambient space has the same degree.
    pub fn is_regular(&self) -> bool {
        self.degree_profile.first() == self.degree_profile.last()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub q: u8,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    #[serde(skip)]
    pub vertices: Vec<Subspace>,
    /// Sorted by size (descending), then by member indices.
    pub families: Vec<Fingerprint>,
    pub max_size: usize,
    pub max_diversity: usize,
}

impl OracleResult {
    pub fn family(&self, i: usize) -> SubspaceFamily {
        let a = Ambient::new(self.n, self.q).expect("validated at search time");
        SubspaceFamily::from_unsorted(
            a,
            self.families[i].members.iter().map(|&v| self.vertices[v].clone()).collect(),
        )
    }

    pub fn maximum_families(&self) -> impl Iterator<Item = (usize, &Fingerprint)> {
        self.families
            .iter()
            .enumerate()
            .take_while(move |(_, f)| f.size == self.max_size)
    }

    /// Re-check every listed family: pairwise t-intersecting, and no vertex
    /// outside it meets all of its members in dimension ≥ t.
    pub fn verify_maximality(&self) -> bool {
        self.families.iter().all(|f| {
            let inside: std::collections::BTreeSet<usize> = f.members.iter().copied().collect();
            let pairwise = f.members.iter().enumerate().all(|(a, &i)| {
                f.members[a + 1..]
                    .iter()
                    .all(|&j| self.vertices[i].meet_dim(&self.vertices[j]) >= self.t)
            });
            let maximal = (0..self.vertices.len()).filter(|v| !inside.contains(v)).all(|v| {
                f.members
                    .iter()
                    .any(|&m| self.vertices[v].meet_dim(&self.vertices[m]) < self.t)
            });
            pairwise && maximal
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// All maximal t-intersecting families of k-subspaces of V(n, q).
///
/// Refuses instances with more than [`ORACLE_VERTEX_CAP`] vertices.
pub fn oracle_maximal_families(q: u8, n: usize, k: usize, t: usize, budget: &Budget) -> Result<OracleResult> {
    let a = Ambient::new(n, q)?;
    if k > n || t == 0 || t > k {
        return Err(Error::pre(format!("oracle needs 1 <= t <= k <= n, got n={n} k={k} t={t}")));
    }
    let count = gaussian(n as i64, k as i64, q as u64);
    if count > BigInt::from(ORACLE_VERTEX_CAP) {
        return Err(Error::BudgetExceeded {
            what: format!("exhaustive oracle on V({n},{q}) with k={k}"),
            needed: count.to_string(),
            cap: ORACLE_VERTEX_CAP,
        });
    }
    let vertices: Vec<Subspace> = enumerate_grassmannian(a, k, budget)?.collect();
    let graph = Graph::new(&vertices, t);
    let v = vertices.len();
    let mut p = vec![0u64; words(v)];
    for i in 0..v {
        set(&mut p, i);
    }
    let mut cliques = Vec::new();
    graph.expand(&mut Vec::new(), p, vec![0u64; words(v)], &mut cliques);

    let mut families: Vec<Fingerprint> = cliques
        .into_iter()
        .map(|mut members| {
            members.sort_unstable();
            let fam = SubspaceFamily::from_unsorted(
                a,
                members.iter().map(|&i| vertices[i].clone()).collect(),
            );
            let degree_profile = fam.point_degree_profile();
            let top = degree_profile.last().copied().unwrap_or(0);
            Fingerprint {
                size: members.len(),
                diversity: members.len() - top,
                degree_profile,
                members,
            }
        })
        .collect();
    families.sort_by(|x, y| y.size.cmp(&x.size).then_with(|| x.members.cmp(&y.members)));
    let max_size = families.first().map_or(0, |f| f.size);
    let max_diversity = families.iter().map(|f| f.diversity).max().unwrap_or(0);
    Ok(OracleResult {
        q,
        n,
        k,
        t,
        vertices,
        families,
        max_size,
        max_diversity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_of_pg4_2() {
        let r = oracle_maximal_families(2, 5, 2, 1, &Budget::default()).unwrap();
        assert_eq!(r.families.len(), 186);
        let big = r.families.iter().filter(|f| f.size == 15).count();
        let small = r.families.iter().filter(|f| f.size == 7).count();
        assert_eq!((big, small), (31, 155));
        assert_eq!(r.max_size, 15);
        assert_eq!(r.max_diversity, 4);
        assert!(r.verify_maximality());
        assert!(r.families.iter().all(|f| !f.is_regular()));
    }

    #[test]
    fn equal_lines_only_at_t_two() {
        let r = oracle_maximal_families(2, 5, 2, 2, &Budget::default()).unwrap();
        assert_eq!(r.families.len(), 155);
        assert_eq!(r.max_size, 1);
    }

    #[test]
    fn output_is_deterministic() {
        let a = oracle_maximal_families(2, 4, 2, 1, &Budget::default()).unwrap();
        let b = oracle_maximal_families(2, 4, 2, 1, &Budget::default()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.max_size, 7);
    }

    #[test]
    fn cap_is_enforced() {
        let e = oracle_maximal_families(2, 6, 3, 1, &Budget::default()).unwrap_err();
        assert!(e.is_budget());
    }
}
