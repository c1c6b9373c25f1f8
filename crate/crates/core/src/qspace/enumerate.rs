use super::packing::Packing;
use super::{Ambient, Rows, Subspace};
use crate::budget::Budget;
use crate::error::Result;
use crate::qcalc::gaussian;

/// Raw RREF matrices with `k` rows in `n` columns, in canonical order.
///
/// Pivot sets advance lexicographically; within a pivot set the free entries
/// run as an odometer in row-major order with the last position fastest.
pub(crate) struct RrefOdometer {
    p: Packing,
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    // (row, column) of every free entry, row-major.
    free: Vec<(usize, usize)>,
    values: Vec<u8>,
    rows: Rows,
    done: bool,
}

impl RrefOdometer {
    pub fn new(p: Packing, n: usize, k: usize) -> Self {
        let mut it = RrefOdometer {
            p,
            n,
            k,
            pivots: (0..k).collect(),
            free: Vec::new(),
            values: Vec::new(),
            rows: Rows::new(),
            done: k > n,
        };
        if !it.done {
            it.reset_pivot_set();
        }
        it
    }

    pub fn pivot_mask(&self) -> u16 {
        self.pivots.iter().fold(0, |m, &c| m | 1 << c)
    }

    fn reset_pivot_set(&mut self) {
        self.free.clear();
        for (r, &pc) in self.pivots.iter().enumerate() {
            for c in pc + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((r, c));
                }
            }
        }
        self.values = vec![0; self.free.len()];
        self.rows = self.pivots.iter().map(|&c| self.p.unit(c)).collect();
    }

    fn advance_pivots(&mut self) -> bool {
        let (n, k) = (self.n, self.k);
        let Some(i) = (0..k).rev().find(|&i| self.pivots[i] < n - k + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..k {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }

    fn step(&mut self) {
        let q = self.p.f.q();
        for pos in (0..self.free.len()).rev() {
            let (r, c) = self.free[pos];
            if self.values[pos] + 1 < q {
                self.values[pos] += 1;
                self.rows[r] = self.p.set(self.rows[r], c, self.values[pos]);
                return;
            }
            self.values[pos] = 0;
            self.rows[r] = self.p.set(self.rows[r], c, 0);
        }
        if self.advance_pivots() {
            self.reset_pivot_set();
        } else {
            self.done = true;
        }
    }

    /// Current matrix and its pivot mask, then step forward.
    pub fn next_matrix(&mut self) -> Option<(u16, Rows)> {
        if self.done {
            return None;
        }
        let out = (self.pivot_mask(), self.rows.clone());
        self.step();
        Some(out)
    }
}

/// Iterator over all k-subspaces of an ambient space in canonical order.
pub struct GrassmannianIter {
    ambient: Ambient,
    inner: RrefOdometer,
}

impl Iterator for GrassmannianIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let (pivots, rows) = self.inner.next_matrix()?;
        Some(Subspace {
            ambient: self.ambient,
            pivots,
            rows,
        })
    }
}

/// Every k-subspace of `ambient`, each exactly once, in canonical order.
///
/// Fails up front when the count gaussian(n, k) exceeds the enumeration cap.
pub fn enumerate_grassmannian(
    ambient: Ambient,
    k: usize,
    budget: &Budget,
) -> Result<GrassmannianIter> {
    let count = gaussian(ambient.n() as i64, k as i64, ambient.q() as u64);
    budget.admit(&format!("Grassmannian of {k}-subspaces of {ambient}"), &count)?;
    Ok(GrassmannianIter {
        ambient,
        inner: RrefOdometer::new(ambient.packing(), ambient.n(), k),
    })
}

/// All j-subspaces of `s`, in ambient coordinates and canonical order.
///
/// Empty when `j > dim s`.
pub fn enumerate_subspaces_of(s: &Subspace, j: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for_each_subspace_of(s, j, |x| out.push(x));
    out.sort_unstable();
    out
}

/// Visit the j-subspaces of `s` in an unspecified order.
pub(crate) fn for_each_subspace_of(s: &Subspace, j: usize, mut visit: impl FnMut(Subspace)) {
    let d = s.dim();
    if j > d {
        return;
    }
    if j == d {
        visit(s.clone());
        return;
    }
    let ambient = s.ambient();
    let p = ambient.packing();
    let coef = Packing::new(d, p.f);
    let basis = s.packed_rows();
    let mut it = RrefOdometer::new(coef, d, j);
    while let Some((_, rows)) = it.next_matrix() {
        let image: Vec<u64> = rows
            .iter()
            .map(|&c| {
                if p.binary() {
                    (0..d)
                        .filter(|&i| coef.get(c, i) != 0)
                        .fold(0, |acc, i| acc ^ basis[i])
                } else {
                    (0..d).fold(0, |acc, i| p.axpy(acc, coef.get(c, i), basis[i]))
                }
            })
            .collect();
        visit(ambient.from_packed(image));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_small_cases() {
        let b = Budget::default();
        let a = Ambient::new(4, 2).unwrap();
        assert_eq!(enumerate_grassmannian(a, 2, &b).unwrap().count(), 35);
        let a5 = Ambient::new(5, 2).unwrap();
        assert_eq!(enumerate_grassmannian(a5, 2, &b).unwrap().count(), 155);
        let zero: Vec<_> = enumerate_grassmannian(a5, 0, &b).unwrap().collect();
        assert_eq!(zero, vec![a5.zero()]);
        assert_eq!(enumerate_grassmannian(a5, 6, &b).unwrap().count(), 0);
    }

    #[test]
    fn output_is_sorted_and_already_canonical() {
        let b = Budget::default();
        for q in [2u8, 3, 4] {
            let a = Ambient::new(4, q).unwrap();
            for k in 0..=4 {
                let all: Vec<_> = enumerate_grassmannian(a, k, &b).unwrap().collect();
                assert!(all.windows(2).all(|w| w[0] < w[1]), "q={q} k={k}");
                for s in &all {
                    assert_eq!(&a.span(&s.basis()).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let a = Ambient::new(8, 2).unwrap();
        let tight = Budget::default().with_enumeration_cap(100);
        assert!(matches!(enumerate_grassmannian(a, 4, &tight), Err(e) if e.is_budget()));
    }

    #[test]
    fn subspaces_of_small_spaces() {
        let a = Ambient::new(5, 2).unwrap();
        let s = a.coordinate_span(&[0, 2, 4]);
        let lines = enumerate_subspaces_of(&s, 2);
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(|l| s.contains(l) && l.dim() == 2));
        assert_eq!(enumerate_subspaces_of(&s, 3), vec![s.clone()]);
        let a3 = Ambient::new(4, 3).unwrap();
        let plane = a3.span(&[[1, 2, 0, 1], [0, 1, 1, 1]]).unwrap();
        assert_eq!(enumerate_subspaces_of(&plane, 1).len(), 4);
        assert!(enumerate_subspaces_of(&plane, 3).is_empty());
    }
}
