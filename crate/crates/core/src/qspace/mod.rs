//! Subspaces of V(n, q) in reduced row-echelon form.

pub(crate) mod enumerate;
pub(crate) mod packing;
mod quotient;

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::FieldTable;
pub use enumerate::{enumerate_grassmannian, enumerate_subspaces_of, GrassmannianIter};
use packing::{EchelonBasis, Packing};
pub use quotient::QuotientMap;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

pub(crate) type Rows = SmallVec<[u64; 4]>;

/// The vector space V(n, q).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Ambient {
    n: u8,
    q: u8,
}

impl Ambient {
    /// V(n, q) for `0 <= n <= 16`. Dimension 0 only arises as a quotient codomain.
    pub fn new(n: usize, q: u8) -> Result<Self> {
        FieldTable::get(q)?;
        if n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n));
        }
        Ok(Ambient { n: n as u8, q })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn field(&self) -> &'static FieldTable {
        FieldTable::get(self.q).expect("validated at construction")
    }

    pub(crate) fn packing(&self) -> Packing {
        Packing::new(self.n(), self.field())
    }

    pub fn zero(&self) -> Subspace {
        Subspace {
            ambient: *self,
            pivots: 0,
            rows: Rows::new(),
        }
    }

    pub fn full(&self) -> Subspace {
        self.coordinate_span(&(0..self.n()).collect::<Vec<_>>())
    }

    /// Span of the unit vectors at the given (0-based) columns.
    pub fn coordinate_span(&self, cols: &[usize]) -> Subspace {
        let p = self.packing();
        let mut rows: Vec<u64> = cols.iter().map(|&c| p.unit(c)).collect();
        let pivots = p.rref(&mut rows);
        Subspace {
            ambient: *self,
            pivots,
            rows: rows.into_iter().collect(),
        }
    }

    /// Canonical subspace spanned by `rows` (entries are field-element indices).
    pub fn span<R: AsRef<[u8]>>(&self, rows: &[R]) -> Result<Subspace> {
        canonicalize(rows, *self)
    }

    /// Pack one vector, validating length and entries.
    pub(crate) fn pack_row(&self, index: usize, row: &[u8]) -> Result<u64> {
        if row.len() != self.n() {
            return Err(Error::RowLength {
                row: index,
                found: row.len(),
                expected: self.n(),
            });
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= self.q) {
            return Err(Error::EntryOutOfRange {
                row: index,
                value: bad as u64,
                q: self.q,
            });
        }
        Ok(self.packing().pack(row))
    }

    pub(crate) fn from_packed(&self, mut rows: Vec<u64>) -> Subspace {
        let pivots = self.packing().rref(&mut rows);
        Subspace {
            ambient: *self,
            pivots,
            rows: rows.into_iter().collect(),
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({},{})", self.n, self.q)
    }
}

/// Canonical RREF subspace spanned by the given rows; zero rows are dropped.
pub fn canonicalize<R: AsRef<[u8]>>(rows: &[R], ambient: Ambient) -> Result<Subspace> {
    let packed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| ambient.pack_row(i, r.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ambient.from_packed(packed))
}

/// A subspace, stored as its unique reduced row-echelon basis.
///
/// Ordering is by dimension, then pivot set (lexicographic as an increasing
/// tuple), then basis rows read row-major. Within one dimension this is the
/// order in which [`enumerate_grassmannian`] yields subspaces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: Ambient,
    pivots: u16,
    rows: Rows,
}

impl Subspace {
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ambient.n()).filter(|&c| self.pivots >> c & 1 == 1).collect()
    }

    pub fn pivot_mask(&self) -> u16 {
        self.pivots
    }

    pub(crate) fn packed_rows(&self) -> &[u64] {
        &self.rows
    }

    fn pivot_list(&self) -> SmallVec<[u8; 16]> {
        (0..self.ambient.n() as u8)
            .filter(|&c| self.pivots >> c & 1 == 1)
            .collect()
    }

    /// Basis rows as vectors of field-element indices.
    pub fn basis(&self) -> Vec<Vec<u8>> {
        let p = self.ambient.packing();
        self.rows.iter().map(|&r| p.unpack(r)).collect()
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// dim(self ∩ other), via dim A + dim B − dim(A + B).
    ///
    /// Panics if the ambients differ; see [`dim_meet`] for the checked form.
    pub fn meet_dim(&self, other: &Subspace) -> usize {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_zero() {
            return 0;
        }
        let p = self.ambient.packing();
        let piv = big.pivot_list();
        let mut extra = EchelonBasis::new();
        for &v in &small.rows {
            let r = p.reduce(v, &big.rows, &piv);
            if r != 0 {
                extra.insert(&p, r);
            }
        }
        small.dim() - extra.rank()
    }

    /// True iff `other` ⊆ `self`. Panics on ambient mismatch.
    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if other.dim() > self.dim() {
            return false;
        }
        // Pivots of a subspace are a subset of the pivots of any superspace.
        if other.pivots & !self.pivots != 0 {
            return false;
        }
        let p = self.ambient.packing();
        let piv = self.pivot_list();
        other.rows.iter().all(|&v| p.reduce(v, &self.rows, &piv) == 0)
    }

    /// self + other. Panics on ambient mismatch.
    pub fn join(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let rows: Vec<u64> = self.rows.iter().chain(other.rows.iter()).copied().collect();
        self.ambient.from_packed(rows)
    }

    /// self ∩ other. Panics on ambient mismatch.
    ///
    /// Reduces each basis row of `self` against `other`; combinations of those
    /// rows whose residues cancel are exactly the vectors lying in `other`.
    pub fn meet(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let p = self.ambient.packing();
        let k = self.dim();
        if k == 0 || other.is_zero() {
            return self.ambient.zero();
        }
        let coef = Packing::new(k, p.f);
        let piv = other.pivot_list();
        let mut work: Vec<(u64, u64)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &v)| (p.reduce(v, &other.rows, &piv), coef.unit(i)))
            .collect();
        // Gaussian elimination on residues, carrying the combination vectors.
        let mut kernel = Vec::new();
        let mut rank = 0;
        for col in 0..p.n as usize {
            let Some(r) = (rank..work.len()).find(|&r| p.get(work[r].0, col) != 0) else {
                continue;
            };
            work.swap(rank, r);
            let (pr, pc) = work[rank];
            let lead_inv = p.f.inv(p.get(pr, col));
            for i in rank + 1..work.len() {
                let c = p.get(work[i].0, col);
                if c != 0 {
                    let m = p.f.neg(p.f.mul(c, lead_inv));
                    work[i].0 = p.axpy(work[i].0, m, pr);
                    work[i].1 = coef.axpy(work[i].1, m, pc);
                }
            }
            rank += 1;
        }
        for &(res, comb) in &work[rank..] {
            debug_assert_eq!(res, 0);
            let mut v = 0u64;
            for i in 0..k {
                v = p.axpy(v, coef.get(comb, i), self.rows[i]);
            }
            kernel.push(v);
        }
        self.ambient.from_packed(kernel)
    }

    /// Image under the linear map `v ↦ v·m`, where `m` is an n×n matrix.
    pub fn apply_matrix(&self, m: &[Vec<u8>]) -> Result<Subspace> {
        let n = self.ambient.n();
        if m.len() != n {
            return Err(Error::RowLength {
                row: 0,
                found: m.len(),
                expected: n,
            });
        }
        let packed = m
            .iter()
            .enumerate()
            .map(|(i, r)| self.ambient.pack_row(i, r))
            .collect::<Result<Vec<_>>>()?;
        let p = self.ambient.packing();
        let rows = self
            .rows
            .iter()
            .map(|&v| {
                (0..n).fold(0u64, |acc, j| p.axpy(acc, p.get(v, j), packed[j]))
            })
            .collect();
        Ok(self.ambient.from_packed(rows))
    }
}

/// Checked dim(A ∩ B).
pub fn dim_meet(a: &Subspace, b: &Subspace) -> Result<usize> {
    a.same_ambient(b)?;
    Ok(a.meet_dim(b))
}

/// Checked A + B.
pub fn join(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.same_ambient(b)?;
    Ok(a.join(b))
}

/// Checked A ∩ B.
pub fn meet(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.same_ambient(b)?;
    Ok(a.meet(b))
}

/// Checked B ⊆ A.
pub fn contains(a: &Subspace, b: &Subspace) -> Result<bool> {
    a.same_ambient(b)?;
    Ok(a.contains(b))
}

/// Lexicographic order on pivot sets of equal size.
fn pivot_order(a: u16, b: u16) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let lowest = (a ^ b) & (a ^ b).wrapping_neg();
    if a & lowest != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| pivot_order(self.pivots, other.pivots))
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialized as its basis rows.
impl serde::Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis().serialize(s)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digit = |v: &u8| char::from_digit(*v as u32, 10).unwrap_or('?');
        let rows: Vec<String> = self
            .basis()
            .iter()
            .map(|r| r.iter().map(digit).collect())
            .collect();
        write!(f, "<{}>", rows.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, q: u8) -> Ambient {
        Ambient::new(n, q).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let a = v(4, 2);
        let s = a.span(&[[1, 1, 0, 0], [0, 1, 0, 0]]).unwrap();
        assert_eq!(s.basis(), vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(a.span(&[[0, 0, 0, 0]]).unwrap().dim(), 0);
        let t = v(3, 2).span(&[[1, 1, 1], [1, 1, 0]]).unwrap();
        assert_eq!(t.basis(), vec![vec![1, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn canonicalize_rejects_bad_rows() {
        let a = v(3, 3);
        assert!(matches!(
            a.span(&[vec![1, 0]]),
            Err(Error::RowLength { .. })
        ));
        assert!(matches!(
            a.span(&[vec![1, 0, 3]]),
            Err(Error::EntryOutOfRange { .. })
        ));
    }

    #[test]
    fn meet_and_join_on_coordinate_spaces() {
        let a = v(4, 2);
        let x = a.coordinate_span(&[0, 1]);
        let y = a.coordinate_span(&[2, 3]);
        assert_eq!(x.meet_dim(&y), 0);
        assert_eq!(x.join(&y), a.full());
        assert_eq!(x.meet_dim(&x), 2);
        assert!(x.meet(&y).is_zero());
        let z = a.coordinate_span(&[1, 2]);
        assert_eq!(x.meet(&z), a.coordinate_span(&[1]));
        assert!(x.contains(&a.zero()));
        assert!(!a.coordinate_span(&[0]).contains(&a.coordinate_span(&[1])));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = v(3, 2).full();
        let b = v(3, 3).full();
        assert!(matches!(dim_meet(&a, &b), Err(Error::AmbientMismatch)));
        assert!(join(&a, &b).is_err());
        assert!(contains(&a, &b).is_err());
    }

    #[test]
    fn order_puts_lower_pivots_first() {
        let a = v(3, 2);
        let e1 = a.coordinate_span(&[0]);
        let e2 = a.coordinate_span(&[1]);
        let e12 = a.span(&[[1, 1, 0]]).unwrap();
        assert!(e1 < e12);
        assert!(e12 < e2);
        assert!(e2 < a.coordinate_span(&[0, 1]));
    }
}
