use smallvec::SmallVec;

use super::{Ambient, Subspace};
use crate::error::{Error, Result};

/// The projection V → V/X, with V/X identified with the coordinates at the
/// non-pivot columns of X.
///
/// A vector is reduced against X's echelon basis, which zeroes its pivot
/// entries; what remains at the other columns is its image.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    modulus: Subspace,
    codomain: Ambient,
    free_cols: SmallVec<[u8; 16]>,
}

impl QuotientMap {
    pub fn new(x: &Subspace) -> Self {
        let ambient = x.ambient();
        let mask = x.pivot_mask();
        let free_cols: SmallVec<[u8; 16]> = (0..ambient.n() as u8)
            .filter(|&c| mask >> c & 1 == 0)
            .collect();
        let codomain = Ambient::new(free_cols.len(), ambient.q()).expect("smaller than ambient");
        QuotientMap {
            modulus: x.clone(),
            codomain,
            free_cols,
        }
    }

    pub fn modulus(&self) -> &Subspace {
        &self.modulus
    }

    pub fn codomain(&self) -> Ambient {
        self.codomain
    }

    /// Basis of the ambient space: X's rows, then unit vectors at X's
    /// non-pivot columns.
    pub fn lift(&self) -> Vec<Vec<u8>> {
        let ambient = self.modulus.ambient();
        let mut out = self.modulus.basis();
        for &c in &self.free_cols {
            let mut e = vec![0u8; ambient.n()];
            e[c as usize] = 1;
            out.push(e);
        }
        out
    }

    /// S/X for S ⊇ X.
    pub fn push(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.modulus.ambient() {
            return Err(Error::AmbientMismatch);
        }
        if !s.contains(&self.modulus) {
            return Err(Error::pre("push requires the subspace to contain the modulus"));
        }
        Ok(self.push_unchecked(s))
    }

    pub(crate) fn push_unchecked(&self, s: &Subspace) -> Subspace {
        let p = s.ambient().packing();
        let out = self.codomain.packing();
        let piv = self.modulus.pivot_list();
        let rows = s
            .packed_rows()
            .iter()
            .map(|&v| {
                let w = p.reduce(v, self.modulus.packed_rows(), &piv);
                self.free_cols
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| out.set(acc, i, p.get(w, c as usize)))
            })
            .collect();
        self.codomain.from_packed(rows)
    }

    /// The unique S ⊇ X with S/X = T.
    pub fn pull(&self, t: &Subspace) -> Result<Subspace> {
        if t.ambient() != self.codomain {
            return Err(Error::AmbientMismatch);
        }
        let ambient = self.modulus.ambient();
        let p = ambient.packing();
        let src = self.codomain.packing();
        let mut rows: Vec<u64> = self.modulus.packed_rows().to_vec();
        for &v in t.packed_rows() {
            rows.push(
                self.free_cols
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| p.set(acc, c as usize, src.get(v, i))),
            );
        }
        Ok(ambient.from_packed(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::qspace::enumerate_grassmannian;

    #[test]
    fn modulus_and_full_space() {
        let a = Ambient::new(4, 3).unwrap();
        let x = a.span(&[[1, 2, 0, 1]]).unwrap();
        let qm = QuotientMap::new(&x);
        assert_eq!(qm.codomain().n(), 3);
        assert!(qm.push(&x).unwrap().is_zero());
        assert_eq!(qm.push(&a.full()).unwrap(), qm.codomain().full());
        assert!(qm.push(&a.coordinate_span(&[1])).is_err());
    }

    #[test]
    fn lines_through_a_point_biject_onto_codomain_points() {
        let a = Ambient::new(4, 2).unwrap();
        let x = a.coordinate_span(&[0]);
        let qm = QuotientMap::new(&x);
        let mut images: Vec<_> = enumerate_grassmannian(a, 2, &Budget::default())
            .unwrap()
            .filter(|s| s.contains(&x))
            .map(|s| {
                let img = qm.push(&s).unwrap();
                assert_eq!(qm.pull(&img).unwrap(), s);
                img
            })
            .collect();
        images.sort();
        images.dedup();
        let points: Vec<_> = enumerate_grassmannian(qm.codomain(), 1, &Budget::default())
            .unwrap()
            .collect();
        assert_eq!(images, points);
    }

    #[test]
    fn lift_starts_with_the_modulus() {
        let a = Ambient::new(5, 2).unwrap();
        let x = a.span(&[[1, 1, 0, 0, 1], [0, 0, 1, 1, 0]]).unwrap();
        let qm = QuotientMap::new(&x);
        let lift = qm.lift();
        assert_eq!(a.span(&lift[..2]).unwrap(), x);
        assert_eq!(a.span(&lift).unwrap(), a.full());
    }
}
