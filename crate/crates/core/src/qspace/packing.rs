//! Row vectors packed into a single `u64`.
//!
//! Entry `j` occupies `bits` bits at offset `(n - 1 - j) * bits`, so column 0
//! is most significant and numeric order on words equals lexicographic order
//! on entries.

use crate::field::FieldTable;

#[derive(Clone, Copy)]
pub(crate) struct Packing {
    pub n: u32,
    pub bits: u32,
    pub elem_mask: u64,
    pub f: &'static FieldTable,
}

impl Packing {
    pub fn new(n: usize, f: &'static FieldTable) -> Self {
        let bits = f.bits();
        Packing {
            n: n as u32,
            bits,
            elem_mask: (1u64 << bits) - 1,
            f,
        }
    }

    #[inline]
    pub fn binary(&self) -> bool {
        self.bits == 1
    }

    #[inline]
    fn shift(&self, j: usize) -> u32 {
        (self.n - 1 - j as u32) * self.bits
    }

    #[inline]
    pub fn get(&self, row: u64, j: usize) -> u8 {
        ((row >> self.shift(j)) & self.elem_mask) as u8
    }

    #[inline]
    pub fn set(&self, row: u64, j: usize, v: u8) -> u64 {
        let s = self.shift(j);
        (row & !(self.elem_mask << s)) | ((v as u64) << s)
    }

    /// Word with a single 1 in column `j`.
    #[inline]
    pub fn unit(&self, j: usize) -> u64 {
        1u64 << self.shift(j)
    }

    pub fn pack(&self, entries: &[u8]) -> u64 {
        entries
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &v)| acc | ((v as u64) << self.shift(j)))
    }

    pub fn unpack(&self, row: u64) -> Vec<u8> {
        (0..self.n as usize).map(|j| self.get(row, j)).collect()
    }

    /// First column with a nonzero entry.
    #[inline]
    pub fn leading(&self, row: u64) -> Option<usize> {
        if row == 0 {
            return None;
        }
        let unused = 64 - self.n * self.bits;
        Some(((row.leading_zeros() - unused) / self.bits) as usize)
    }

    pub fn scale(&self, row: u64, c: u8) -> u64 {
        match c {
            0 => 0,
            1 => row,
            _ => {
                let mut out = 0;
                for j in 0..self.n as usize {
                    let v = self.get(row, j);
                    if v != 0 {
                        out |= (self.f.mul(v, c) as u64) << self.shift(j);
                    }
                }
                out
            }
        }
    }

    /// `dst + c·src`.
    #[inline]
    pub fn axpy(&self, dst: u64, c: u8, src: u64) -> u64 {
        if c == 0 {
            return dst;
        }
        if self.f.is_char_two() {
            return dst ^ self.scale(src, c);
        }
        let mut out = 0;
        for j in 0..self.n as usize {
            let s = self.get(src, j);
            let d = self.get(dst, j);
            let v = if s == 0 {
                d
            } else {
                self.f.add(d, self.f.mul(c, s))
            };
            out |= (v as u64) << self.shift(j);
        }
        out
    }

    /// Reduce `v` against rows in reduced echelon form with the given pivots.
    #[inline]
    pub fn reduce(&self, mut v: u64, rows: &[u64], pivots: &[u8]) -> u64 {
        if self.binary() {
            for (r, &p) in rows.iter().zip(pivots) {
                if v & self.unit(p as usize) != 0 {
                    v ^= r;
                }
            }
        } else {
            for (r, &p) in rows.iter().zip(pivots) {
                let c = self.get(v, p as usize);
                if c != 0 {
                    v = self.axpy(v, self.f.neg(c), *r);
                }
            }
        }
        v
    }

    /// Reduced row-echelon form in place; returns the pivot mask (bit j = column j).
    pub fn rref(&self, rows: &mut Vec<u64>) -> u16 {
        rows.retain(|&r| r != 0);
        let mut rank = 0;
        let mut mask = 0u16;
        for col in 0..self.n as usize {
            if rank == rows.len() {
                break;
            }
            let Some(r) = (rank..rows.len()).find(|&r| self.get(rows[r], col) != 0) else {
                continue;
            };
            rows.swap(rank, r);
            let lead = self.get(rows[rank], col);
            if lead != 1 {
                rows[rank] = self.scale(rows[rank], self.f.inv(lead));
            }
            let pivot_row = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i == rank {
                    continue;
                }
                let c = self.get(*row, col);
                if c != 0 {
                    *row = if self.binary() {
                        *row ^ pivot_row
                    } else {
                        self.axpy(*row, self.f.neg(c), pivot_row)
                    };
                }
            }
            mask |= 1 << col;
            rank += 1;
        }
        rows.truncate(rank);
        mask
    }
}

/// Incremental echelon basis keyed by leading column, used for rank counting.
pub(crate) struct EchelonBasis {
    by_lead: [u64; 16],
    rank: usize,
}

impl EchelonBasis {
    pub fn new() -> Self {
        EchelonBasis {
            by_lead: [0; 16],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Insert `v`; returns true when it was independent of the basis so far.
    pub fn insert(&mut self, p: &Packing, mut v: u64) -> bool {
        while let Some(lc) = p.leading(v) {
            let b = self.by_lead[lc];
            if b == 0 {
                let lead = p.get(v, lc);
                self.by_lead[lc] = if lead == 1 { v } else { p.scale(v, p.f.inv(lead)) };
                self.rank += 1;
                return true;
            }
            v = if p.binary() {
                v ^ b
            } else {
                p.axpy(v, p.f.neg(p.get(v, lc)), b)
            };
        }
        false
    }
}
