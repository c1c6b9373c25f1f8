//! Lookup-table arithmetic for the small finite fields GF(q).
//!
//! Elements are indices `0..q`. For prime `q` the index is the residue. For
//! `q = 2^m` the index is the bit pattern of a polynomial over GF(2), so
//! addition is XOR. For `q = 9` the index `a + 3b` stands for `a + b·α`.
//! Extension fields use the Conway polynomials `x²+x+1`, `x³+x+1` and
//! `x²+2x+2`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Field orders with a built-in table.
pub const SUPPORTED_ORDERS: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Full addition/multiplication tables for one field.
#[derive(Debug, Clone)]
pub struct FieldTable {
    q: u8,
    bits: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FieldTable {
    /// Shared table for `q`; built on first use.
    pub fn get(q: u8) -> Result<&'static FieldTable> {
        static TABLES: [OnceLock<FieldTable>; 7] = [
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
        ];
        let slot = SUPPORTED_ORDERS
            .iter()
            .position(|&s| s == q)
            .ok_or(Error::UnsupportedField(q))?;
        Ok(TABLES[slot].get_or_init(|| FieldTable::build(q)))
    }

    fn build(q: u8) -> FieldTable {
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let (s, p) = match q {
                    2 | 3 | 5 | 7 => ((a + b) % n, (a * b) % n),
                    4 => (a ^ b, gf2_poly_mul(a, b, 0b111, 2)),
                    8 => (a ^ b, gf2_poly_mul(a, b, 0b1011, 3)),
                    9 => gf9_ops(a, b),
                    _ => unreachable!("unsupported order {q}"),
                };
                add[a * n + b] = s as u8;
                mul[a * n + b] = p as u8;
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u8;
            }
        }
        let bits = u32::BITS - (q as u32 - 1).leading_zeros();
        FieldTable {
            q,
            bits,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    /// Bits needed to store one element in a packed row.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// True when addition is bitwise XOR on the packed representation.
    pub fn is_char_two(&self) -> bool {
        self.q.is_power_of_two()
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `inv(0)` is reported as 0.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}

fn gf2_poly_mul(a: usize, b: usize, modulus: usize, degree: u32) -> usize {
    let mut acc = 0usize;
    for i in 0..degree {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    for i in (degree..2 * degree).rev() {
        if acc >> i & 1 == 1 {
            acc ^= modulus << (i - degree);
        }
    }
    acc
}

// α² = α + 1 in GF(9) under x² + 2x + 2.
fn gf9_ops(x: usize, y: usize) -> (usize, usize) {
    let (a, b) = (x % 3, x / 3);
    let (c, d) = (y % 3, y / 3);
    let sum = (a + c) % 3 + 3 * ((b + d) % 3);
    let lo = (a * c + b * d) % 3;
    let hi = (a * d + b * c + b * d) % 3;
    (sum, lo + 3 * hi)
}
