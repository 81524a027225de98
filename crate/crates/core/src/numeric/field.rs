//! Exact arithmetic modulo a fixed prime, used as a generic-rank oracle.

use crate::error::{Error, Result};

/// `2^31 - 1`.
pub const FIELD_PRIME: u64 = 2_147_483_647;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row-major residues; every entry must lie in `[0, p)`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| x >= FIELD_PRIME) {
            return Err(Error::InvalidInput(format!(
                "residue {bad} is not reduced modulo {FIELD_PRIME}"
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < FIELD_PRIME);
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = (out.data[idx] + a * rhs.get(k, j)) % FIELD_PRIME;
                }
            }
        }
        Ok(out)
    }

    /// Stacks `rhs` below `self`.
    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Self {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// `col{C, CA, ..., CA^{n-1}}` with `self = A`.
    pub fn observability(&self, c: &Self) -> Result<Self> {
        let n = self.rows;
        if self.cols != n || c.cols != n {
            return Err(Error::DimensionMismatch(
                "observability needs square A and C with n columns".into(),
            ));
        }
        let mut out = c.clone();
        let mut block = c.clone();
        for _ in 1..n {
            block = block.mul(self)?;
            out = out.vstack(&block)?;
        }
        Ok(out)
    }
}

pub fn inverse_mod(a: u64) -> u64 {
    pow_mod(a, FIELD_PRIME - 2)
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= FIELD_PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % FIELD_PRIME;
        }
        base = base * base % FIELD_PRIME;
        exp >>= 1;
    }
    acc
}

/// Rank over GF(p) by Gaussian elimination.
pub fn prime_field_rank(m: &PrimeFieldMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..cols {
                a.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = inverse_mod(a[rank * cols + col]);
        for j in col..cols {
            a[rank * cols + j] = a[rank * cols + j] * inv % FIELD_PRIME;
        }
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let factor = a[r * cols + col];
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let sub = factor * a[rank * cols + j] % FIELD_PRIME;
                a[r * cols + j] = (a[r * cols + j] + FIELD_PRIME - sub) % FIELD_PRIME;
            }
        }
        rank += 1;
    }
    rank
}
