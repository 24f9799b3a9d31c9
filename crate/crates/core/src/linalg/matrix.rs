use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ff::{Poly, PrimeField};

/// A square matrix over Z_p, row-major, entries reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixFp {
    field: PrimeField,
    n: usize,
    data: Vec<u64>,
}

impl MatrixFp {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        Self { field, n, data: vec![0; n * n] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.modulus();
        }
        m
    }

    pub fn diagonal(field: PrimeField, diag: &[u64]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(field, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = field.reduce(d);
        }
        m
    }

    /// Builds from rows; every row must have length `rows.len()`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&v| field.reduce(v)));
        }
        Ok(Self { field, n, data })
    }

    pub fn from_signed_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.reduce_signed(v)).collect())
            .collect();
        Self::from_rows(field, &rows)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = self.field.reduce(v);
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field, self.n)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(
                self.field.modulus(),
                other.field.modulus(),
            ));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{0} vs {}x{1}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let (n, f) = (self.n, self.field);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out[idx] = f.add(out[idx], f.mul(a, other.data[k * n + j]));
                }
            }
        }
        Ok(Self { field: f, n, data: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self { field: f, n: self.n, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Self { field: f, n: self.n, data })
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        Self { field: f, n: self.n, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.data[j * self.n + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {}x{1} matrix",
                v.len(),
                self.n
            )));
        }
        let f = self.field;
        Ok((0..self.n)
            .map(|i| {
                (0..self.n).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect())
    }

    /// `self^exp` by square-and-multiply; `self^0 = I`.
    pub fn pow(&self, exp: &BigUint) -> Self {
        let mut acc = Self::identity(self.field, self.n);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).expect("same shape");
            if exp.bit(i) {
                acc = acc.mul(self).expect("same shape");
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    /// Gauss-Jordan inverse.
    pub fn inv(&self) -> Result<Self> {
        let (n, f) = (self.n, self.field);
        let mut a = self.clone();
        let mut inv = Self::identity(f, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != 0).ok_or(Error::SingularMatrix)?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let s = f.inv(a.get(col, col))?;
            a.scale_row(col, s);
            inv.scale_row(col, s);
            for r in 0..n {
                let factor = a.get(r, col);
                if r != col && factor != 0 {
                    a.add_row_multiple(r, col, f.neg(factor));
                    inv.add_row_multiple(r, col, f.neg(factor));
                }
            }
        }
        Ok(inv)
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let (n, f) = (self.n, self.field);
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| a.get(r, col) != 0) else {
                continue;
            };
            a.swap_rows(pivot, rank);
            let s = f.inv(a.get(rank, col)).expect("nonzero pivot");
            a.scale_row(rank, s);
            for r in rank + 1..n {
                let factor = a.get(r, col);
                if factor != 0 {
                    a.add_row_multiple(r, rank, f.neg(factor));
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant by elimination.
    pub fn det(&self) -> u64 {
        let (n, f) = (self.n, self.field);
        let mut a = self.clone();
        let mut det = 1 % f.modulus();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a.get(r, col) != 0) else {
                return 0;
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = f.neg(det);
            }
            let d = a.get(col, col);
            det = f.mul(det, d);
            let s = f.inv(d).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(a.get(r, col), s);
                if factor != 0 {
                    a.add_row_multiple(r, col, f.neg(factor));
                }
            }
        }
        det
    }

    /// Evaluates a polynomial at this matrix by Horner's rule.
    pub fn eval_poly(&self, poly: &Poly) -> Self {
        let mut acc = Self::zero(self.field, self.n);
        let id = Self::identity(self.field, self.n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self).expect("same shape").add(&id.scale(c)).expect("same shape");
        }
        acc
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n {
            self.data.swap(i * self.n + a, i * self.n + b);
        }
    }

    fn scale_row(&mut self, r: usize, s: u64) {
        for j in 0..self.n {
            let idx = r * self.n + j;
            self.data[idx] = self.field.mul(self.data[idx], s);
        }
    }

    /// row[target] += c * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: u64) {
        let f = self.field;
        for j in 0..self.n {
            let v = f.mul(c, self.data[source * self.n + j]);
            let idx = target * self.n + j;
            self.data[idx] = f.add(self.data[idx], v);
        }
    }

    /// col[target] += c * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, c: u64) {
        let f = self.field;
        for i in 0..self.n {
            let v = f.mul(c, self.data[i * self.n + source]);
            let idx = i * self.n + target;
            self.data[idx] = f.add(self.data[idx], v);
        }
    }
}

impl fmt::Display for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(u64::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
