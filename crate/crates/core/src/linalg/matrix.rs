use std::fmt;

use num_bigint::BigInt;

use super::Scalar;
use crate::error::{usage, Result};
use crate::exec::Exec;
use crate::valuation::Val;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(usage!("ragged matrix: rows of unequal length"));
        }
        Ok(Matrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, proto: &T) -> Self {
        let z = proto.zero_like();
        Matrix { rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        let (z, o) = (proto.zero_like(), proto.one_like());
        Self::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn scalar(n: usize, value: &T) -> Self {
        let z = value.zero_like();
        Self::from_fn(n, n, |i, j| if i == j { value.clone() } else { z.clone() })
    }

    pub fn diagonal(values: &[T]) -> Self {
        let z = values[0].zero_like();
        Self::from_fn(values.len(), values.len(), |i, j| if i == j { values[i].clone() } else { z.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| c.mul(a))
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.map(|a| a.mul_int(k))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, Exec::default())
    }

    /// Matrix product; rows are computed independently under `Exec::Parallel`.
    pub fn mul_with(&self, other: &Self, exec: Exec) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        assert!(self.cols > 0, "empty inner dimension");
        let exec = if self.rows * other.cols * self.cols < 512 { Exec::Sequential } else { exec };
        let rows: Vec<Vec<T>> = exec.map_range(0..self.rows, |i| {
            (0..other.cols)
                .map(|j| {
                    let mut acc = self.get(i, 0).mul(other.get(0, j));
                    for k in 1..self.cols {
                        acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                    }
                    acc
                })
                .collect()
        });
        Matrix { rows: self.rows, cols: other.cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).mul(&v[0]);
                for k in 1..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows, &self.data[0]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols).mul(other.get(i % other.rows, j % other.cols))
        })
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square() && self.rows > 0);
        let mut acc = self.get(0, 0).clone();
        for i in 1..self.rows {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Minimal entry valuation, i.e. `-log_p` of the sup norm.
    pub fn min_valuation(&self) -> Val {
        self.data.iter().map(Scalar::val).reduce(Val::min).expect("nonempty matrix")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Submatrix on the given row and column index ranges.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }
}
