//! Dense row-major matrices over a [`FieldSpec`].

use std::fmt;

use super::rational::Rat;

use super::field::{inv_mod, mul_mod, FieldSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Builds a matrix from row-major scalars. Fails on a length mismatch.
    pub fn from_vec(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// Convenience constructor from integer rows; all rows must have equal length.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    /// A matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows));
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn column_vector(field: FieldSpec, v: Vec<Scalar>) -> Self {
        let n = v.len();
        Matrix { field, rows: n, cols: 1, data: v }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Matrix { data: self.data.iter().map(|x| f.neg(x)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let f = self.field;
        Matrix { data: self.data.iter().map(|x| f.mul(c, x)).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Matrix) -> Self {
        self.check_same(other, "add");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        self.check_same(other, "sub");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    fn check_same(&self, other: &Matrix, op: &str) {
        assert_eq!(self.field, other.field, "{op}: field mismatch");
        assert_eq!(self.shape(), other.shape(), "{op}: shape mismatch");
    }

    /// Matrix product. Panics on a field or inner-dimension mismatch.
    pub fn mul(&self, other: &Matrix) -> Self {
        assert_eq!(self.field, other.field, "mul: field mismatch");
        assert_eq!(self.cols, other.rows, "mul: {:?} * {:?}", self.shape(), other.shape());
        let (r, k, c) = (self.rows, self.cols, other.cols);
        match self.field.characteristic() {
            Some(p) => {
                let a: Vec<u64> = self.data.iter().map(FieldSpec::mod_value).collect();
                let b: Vec<u64> = other.data.iter().map(FieldSpec::mod_value).collect();
                let mut acc = vec![0u128; c];
                let mut data = Vec::with_capacity(r * c);
                for i in 0..r {
                    acc.iter_mut().for_each(|x| *x = 0);
                    for t in 0..k {
                        let x = a[i * k + t];
                        if x == 0 {
                            continue;
                        }
                        let row = &b[t * c..(t + 1) * c];
                        // p < 2^32, so each product fits in u64 and the u128
                        // accumulator cannot overflow at any realistic size
                        for (slot, &y) in acc.iter_mut().zip(row) {
                            *slot += (x * y) as u128;
                        }
                    }
                    data.extend(acc.iter().map(|s| FieldSpec::from_mod((s % p as u128) as u64)));
                }
                Matrix { field: self.field, rows: r, cols: c, data }
            }
            None => {
                let mut out = vec![Rat::ZERO; r * c];
                for i in 0..r {
                    for t in 0..k {
                        let x = FieldSpec::rat_value(&self.data[i * k + t]);
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..c {
                            let y = FieldSpec::rat_value(&other.data[t * c + j]);
                            if !y.is_zero() {
                                out[i * c + j] = &out[i * c + j] + &(x * y);
                            }
                        }
                    }
                }
                let data = out.into_iter().map(FieldSpec::from_rat).collect();
                Matrix { field: self.field, rows: r, cols: c, data }
            }
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.field, self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `[self^0, self^1, ..., self^k]`.
    pub fn powers(&self, k: usize) -> Vec<Matrix> {
        let mut out = vec![Self::identity(self.field, self.rows)];
        for i in 0..k {
            let next = out[i].mul(self);
            out.push(next);
        }
        out
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Self::from_fn(self.field, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(field: FieldSpec, blocks: &[&Matrix]) -> Self {
        let r = blocks.iter().map(|b| b.rows).sum();
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Assembles a block matrix. Block `(i, j)` must have `row_sizes[i]` rows
    /// and `col_sizes[j]` columns; `None` blocks are zero.
    pub fn from_blocks(
        field: FieldSpec,
        row_sizes: &[usize],
        col_sizes: &[usize],
        block: impl Fn(usize, usize) -> Option<Matrix>,
    ) -> Self {
        let mut out = Self::zeros(field, row_sizes.iter().sum(), col_sizes.iter().sum());
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = block(bi, bj) {
                    assert_eq!(b.shape(), (rs, cs), "block ({bi},{bj}) has wrong shape");
                    out.set_block(r0, c0, &b);
                }
                c0 += cs;
            }
            r0 += rs;
        }
        out
    }

    /// Column-major flattening, so that `vec(A X B) = (B^T (x) A) vec(X)`.
    pub fn vectorize(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn unvectorize(field: FieldSpec, rows: usize, cols: usize, v: &[Scalar]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(field, rows, cols, |i, j| v[j * rows + i].clone())
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    ///
    /// Pivot choice is the leftmost column with a nonzero entry at or below
    /// the current row, taking the topmost such entry.
    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        match self.field.characteristic() {
            Some(p) => {
                let mut a: Vec<u64> = self.data.iter().map(FieldSpec::mod_value).collect();
                let pivots = eliminate(&ModP(p), &mut a, rows, cols);
                self.data = a.into_iter().map(FieldSpec::from_mod).collect();
                pivots
            }
            None => {
                let mut a: Vec<Rat> =
                    self.data.iter().map(|x| FieldSpec::rat_value(x).clone()).collect();
                let pivots = eliminate(&Rationals, &mut a, rows, cols);
                self.data = a.into_iter().map(FieldSpec::from_rat).collect();
                pivots
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(self.field, n));
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.last().is_some_and(|&p| p != n - 1) {
            return None;
        }
        Some(aug.submatrix(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// Field operations used by the elimination kernel.
trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `*t -= a * b`
    fn sub_mul(&self, t: &mut Self::E, a: &Self::E, b: &Self::E);
}

struct ModP(u64);

impl Arith for ModP {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn sub_mul(&self, t: &mut u64, a: &u64, b: &u64) {
        let p = self.0;
        *t = (*t + p - mul_mod(*a, *b, p)) % p;
    }
}

struct Rationals;

impl Arith for Rationals {
    type E = Rat;
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.recip().expect("pivot is nonzero")
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn sub_mul(&self, t: &mut Rat, a: &Rat, b: &Rat) {
        *t = t.sub_mul(a, b);
    }
}

fn eliminate<A: Arith>(ar: &A, a: &mut [A::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !ar.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = ar.inv(&a[r * cols + c]);
        for j in c..cols {
            if !ar.is_zero(&a[r * cols + j]) {
                a[r * cols + j] = ar.mul(&a[r * cols + j], &inv);
            }
        }
        let pivot_row: Vec<A::E> = a[r * cols + c..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c].clone();
            if ar.is_zero(&factor) {
                continue;
            }
            for (off, pv) in pivot_row.iter().enumerate() {
                if !ar.is_zero(pv) {
                    ar.sub_mul(&mut a[i * cols + c + off], &factor, pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}", self.field, self.rows, self.cols)?;
        write!(f, "{}", self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| self.field.format_scalar(self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field);
        let f = self.field;
        let (r2, c2) = other.shape();
        Matrix::from_fn(f, self.rows * r2, self.cols * c2, |i, j| {
            f.mul(self.get(i / r2, j / c2), other.get(i % r2, j % c2))
        })
    }
}
