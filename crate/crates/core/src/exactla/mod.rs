//! Exact dense linear algebra over GF(p) and the rationals.
//!
//! Everything above this module reduces to the handful of operations here:
//! row reduction, kernels, images, linear solves and quotients of nested
//! subspaces. All arithmetic is exact, so every result is reproducible bit
//! for bit.

mod field;
mod matrix;
mod rational;

pub use field::{FieldSpec, Scalar};
pub use matrix::Matrix;

use crate::error::{Error, Result};

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref(m: &Matrix) -> Rref {
    let mut reduced = m.clone();
    let pivots = reduced.rref_in_place();
    let rank = pivots.len();
    Rref { reduced, pivots, rank }
}

/// A subspace of `field^ambient_dim`, stored as a full-column-rank basis matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    /// Wraps `basis` after checking its columns are independent.
    pub fn new(basis: Matrix) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::Dependent);
        }
        Ok(Subspace { ambient_dim: basis.rows(), basis })
    }

    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(field, ambient_dim, 0) }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(field, ambient_dim) }
    }

    /// The span of the columns of `m` (which may be dependent).
    pub fn span(m: &Matrix) -> Self {
        image_basis(m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    /// Whether the column vector(s) of `v` lie in this subspace.
    pub fn contains_columns(&self, v: &Matrix) -> bool {
        assert_eq!(v.rows(), self.ambient_dim);
        if v.cols() == 0 {
            return true;
        }
        self.basis.hstack(v).rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.contains_columns(&other.basis)
    }

    /// Coordinates of the columns of `v` in this basis, if they lie in the span.
    pub fn coordinates(&self, v: &Matrix) -> Option<Matrix> {
        solve_linear(&self.basis, v)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        image_basis(&self.basis.hstack(&other.basis))
    }
}

/// Basis of `Ker(m)`, one vector per free column of the reduced form.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let field = m.field();
    let Rref { reduced, pivots, .. } = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut basis = Matrix::zeros(field, n, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, field.one());
        for (row, &pc) in pivots.iter().enumerate() {
            let v = reduced.get(row, fc);
            if !field.is_zero(v) {
                basis.set(pc, k, field.neg(v));
            }
        }
    }
    Subspace { ambient_dim: n, basis }
}

/// Basis of `Im(m)`: the pivot columns of `m` itself.
pub fn image_basis(m: &Matrix) -> Subspace {
    let pivots = rref(m).pivots;
    Subspace { ambient_dim: m.rows(), basis: m.select_columns(&pivots) }
}

/// Some `x` with `a x = b`, or `None` when `b` is not in the column space.
///
/// `b` may have several columns; they are solved simultaneously. The
/// returned solution sets every free variable to zero and is checked by
/// substitution before it is returned.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "solve_linear: row mismatch");
    let field = a.field();
    let n = a.cols();
    let Rref { reduced, pivots, .. } = rref(&a.hstack(b));
    if pivots.last().is_some_and(|&p| p >= n) {
        return None;
    }
    let mut x = Matrix::zeros(field, n, b.cols());
    for (row, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, reduced.get(row, n + j).clone());
        }
    }
    if a.mul(&x) != *b {
        return None;
    }
    Some(x)
}

/// Output of [`quotient_dim`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub dim: usize,
    /// Vectors of `V` (as columns) completing a basis of `W` to one of `V`.
    pub reps: Matrix,
}

/// `dim V/W` together with coset representatives, for `W` inside `V`.
///
/// Representatives are picked greedily from `V`'s own basis: a column is
/// kept when it is independent of `W` and the columns kept so far.
pub fn quotient_dim(v: &Subspace, w: &Subspace) -> Result<Quotient> {
    if v.ambient_dim != w.ambient_dim {
        return Err(Error::Shape(format!(
            "ambient dimensions {} and {}",
            v.ambient_dim, w.ambient_dim
        )));
    }
    if !v.contains(w) {
        return Err(Error::NotContained);
    }
    let stacked = w.basis.hstack(&v.basis);
    let pivots = rref(&stacked).pivots;
    let picked: Vec<usize> = pivots
        .into_iter()
        .filter(|&p| p >= w.dim())
        .map(|p| p - w.dim())
        .collect();
    let reps = v.basis.select_columns(&picked);
    Ok(Quotient { dim: v.dim() - w.dim(), reps })
}
