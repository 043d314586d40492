//! The augmenting functor `T` and its two adjunctions with the forgetful
//! functor `F`.
//!
//! `T(X) = X^n` with the block lower shift, so `T(X)` is `dim X` copies of
//! `J_n`. Block `k` (counting from zero, top to bottom) is sent to block
//! `k + 1`.

use super::object::{DiffMorphism, DiffObject};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Matrix};

fn block_shift(field: FieldSpec, d: usize, n: usize) -> Matrix {
    let id = Matrix::identity(field, d);
    Matrix::from_blocks(field, &vec![d; n], &vec![d; n], |i, j| {
        (i == j + 1).then(|| id.clone())
    })
}

/// `T(k^d)`: dimension `n d`, identity blocks on the block subdiagonal.
pub fn augment(field: FieldSpec, d: usize, n: usize) -> Result<DiffObject> {
    Ok(DiffObject::new(n, block_shift(field, d, n))?.with_augmented(d))
}

/// `T(f) = diag(f, ..., f) : T(k^cols) -> T(k^rows)`.
pub fn augment_morphism(f: &Matrix, n: usize) -> Result<DiffMorphism> {
    let field = f.field();
    let src = augment(field, f.cols(), n)?;
    let dst = augment(field, f.rows(), n)?;
    let blocks: Vec<&Matrix> = vec![f; n];
    DiffMorphism::build(&src, &dst, Matrix::block_diag(field, &blocks), "T(f)")
}

/// Block size of an object of the form `T(k^d)`, recognised either from
/// construction metadata or from `eps` being literally the block shift.
pub(crate) fn block_of(x: &DiffObject) -> Result<usize> {
    if let Some(d) = x.augmented_block() {
        return Ok(d);
    }
    let n = x.n();
    if x.dim() % n == 0 && *x.eps() == block_shift(x.field(), x.dim() / n, n) {
        return Ok(x.dim() / n);
    }
    Err(Error::NotAugmented)
}

/// `phi(f) = (f eps^(n-1); ...; f eps; f) : X -> T(Y)` for a bare linear map
/// `f : F(X) -> Y`.
pub fn adjoint_phi(x: &DiffObject, f: &Matrix) -> Result<DiffMorphism> {
    if f.cols() != x.dim() || f.field() != x.field() {
        return Err(Error::Shape(format!(
            "linear map has {} columns, object has dimension {}",
            f.cols(),
            x.dim()
        )));
    }
    let n = x.n();
    let d = f.rows();
    let ty = augment(x.field(), d, n)?;
    let pows = x.eps_powers();
    let mat = Matrix::from_blocks(x.field(), &vec![d; n], &[x.dim()], |k, _| {
        Some(f.mul(&pows[n - 1 - k]))
    });
    DiffMorphism::build(x, &ty, mat, "adjoint phi")
}

/// `phi^-1(g) = g_n`, the bottom block row.
pub fn adjoint_phi_inv(g: &DiffMorphism) -> Result<Matrix> {
    let d = block_of(g.dst())?;
    let n = g.n();
    Ok(g.matrix().submatrix((n - 1) * d, n * d, 0, g.src().dim()))
}

/// `psi(f) = f_1`, the first block column of `f : T(Y) -> X`.
pub fn adjoint_psi(f: &DiffMorphism) -> Result<Matrix> {
    let d = block_of(f.src())?;
    Ok(f.matrix().submatrix(0, f.dst().dim(), 0, d))
}

/// `psi^-1(h) = (h, eps h, ..., eps^(n-1) h) : T(Y) -> X` for a bare linear
/// map `h : Y -> F(X)`.
pub fn adjoint_psi_inv(x: &DiffObject, h: &Matrix) -> Result<DiffMorphism> {
    if h.rows() != x.dim() || h.field() != x.field() {
        return Err(Error::Shape(format!(
            "linear map has {} rows, object has dimension {}",
            h.rows(),
            x.dim()
        )));
    }
    let n = x.n();
    let d = h.cols();
    let ty = augment(x.field(), d, n)?;
    let pows = x.eps_powers();
    let mat = Matrix::from_blocks(x.field(), &[x.dim()], &vec![d; n], |_, k| Some(pows[k].mul(h)));
    DiffMorphism::build(&ty, x, mat, "adjoint psi inverse")
}
