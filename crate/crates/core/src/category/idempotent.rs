//! Splitting idempotents on `T(X)`.
//!
//! An endomorphism of `T(X)` is block lower Toeplitz, so it can be written
//! as `e = e_0 + a_1 t + ... + a_(n-1) t^(n-1)` with `t` the block shift.
//! When `e` is idempotent, `e_0` is too, and once the coefficients below
//! degree `m` vanish the degree-`m` one satisfies `e_0 a + a e_0 = a`.
//! Conjugating by `1 + t^m (e_0 a - a e_0)` then clears it. Sweeping
//! `m = 1, ..., n-1` leaves `diag(e_0, ..., e_0)`.

use super::functor::block_of;
use super::object::DiffMorphism;
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Matrix};

/// `g e g^-1 = diag(e0, ..., e0)`.
#[derive(Clone, Debug)]
pub struct SplitIdempotent {
    pub g: DiffMorphism,
    pub g_inv: DiffMorphism,
    pub e0: Matrix,
    /// Number of conjugation steps that were not the identity.
    pub steps: usize,
}

/// `sum_m coeffs[m] t^m` as a block matrix.
fn toeplitz(field: FieldSpec, d: usize, coeffs: &[Matrix]) -> Matrix {
    let n = coeffs.len();
    Matrix::from_blocks(field, &vec![d; n], &vec![d; n], |k, j| {
        (k >= j && !coeffs[k - j].is_zero()).then(|| coeffs[k - j].clone())
    })
}

fn coefficients(e: &Matrix, d: usize, n: usize) -> Vec<Matrix> {
    (0..n).map(|m| e.submatrix(m * d, (m + 1) * d, 0, d)).collect()
}

pub fn split_idempotent(e: &DiffMorphism) -> Result<SplitIdempotent> {
    if e.src() != e.dst() {
        return Err(Error::Shape("idempotent must be an endomorphism".into()));
    }
    let d = block_of(e.src())?;
    let n = e.n();
    let field = e.field();
    let em = e.matrix();
    if em.mul(em) != *em {
        return Err(Error::NotIdempotent);
    }
    let tx = e.src();
    let zero = Matrix::zeros(field, d, d);
    let id = Matrix::identity(field, d);

    let mut g = Matrix::identity(field, n * d);
    let mut g_inv = Matrix::identity(field, n * d);
    let mut cur = em.clone();
    let mut steps = 0;
    for m in 1..n {
        let coeffs = coefficients(&cur, d, n);
        let e0 = &coeffs[0];
        let a = &coeffs[m];
        if a.is_zero() {
            continue;
        }
        let c = e0.mul(a).sub(&a.mul(e0));
        let mut fwd = vec![zero.clone(); n];
        fwd[0] = id.clone();
        fwd[m] = c.clone();
        // (1 + c t^m)^-1 = sum_j (-c)^j t^(mj)
        let mut back = vec![zero.clone(); n];
        let mut term = id.clone();
        let neg_c = c.neg();
        for j in 0..n {
            if m * j >= n {
                break;
            }
            back[m * j] = term.clone();
            term = term.mul(&neg_c);
        }
        let gm = toeplitz(field, d, &fwd);
        let gm_inv = toeplitz(field, d, &back);
        cur = gm.mul(&cur).mul(&gm_inv);
        g = gm.mul(&g);
        g_inv = g_inv.mul(&gm_inv);
        steps += 1;
    }

    let e0 = cur.submatrix(0, d, 0, d);
    let blocks: Vec<&Matrix> = vec![&e0; n];
    if cur != Matrix::block_diag(field, &blocks) {
        return Err(Error::Internal("idempotent sweep left off-diagonal blocks".into()));
    }
    if !g.mul(&g_inv).is_identity() {
        return Err(Error::Internal("conjugator inverse is wrong".into()));
    }
    Ok(SplitIdempotent {
        g: DiffMorphism::build(tx, tx, g, "idempotent conjugator")?,
        g_inv: DiffMorphism::build(tx, tx, g_inv, "idempotent conjugator inverse")?,
        e0,
        steps,
    })
}
