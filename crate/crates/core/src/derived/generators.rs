use crate::category::{jordan_block, jordan_type, DiffObject};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Matrix};
use crate::homotopy::{hom_k, homology, homotopic, is_acyclic};

/// `T^i(k) = J_i`, the `i x i` lower shift, for `1 <= i <= n - 1`.
pub fn compact_generator(field: FieldSpec, n: usize, i: usize) -> Result<DiffObject> {
    if n < 2 {
        return Err(Error::BadDegree(n));
    }
    if i == 0 || i >= n {
        return Err(Error::OutOfRange { what: "i", value: i, lo: 1, hi: n - 1 });
    }
    jordan_block(field, i, n)
}

/// `dim Hom_K(J_i, J_j) = min(i, j) - max(i + j - n, 0)`.
pub fn generator_hom_dim(i: usize, j: usize, n: usize) -> usize {
    i.min(j) - (i + j).saturating_sub(n)
}

/// `theta : Hom_K(J_i, X) -> H_(i)(X)`, `f |-> f e_1`.
#[derive(Clone, Debug)]
pub struct ThetaCheck {
    pub i: usize,
    pub dim_hom_k: usize,
    pub dim_h: usize,
    /// Column `k` holds the homology class of `theta` of the `k`-th basis
    /// class of `Hom_K(J_i, X)`.
    pub matrix: Matrix,
    pub bijective: bool,
}

pub fn theta_check(x: &DiffObject, i: usize) -> Result<ThetaCheck> {
    let g = compact_generator(x.field(), x.n(), i)?;
    let hk = hom_k(&g, x)?;
    let h = homology(x, i)?;
    let top = Matrix::identity(x.field(), i).select_columns(&[0]);
    let image = |m: &Matrix| m.mul(&top);
    // null-homotopic maps must go to the zero class
    for nb in &hk.null_basis {
        if !h.is_zero_class(&image(nb.matrix()))? {
            return Err(Error::Internal("theta does not vanish on null-homotopic maps".into()));
        }
    }
    let cols: Vec<Matrix> = hk.reps.iter().map(|r| image(r.matrix())).collect();
    let images = cols
        .iter()
        .fold(Matrix::zeros(x.field(), x.dim(), 0), |acc, c| acc.hstack(c));
    let matrix = h.class_coords(&images)?;
    let bijective = hk.dim() == h.dim && matrix.rank() == h.dim;
    Ok(ThetaCheck { i, dim_hom_k: hk.dim(), dim_h: h.dim, matrix, bijective })
}

/// `dim Hom_D(X, Y)`, equal to `dim Hom_K(X, Y)` because every object is
/// K-projective over a field.
pub fn derived_hom_dim(x: &DiffObject, y: &DiffObject) -> Result<usize> {
    Ok(hom_k(x, y)?.dim())
}

/// Four independent ways of deciding `X = 0` in the derived category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroVerdict {
    pub is_zero: bool,
    pub generators_vanish: bool,
    pub acyclic: bool,
    pub free: bool,
    pub identity_null: bool,
}

pub fn zero_detection(x: &DiffObject) -> Result<ZeroVerdict> {
    let mut generators_vanish = true;
    for i in 1..x.n() {
        let t = theta_check(x, i)?;
        if t.dim_hom_k != 0 {
            generators_vanish = false;
        }
    }
    let acyclic = is_acyclic(x)?;
    let free = jordan_type(x).is_free();
    let zero = crate::category::DiffMorphism::zero(x, x)?;
    let identity_null = homotopic(&x.identity(), &zero)?;
    let v = ZeroVerdict { is_zero: acyclic, generators_vanish, acyclic, free, identity_null };
    if !(generators_vanish == acyclic && acyclic == free && free == identity_null) {
        return Err(Error::Internal(format!("zero-object criteria disagree: {v:?}")));
    }
    Ok(v)
}
