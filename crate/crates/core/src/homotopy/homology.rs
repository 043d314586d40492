use crate::category::{DiffMorphism, DiffObject};
use crate::error::{Error, Result};
use crate::exactla::{image_basis, kernel_basis, quotient_dim, solve_linear, Matrix, Subspace};

/// `H_(r)(X) = Ker eps^r / Im eps^(n-r)`, with coset representatives.
#[derive(Clone, Debug)]
pub struct HomologySpace {
    pub object: DiffObject,
    pub r: usize,
    pub ker: Subspace,
    pub im: Subspace,
    /// Columns completing `im` to a basis of `ker`.
    pub quot_reps: Matrix,
    pub dim: usize,
}

pub(crate) fn check_r(n: usize, r: usize) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::OutOfRange { what: "r", value: r, lo: 1, hi: n - 1 });
    }
    Ok(())
}

pub fn homology(x: &DiffObject, r: usize) -> Result<HomologySpace> {
    let n = x.n();
    check_r(n, r)?;
    let ker = kernel_basis(&x.eps_pow(r));
    let im = image_basis(&x.eps_pow(n - r));
    let quo = quotient_dim(&ker, &im)
        .map_err(|e| Error::Internal(format!("Im eps^(n-r) not inside Ker eps^r: {e}")))?;
    Ok(HomologySpace { object: x.clone(), r, ker, im, quot_reps: quo.reps, dim: quo.dim })
}

impl HomologySpace {
    /// Coordinates, in the representative basis, of the classes of the
    /// columns of `v`. Fails unless every column lies in `Ker eps^r`.
    pub fn class_coords(&self, v: &Matrix) -> Result<Matrix> {
        let basis = self.im.basis().hstack(&self.quot_reps);
        let coords = solve_linear(&basis, v)
            .ok_or_else(|| Error::Internal("vector outside Ker eps^r".into()))?;
        Ok(coords.submatrix(self.im.dim(), basis.cols(), 0, v.cols()))
    }

    /// Whether each column of `v` represents the zero class.
    pub fn is_zero_class(&self, v: &Matrix) -> Result<bool> {
        Ok(self.class_coords(v)?.is_zero())
    }
}

/// Matrix of `H_(r)(f)` in the representative bases of source and target.
pub fn homology_map(f: &DiffMorphism, r: usize) -> Result<Matrix> {
    let hx = homology(f.src(), r)?;
    let hy = homology(f.dst(), r)?;
    homology_map_between(f, &hx, &hy)
}

pub(crate) fn homology_map_between(
    f: &DiffMorphism,
    hx: &HomologySpace,
    hy: &HomologySpace,
) -> Result<Matrix> {
    let m = f.matrix();
    if !hy.ker.contains_columns(&m.mul(hx.ker.basis())) {
        return Err(Error::Internal("f does not preserve Ker eps^r".into()));
    }
    if !hy.im.contains_columns(&m.mul(hx.im.basis())) {
        return Err(Error::Internal("f does not preserve Im eps^(n-r)".into()));
    }
    hy.class_coords(&m.mul(&hx.quot_reps))
}

/// All `H_(r)` vanish.
pub fn is_acyclic(x: &DiffObject) -> Result<bool> {
    for r in 1..x.n() {
        if homology(x, r)?.dim != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
