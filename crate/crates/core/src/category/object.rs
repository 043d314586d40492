use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, FieldSpec, Matrix, Scalar};

/// An n-th differential object: a finite-dimensional space with an
/// endomorphism `eps` satisfying `eps^n = 0`.
///
/// Objects built by [`augment`](super::augment) remember their block size
/// so the adjunction maps can read off individual blocks. Equality ignores
/// that metadata.
#[derive(Clone)]
pub struct DiffObject {
    n: usize,
    eps: Arc<Matrix>,
    augmented: Option<usize>,
}

impl DiffObject {
    /// Validates `eps^n = 0` and returns the object.
    pub fn new(n: usize, eps: Matrix) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDegree(n));
        }
        if !eps.is_square() {
            return Err(Error::NotSquare { rows: eps.rows(), cols: eps.cols() });
        }
        if !eps.pow(n).is_zero() {
            return Err(Error::NilpotencyViolated { n });
        }
        Ok(DiffObject { n, eps: Arc::new(eps), augmented: None })
    }

    /// `new` with the field spelled out, for call sites that build `eps`
    /// from a field-agnostic description.
    pub fn with_field(field: FieldSpec, n: usize, eps: Matrix) -> Result<Self> {
        if eps.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), eps.field().to_string()));
        }
        Self::new(n, eps)
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        DiffObject { n, eps: Arc::new(Matrix::zeros(field, 0, 0)), augmented: Some(0) }
    }

    pub(crate) fn with_augmented(mut self, block: usize) -> Self {
        self.augmented = Some(block);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.eps.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.eps.field()
    }

    pub fn eps(&self) -> &Matrix {
        &self.eps
    }

    /// `eps^k`.
    pub fn eps_pow(&self, k: usize) -> Matrix {
        self.eps.pow(k)
    }

    /// `[eps^0, ..., eps^(n-1)]`.
    pub fn eps_powers(&self) -> Vec<Matrix> {
        self.eps.powers(self.n - 1)
    }

    /// Block size `d` when this object was built as `T(k^d)`.
    pub fn augmented_block(&self) -> Option<usize> {
        self.augmented
    }

    pub fn identity(&self) -> DiffMorphism {
        DiffMorphism {
            src: self.clone(),
            dst: self.clone(),
            mat: Matrix::identity(self.field(), self.dim()),
        }
    }

    /// Fails unless both objects share field and nilpotency degree.
    pub fn check_compatible(&self, other: &DiffObject) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()));
        }
        if self.n != other.n {
            return Err(Error::DegreeMismatch(self.n, other.n));
        }
        Ok(())
    }
}

impl PartialEq for DiffObject {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && (Arc::ptr_eq(&self.eps, &other.eps) || self.eps == other.eps)
    }
}

impl Eq for DiffObject {}

impl fmt::Debug for DiffObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffObject(n={}, dim={}, {}", self.n, self.dim(), self.field())?;
        if let Some(b) = self.augmented {
            write!(f, ", T(k^{b})")?;
        }
        write!(f, ")\n{}", self.eps)
    }
}

/// A linear map `src -> dst` commuting with the differentials.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffMorphism {
    src: DiffObject,
    dst: DiffObject,
    mat: Matrix,
}

impl DiffMorphism {
    /// Checks shape, field, degree and `mat * eps_src = eps_dst * mat`.
    pub fn new(src: &DiffObject, dst: &DiffObject, mat: Matrix) -> Result<Self> {
        src.check_compatible(dst)?;
        if mat.field() != src.field() {
            return Err(Error::FieldMismatch(src.field().to_string(), mat.field().to_string()));
        }
        if mat.shape() != (dst.dim(), src.dim()) {
            return Err(Error::Shape(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                dst.dim(),
                src.dim()
            )));
        }
        if mat.mul(src.eps()) != dst.eps().mul(&mat) {
            return Err(Error::NotCommuting);
        }
        Ok(DiffMorphism { src: src.clone(), dst: dst.clone(), mat })
    }

    /// For maps this crate constructs itself; a failed check is a bug.
    pub(crate) fn build(src: &DiffObject, dst: &DiffObject, mat: Matrix, what: &str) -> Result<Self> {
        Self::new(src, dst, mat).map_err(|e| Error::Internal(format!("{what}: {e}")))
    }

    /// Skips the commutation check, for maps that commute by construction
    /// (conjugates of Jordan-coordinate maps, linear combinations of
    /// morphisms). Those constructions are cross-checked in tests.
    pub(crate) fn unchecked(src: &DiffObject, dst: &DiffObject, mat: Matrix) -> Self {
        DiffMorphism { src: src.clone(), dst: dst.clone(), mat }
    }

    pub fn zero(src: &DiffObject, dst: &DiffObject) -> Result<Self> {
        src.check_compatible(dst)?;
        Ok(DiffMorphism {
            src: src.clone(),
            dst: dst.clone(),
            mat: Matrix::zeros(src.field(), dst.dim(), src.dim()),
        })
    }

    pub fn src(&self) -> &DiffObject {
        &self.src
    }

    pub fn dst(&self) -> &DiffObject {
        &self.dst
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn field(&self) -> FieldSpec {
        self.src.field()
    }

    pub fn n(&self) -> usize {
        self.src.n()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &DiffMorphism) -> Result<DiffMorphism> {
        if other.dst != self.src {
            return Err(Error::Shape("composition of non-composable morphisms".into()));
        }
        Ok(DiffMorphism {
            src: other.src.clone(),
            dst: self.dst.clone(),
            mat: self.mat.mul(&other.mat),
        })
    }

    fn check_parallel(&self, other: &DiffMorphism) -> Result<()> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Shape("morphisms do not share endpoints".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffMorphism) -> Result<DiffMorphism> {
        self.check_parallel(other)?;
        Ok(DiffMorphism { mat: self.mat.add(&other.mat), ..self.clone() })
    }

    pub fn sub(&self, other: &DiffMorphism) -> Result<DiffMorphism> {
        self.check_parallel(other)?;
        Ok(DiffMorphism { mat: self.mat.sub(&other.mat), ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> DiffMorphism {
        DiffMorphism { mat: self.mat.scale(c), ..self.clone() }
    }

    pub fn neg(&self) -> DiffMorphism {
        DiffMorphism { mat: self.mat.neg(), ..self.clone() }
    }

    /// The inverse morphism when the underlying matrix is invertible.
    pub fn inverse(&self) -> Option<DiffMorphism> {
        let inv = self.mat.inverse()?;
        // the inverse of a commuting isomorphism commutes automatically
        Some(DiffMorphism { src: self.dst.clone(), dst: self.src.clone(), mat: inv })
    }

    pub fn is_iso(&self) -> bool {
        self.mat.is_invertible()
    }
}

impl fmt::Debug for DiffMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DiffMorphism({} -> {}, n={})\n{}",
            self.src.dim(),
            self.dst.dim(),
            self.n(),
            self.mat
        )
    }
}

/// `X (+) Y` with its canonical injections and projections.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub object: DiffObject,
    pub inj: [DiffMorphism; 2],
    pub proj: [DiffMorphism; 2],
}

pub fn direct_sum(x: &DiffObject, y: &DiffObject) -> Result<DiffObject> {
    x.check_compatible(y)?;
    let eps = Matrix::block_diag(x.field(), &[x.eps(), y.eps()]);
    let mut out = DiffObject { n: x.n, eps: Arc::new(eps), augmented: None };
    if let (Some(a), Some(b)) = (x.augmented, y.augmented) {
        if a == 0 {
            out.augmented = Some(b);
        } else if b == 0 {
            out.augmented = Some(a);
        }
    }
    Ok(out)
}

/// Direct sum of several objects; the empty sum is the zero object.
pub fn direct_sum_all(field: FieldSpec, n: usize, parts: &[DiffObject]) -> Result<DiffObject> {
    let mut acc = DiffObject::zero(field, n);
    for p in parts {
        acc = direct_sum(&acc, p)?;
    }
    Ok(acc)
}

pub fn biproduct(x: &DiffObject, y: &DiffObject) -> Result<Biproduct> {
    let object = direct_sum(x, y)?;
    let f = x.field();
    let (dx, dy) = (x.dim(), y.dim());
    let i1 = Matrix::identity(f, dx).vstack(&Matrix::zeros(f, dy, dx));
    let i2 = Matrix::zeros(f, dx, dy).vstack(&Matrix::identity(f, dy));
    let p1 = i1.transpose();
    let p2 = i2.transpose();
    Ok(Biproduct {
        inj: [
            DiffMorphism::build(x, &object, i1, "biproduct injection")?,
            DiffMorphism::build(y, &object, i2, "biproduct injection")?,
        ],
        proj: [
            DiffMorphism::build(&object, x, p1, "biproduct projection")?,
            DiffMorphism::build(&object, y, p2, "biproduct projection")?,
        ],
        object,
    })
}

/// `f (+) g : X (+) X' -> Y (+) Y'`.
pub fn direct_sum_morphism(f: &DiffMorphism, g: &DiffMorphism) -> Result<DiffMorphism> {
    let src = direct_sum(f.src(), g.src())?;
    let dst = direct_sum(f.dst(), g.dst())?;
    let mat = Matrix::block_diag(f.field(), &[f.matrix(), g.matrix()]);
    DiffMorphism::build(&src, &dst, mat, "direct sum of morphisms")
}

/// Basis of `Hom(X, Y)` by solving `f eps_X - eps_Y f = 0` directly as a
/// linear system in the `dim X * dim Y` entries of `f`.
///
/// Cost grows like `(dim X * dim Y)^3`; [`hom_space_basis`](super::hom_space_basis)
/// is the fast route and this one serves as its cross-check.
pub fn hom_space_basis_dense(x: &DiffObject, y: &DiffObject) -> Result<Vec<DiffMorphism>> {
    x.check_compatible(y)?;
    let f = x.field();
    // vec(F eps_X) = (eps_X^T (x) I) vec F,  vec(eps_Y F) = (I (x) eps_Y) vec F
    let system = x
        .eps()
        .transpose()
        .kron(&Matrix::identity(f, y.dim()))
        .sub(&Matrix::identity(f, x.dim()).kron(y.eps()));
    let ker = kernel_basis(&system);
    (0..ker.dim())
        .map(|k| {
            let mat = Matrix::unvectorize(f, y.dim(), x.dim(), &ker.basis().column(k));
            DiffMorphism::build(x, y, mat, "dense hom basis")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    pub(crate) fn shift(field: FieldSpec, k: usize) -> Matrix {
        Matrix::from_fn(field, k, k, |i, j| if i == j + 1 { field.one() } else { field.zero() })
    }

    #[test]
    fn construction_checks() {
        let j2 = DiffObject::new(2, shift(q(), 2)).unwrap();
        assert_eq!(j2.dim(), 2);
        assert!(matches!(
            DiffObject::new(2, Matrix::identity(q(), 1)),
            Err(Error::NilpotencyViolated { n: 2 })
        ));
        let gf2 = FieldSpec::prime(2).unwrap();
        assert!(DiffObject::new(3, Matrix::zeros(gf2, 2, 2)).is_ok());
        assert!(matches!(
            DiffObject::new(2, Matrix::zeros(q(), 2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(DiffObject::new(1, Matrix::zeros(q(), 1, 1)), Err(Error::BadDegree(1))));
    }

    #[test]
    fn morphism_checks() {
        let j2 = DiffObject::new(2, shift(q(), 2)).unwrap();
        let j1 = DiffObject::new(2, Matrix::zeros(q(), 1, 1)).unwrap();
        // projection onto the top of the chain does not commute
        let bad = Matrix::from_i64_rows(q(), &[vec![0, 1]]);
        assert!(matches!(DiffMorphism::new(&j2, &j1, bad), Err(Error::NotCommuting)));
        let good = Matrix::from_i64_rows(q(), &[vec![1, 0]]);
        assert!(DiffMorphism::new(&j2, &j1, good).is_ok());
        let j1_3 = DiffObject::new(3, Matrix::zeros(q(), 1, 1)).unwrap();
        assert!(matches!(
            DiffMorphism::zero(&j1, &j1_3),
            Err(Error::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn biproduct_identities() {
        let j2 = DiffObject::new(3, shift(q(), 2)).unwrap();
        let j3 = DiffObject::new(3, shift(q(), 3)).unwrap();
        let b = biproduct(&j2, &j3).unwrap();
        for k in 0..2 {
            assert!(b.proj[k].compose(&b.inj[k]).unwrap().matrix().is_identity());
        }
        assert!(b.proj[1].compose(&b.inj[0]).unwrap().is_zero());
        let sum = b.inj[0]
            .compose(&b.proj[0])
            .unwrap()
            .add(&b.inj[1].compose(&b.proj[1]).unwrap())
            .unwrap();
        assert!(sum.matrix().is_identity());

        let zero = DiffObject::zero(q(), 3);
        assert_eq!(direct_sum(&j2, &zero).unwrap(), j2);
    }

    #[test]
    fn dense_hom_dimensions() {
        // brute-force counts: scalars on J1; span{1, eps} on J2; two maps J2 -> J3
        let j1 = DiffObject::new(4, Matrix::zeros(q(), 1, 1)).unwrap();
        assert_eq!(hom_space_basis_dense(&j1, &j1).unwrap().len(), 1);
        let j2 = DiffObject::new(2, shift(q(), 2)).unwrap();
        assert_eq!(hom_space_basis_dense(&j2, &j2).unwrap().len(), 2);
        let j2_3 = DiffObject::new(3, shift(q(), 2)).unwrap();
        let j3 = DiffObject::new(3, shift(q(), 3)).unwrap();
        assert_eq!(hom_space_basis_dense(&j2_3, &j3).unwrap().len(), 2);
    }
}
