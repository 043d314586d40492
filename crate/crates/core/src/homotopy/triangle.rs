use crate::category::{shift, DiffMorphism, DiffObject};
use crate::error::{Error, Result};
use crate::exactla::Matrix;

/// The standard triangle `X -f-> Y -u-> Cone(f) -v-> Sigma X`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub f: DiffMorphism,
    pub u: DiffMorphism,
    pub v: DiffMorphism,
}

impl Triangle {
    pub fn cone(&self) -> &DiffObject {
        self.u.dst()
    }
}

/// `Sigma f = diag(f, ..., f)` with `n - 1` blocks. The same matrix is the
/// action on the loop objects `X'`.
pub fn shift_morphism(f: &DiffMorphism) -> Result<DiffMorphism> {
    let src = shift(f.src())?;
    let dst = shift(f.dst())?;
    let blocks = vec![f.matrix(); f.n() - 1];
    DiffMorphism::build(&src, &dst, Matrix::block_diag(f.field(), &blocks), "Sigma f")
}

/// `Cone(f) = Y (+) X^(n-1)`: `eps_Y` and `f` in the first block row, the
/// differential of `Sigma X` below.
pub fn cone(f: &DiffMorphism) -> Result<Triangle> {
    let (x, y) = (f.src(), f.dst());
    let field = f.field();
    let n = f.n();
    let (dx, dy) = (x.dim(), y.dim());
    let sx = shift(x)?;
    let mut eps = Matrix::block_diag(field, &[y.eps(), sx.eps()]);
    eps.set_block(0, dy, f.matrix());
    let c = DiffObject::new(n, eps)
        .map_err(|e| Error::Internal(format!("cone differential: {e}")))?;
    let rest = (n - 1) * dx;
    let u = Matrix::identity(field, dy).vstack(&Matrix::zeros(field, rest, dy));
    let v = Matrix::zeros(field, rest, dy).hstack(&Matrix::identity(field, rest));
    Ok(Triangle {
        f: f.clone(),
        u: DiffMorphism::build(y, &c, u, "cone u")?,
        v: DiffMorphism::build(&c, &sx, v, "cone v")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{direct_sum, jordan_block, jordan_type};
    use crate::exactla::FieldSpec;
    use crate::homotopy::{homotopic, is_acyclic};

    #[test]
    fn cone_examples() {
        let f = FieldSpec::rationals();
        let j1 = jordan_block(f, 1, 2).unwrap();
        let t = cone(&j1.identity()).unwrap();
        assert_eq!(t.cone().eps(), &Matrix::from_i64_rows(f, &[vec![0, 1], vec![0, 0]]));
        assert!(is_acyclic(t.cone()).unwrap());
        assert_eq!(jordan_type(t.cone()).parts(), &[2]);

        let x = jordan_block(f, 2, 3).unwrap();
        let y = jordan_block(f, 1, 3).unwrap();
        let z = DiffMorphism::zero(&x, &y).unwrap();
        let t = cone(&z).unwrap();
        assert_eq!(*t.cone(), direct_sum(&y, &shift(&x).unwrap()).unwrap());
        assert!(t.v.compose(&t.u).unwrap().is_zero());
    }

    #[test]
    fn composites_vanish_in_k() {
        let f = FieldSpec::prime(3).unwrap();
        let x = jordan_block(f, 2, 3).unwrap();
        let y = jordan_block(f, 3, 3).unwrap();
        let m = DiffMorphism::new(&x, &y, Matrix::from_i64_rows(f, &[vec![0, 0], vec![1, 0], vec![0, 1]]))
            .unwrap();
        let t = cone(&m).unwrap();
        let uf = t.u.compose(&m).unwrap();
        assert!(homotopic(&uf, &DiffMorphism::zero(&x, t.cone()).unwrap()).unwrap());
        let sf = shift_morphism(&m).unwrap();
        let sv = sf.compose(&t.v).unwrap();
        assert!(homotopic(&sv, &DiffMorphism::zero(t.cone(), sf.dst()).unwrap()).unwrap());
    }
}
