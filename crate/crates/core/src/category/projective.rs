use super::functor::augment;
use super::jordan::{canonical_hom_basis, jordan_basis};
use super::object::{DiffMorphism, DiffObject};
use crate::error::{Error, Result};
use crate::exactla::{solve_linear, Matrix};

/// Isomorphism `X -> T(k^(dim X / n))` when every Jordan block of `X` has
/// size `n`, otherwise `None`.
///
/// Over a field every `Q` is projective, so `X` is projective (equivalently
/// injective) exactly when it is free over `k[t]/(t^n)`.
pub fn is_projective(x: &DiffObject) -> Result<Option<DiffMorphism>> {
    let n = x.n();
    let jb = jordan_basis(x)?;
    if !jb.jordan_type.is_free() {
        return Ok(None);
    }
    let m = jb.jordan_type.parts().len();
    // column k*m + j of T(k^m) is eps^k applied to the j-th chain top
    let order: Vec<usize> = (0..n).flat_map(|k| (0..m).map(move |j| j * n + k)).collect();
    let q = jb.p.select_columns(&order);
    let q_inv = q
        .inverse()
        .ok_or_else(|| Error::Internal("permuted Jordan basis is singular".into()))?;
    let t = augment(x.field(), m, n)?;
    Ok(Some(DiffMorphism::build(x, &t, q_inv, "projective witness")?))
}

pub type ProjectiveWitness = Option<DiffMorphism>;

/// Solves `sum_k c_k apply(basis_k) = target` for the coefficients and
/// returns `sum_k c_k basis_k`, or `None` when there is no solution.
pub(crate) fn solve_combination(
    basis: &[Matrix],
    apply: impl Fn(&Matrix) -> Matrix,
    target: &Matrix,
) -> Option<Matrix> {
    let field = target.field();
    let columns: Vec<_> = basis.iter().map(|h| apply(h).vectorize()).collect();
    let rows = target.rows() * target.cols();
    let system = Matrix::from_columns(field, rows, &columns);
    let rhs = Matrix::column_vector(field, target.vectorize());
    let c = solve_linear(&system, &rhs)?;
    let (r, k) = basis.first().map_or((0, 0), |h| h.shape());
    let mut acc = Matrix::zeros(field, r, k);
    for (k, h) in basis.iter().enumerate() {
        let ck = c.get(k, 0);
        if !field.is_zero(ck) {
            acc = acc.add(&h.scale(ck));
        }
    }
    Some(acc)
}

/// Some `h : X -> B` with `p . h = f`, where `p : B -> C` and `f : X -> C`.
///
/// Solved in Jordan coordinates, `h = P_B h' P_X^-1` with `h'` in the
/// canonical basis, so the system reads `(p P_B) h' = f P_X`.
pub fn lift_through(p: &DiffMorphism, f: &DiffMorphism) -> Result<Option<DiffMorphism>> {
    if p.dst() != f.dst() {
        return Err(Error::Shape("lift: targets differ".into()));
    }
    let (x, b) = (f.src(), p.src());
    x.check_compatible(b)?;
    let (jx, jb) = (jordan_basis(x)?, jordan_basis(b)?);
    let basis = canonical_hom_basis(&jx, &jb);
    if basis.is_empty() {
        return Ok(f.is_zero().then(|| DiffMorphism::unchecked(x, b, Matrix::zeros(x.field(), b.dim(), x.dim()))));
    }
    let pp = p.matrix().mul(&jb.p);
    let target = f.matrix().mul(&jx.p);
    Ok(solve_combination(&basis, |h| pp.mul(h), &target)
        .map(|h| DiffMorphism::unchecked(x, b, jb.p.mul(&h).mul(&jx.p_inv))))
}

/// Some `h : B -> Y` with `h . i = f`, where `i : A -> B` and `f : A -> Y`.
///
/// In Jordan coordinates: `h' (P_B^-1 i) = P_Y^-1 f`.
pub fn extend_along(i: &DiffMorphism, f: &DiffMorphism) -> Result<Option<DiffMorphism>> {
    if i.src() != f.src() {
        return Err(Error::Shape("extension: sources differ".into()));
    }
    let (b, y) = (i.dst(), f.dst());
    b.check_compatible(y)?;
    let (jb, jy) = (jordan_basis(b)?, jordan_basis(y)?);
    let basis = canonical_hom_basis(&jb, &jy);
    if basis.is_empty() {
        return Ok(f.is_zero().then(|| DiffMorphism::unchecked(b, y, Matrix::zeros(b.field(), y.dim(), b.dim()))));
    }
    let ii = jb.p_inv.mul(i.matrix());
    let target = jy.p_inv.mul(f.matrix());
    Ok(solve_combination(&basis, |h| h.mul(&ii), &target)
        .map(|h| DiffMorphism::unchecked(b, y, jy.p.mul(&h).mul(&jb.p_inv))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::jordan::{jordan_block, JordanType};
    use crate::category::ses::{ses_inj, ses_proj};
    use crate::exactla::FieldSpec;

    #[test]
    fn examples() {
        let f = FieldSpec::rationals();
        let t = augment(f, 2, 2).unwrap();
        let w = is_projective(&t).unwrap().unwrap();
        assert!(w.is_iso());
        assert!(is_projective(&jordan_block(f, 1, 2).unwrap()).unwrap().is_none());
        assert!(is_projective(&DiffObject::zero(f, 3)).unwrap().is_some());
    }

    #[test]
    fn scrambled_free_object() {
        let f = FieldSpec::prime(7).unwrap();
        let canon = JordanType::new(2, vec![2, 2]).unwrap().canonical_object(f);
        let g = Matrix::from_i64_rows(
            f,
            &[vec![1, 2, 0, 1], vec![0, 1, 3, 0], vec![4, 0, 1, 2], vec![0, 0, 0, 1]],
        );
        let x = DiffObject::new(2, g.mul(canon.eps()).mul(&g.inverse().unwrap())).unwrap();
        let w = is_projective(&x).unwrap().unwrap();
        assert_eq!(w.dst().augmented_block(), Some(2));
    }

    #[test]
    fn identity_lifts_iff_projective() {
        let f = FieldSpec::rationals();
        for (a, n) in [(1, 2), (2, 3), (3, 3)] {
            let x = jordan_block(f, a, n).unwrap();
            let s = ses_proj(&x).unwrap();
            let lift = lift_through(s.p(), &x.identity()).unwrap();
            assert_eq!(lift.is_some(), a == n);
            let s = ses_inj(&x).unwrap();
            let ext = extend_along(s.i(), &x.identity()).unwrap();
            assert_eq!(ext.is_some(), a == n);
        }
    }
}
