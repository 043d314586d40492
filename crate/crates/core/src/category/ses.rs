use super::functor::augment;
use super::object::{DiffMorphism, DiffObject};
use crate::error::{Error, Result};
use crate::exactla::Matrix;

/// `0 -> A -i-> B -p-> C -> 0`, exact on underlying vector spaces.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    i: DiffMorphism,
    p: DiffMorphism,
}

fn exactness_failure(i: &DiffMorphism, p: &DiffMorphism) -> Option<String> {
    if i.dst() != p.src() {
        return Some("maps are not composable".into());
    }
    if !p.matrix().mul(i.matrix()).is_zero() {
        return Some("p . i != 0".into());
    }
    let ri = i.matrix().rank();
    let rp = p.matrix().rank();
    if ri != i.src().dim() {
        return Some("i is not injective".into());
    }
    if rp != p.dst().dim() {
        return Some("p is not surjective".into());
    }
    if ri + rp != i.dst().dim() {
        return Some("not exact in the middle".into());
    }
    None
}

/// Whether `(i, p)` is a short exact sequence.
pub fn check_ses(i: &DiffMorphism, p: &DiffMorphism) -> bool {
    exactness_failure(i, p).is_none()
}

impl ShortExactSeq {
    pub fn new(i: DiffMorphism, p: DiffMorphism) -> Result<Self> {
        if let Some(why) = exactness_failure(&i, &p) {
            return Err(Error::NotExact(why));
        }
        Ok(ShortExactSeq { i, p })
    }

    pub fn i(&self) -> &DiffMorphism {
        &self.i
    }

    pub fn p(&self) -> &DiffMorphism {
        &self.p
    }

    pub fn a(&self) -> &DiffObject {
        self.i.src()
    }

    pub fn b(&self) -> &DiffObject {
        self.i.dst()
    }

    pub fn c(&self) -> &DiffObject {
        self.p.dst()
    }
}

fn internal(e: Error) -> Error {
    if e.is_internal() {
        e
    } else {
        Error::Internal(e.to_string())
    }
}

/// `eps_{X'}` on `X^(n-1)`: first block column `(-eps, -eps^2, ..., -eps^(n-1))`
/// and identities on the block superdiagonal.
fn coshift_eps(x: &DiffObject) -> Matrix {
    let n = x.n();
    let d = x.dim();
    let pows = x.eps_powers();
    let id = Matrix::identity(x.field(), d);
    Matrix::from_blocks(x.field(), &vec![d; n - 1], &vec![d; n - 1], |r, c| {
        if c == 0 {
            Some(pows[r + 1].neg())
        } else if c == r + 1 {
            Some(id.clone())
        } else {
            None
        }
    })
}

/// `eps_{X''}` on `X^(n-1)`: identities on the block superdiagonal and last
/// block row `(-eps^(n-1), ..., -eps)`.
pub(crate) fn shift_eps(x: &DiffObject) -> Matrix {
    let n = x.n();
    let d = x.dim();
    let pows = x.eps_powers();
    let id = Matrix::identity(x.field(), d);
    Matrix::from_blocks(x.field(), &vec![d; n - 1], &vec![d; n - 1], |r, c| {
        let mut blk = if c == r + 1 { Some(id.clone()) } else { None };
        if r == n - 2 {
            let m = pows[n - 1 - c].neg();
            blk = Some(match blk {
                Some(b) => b.add(&m),
                None => m,
            });
        }
        blk
    })
}

/// `X' = Sigma^-1 X`, the kernel of `p'_X : T(X) -> X`.
pub fn coshift(x: &DiffObject) -> Result<DiffObject> {
    DiffObject::new(x.n(), coshift_eps(x)).map_err(internal)
}

/// `X'' = Sigma X`, the cokernel of `i''_X : X -> T(X)`.
pub fn shift(x: &DiffObject) -> Result<DiffObject> {
    DiffObject::new(x.n(), shift_eps(x)).map_err(internal)
}

/// `X' -> T(X) -> X` with `p'_X = (1, eps, ..., eps^(n-1))`.
pub fn ses_proj(x: &DiffObject) -> Result<ShortExactSeq> {
    let n = x.n();
    let d = x.dim();
    let f = x.field();
    let pows = x.eps_powers();
    let xp = coshift(x)?;
    let tx = augment(f, d, n)?;
    let id = Matrix::identity(f, d);
    let i_mat = Matrix::from_blocks(f, &vec![d; n], &vec![d; n - 1], |k, j| {
        if k + j == n - 1 {
            Some(id.clone())
        } else if k + j == n - 2 {
            Some(x.eps().neg())
        } else {
            None
        }
    });
    let p_mat = Matrix::from_blocks(f, &[d], &vec![d; n], |_, k| Some(pows[k].clone()));
    let i = DiffMorphism::build(&xp, &tx, i_mat, "i'")?;
    let p = DiffMorphism::build(&tx, x, p_mat, "p'")?;
    ShortExactSeq::new(i, p).map_err(internal)
}

/// `X -> T(X) -> X''` with `i''_X = (eps^(n-1); ...; eps; 1)`.
pub fn ses_inj(x: &DiffObject) -> Result<ShortExactSeq> {
    let n = x.n();
    let d = x.dim();
    let f = x.field();
    let pows = x.eps_powers();
    let xpp = shift(x)?;
    let tx = augment(f, d, n)?;
    let id = Matrix::identity(f, d);
    let i_mat = Matrix::from_blocks(f, &vec![d; n], &[d], |k, _| Some(pows[n - 1 - k].clone()));
    let p_mat = Matrix::from_blocks(f, &vec![d; n - 1], &vec![d; n], |r, c| {
        if c + r == n - 2 {
            Some(id.clone())
        } else if c + r == n - 1 {
            Some(x.eps().neg())
        } else {
            None
        }
    });
    let i = DiffMorphism::build(x, &tx, i_mat, "i''")?;
    let p = DiffMorphism::build(&tx, &xpp, p_mat, "p''")?;
    ShortExactSeq::new(i, p).map_err(internal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::jordan::{jordan_block, jordan_type};
    use crate::exactla::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn proj_sequence_on_j1() {
        let f = q();
        let j1 = jordan_block(f, 1, 2).unwrap();
        let s = ses_proj(&j1).unwrap();
        assert_eq!(s.i().matrix(), &Matrix::from_i64_rows(f, &[vec![0], vec![1]]));
        assert_eq!(s.p().matrix(), &Matrix::from_i64_rows(f, &[vec![1, 0]]));
        assert!(s.a().eps().is_zero());
    }

    #[test]
    fn inj_sequence_on_j1() {
        let f = q();
        let j1 = jordan_block(f, 1, 2).unwrap();
        let s = ses_inj(&j1).unwrap();
        assert_eq!(s.i().matrix(), &Matrix::from_i64_rows(f, &[vec![0], vec![1]]));
        assert_eq!(s.p().matrix(), &Matrix::from_i64_rows(f, &[vec![1, 0]]));
    }

    #[test]
    fn degenerate_sequences() {
        let f = q();
        let zero = DiffObject::zero(f, 3);
        let s = ses_proj(&zero).unwrap();
        assert_eq!(s.b().dim(), 0);
        let s = ses_inj(&zero).unwrap();
        assert_eq!(s.c().dim(), 0);
    }

    #[test]
    fn j2_in_degree_three() {
        let f = q();
        let j2 = jordan_block(f, 2, 3).unwrap();
        let s = ses_proj(&j2).unwrap();
        assert_eq!(s.a().dim(), 4);
        let s = ses_inj(&j2).unwrap();
        assert_eq!(s.c().dim(), 4);
    }

    #[test]
    fn shift_examples() {
        let f = q();
        let j1 = jordan_block(f, 1, 2).unwrap();
        assert_eq!(shift(&j1).unwrap(), j1);
        assert_eq!(coshift(&j1).unwrap(), j1);
        let j1 = jordan_block(f, 1, 3).unwrap();
        let s = shift(&j1).unwrap();
        assert_eq!(s.eps(), &Matrix::from_i64_rows(f, &[vec![0, 1], vec![0, 0]]));
        assert_eq!(jordan_type(&s).parts(), &[2]);
    }

    #[test]
    fn bad_pairs_rejected() {
        let f = q();
        let x = jordan_block(f, 2, 2).unwrap();
        let zero = DiffObject::zero(f, 2);
        let into = DiffMorphism::zero(&zero, &x).unwrap();
        let out = DiffMorphism::zero(&x, &zero).unwrap();
        assert!(!check_ses(&into, &out));
        assert!(!check_ses(&x.identity(), &DiffMorphism::zero(&x, &x).unwrap()));
        assert!(check_ses(&x.identity(), &out));
    }
}
