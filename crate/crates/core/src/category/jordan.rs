use std::fmt;

use super::object::{DiffMorphism, DiffObject};
use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, quotient_dim, FieldSpec, Matrix, Subspace};

/// Block sizes of the Jordan form of `eps`, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanType {
    n: usize,
    parts: Vec<usize>,
}

impl JordanType {
    /// Parts may come in any order; each must lie in `1..=n`.
    pub fn new(n: usize, mut parts: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDegree(n));
        }
        if let Some(&bad) = parts.iter().find(|&&a| a == 0 || a > n) {
            return Err(Error::OutOfRange { what: "Jordan part", value: bad, lo: 1, hi: n });
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(JordanType { n, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts equal to `n` (free summands).
    pub fn free_rank(&self) -> usize {
        self.parts.iter().filter(|&&a| a == self.n).count()
    }

    /// The type with every part equal to `n` removed.
    pub fn stable_part(&self) -> JordanType {
        JordanType { n: self.n, parts: self.parts.iter().copied().filter(|&a| a < self.n).collect() }
    }

    pub fn is_free(&self) -> bool {
        self.parts.iter().all(|&a| a == self.n)
    }

    /// The direct sum of lower-shift blocks, in the order of `parts`.
    pub fn canonical_object(&self, field: FieldSpec) -> DiffObject {
        let blocks: Vec<Matrix> = self.parts.iter().map(|&a| shift_matrix(field, a)).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        DiffObject::new(self.n, Matrix::block_diag(field, &refs))
            .expect("block diagonal of shifts is nilpotent")
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// The `a x a` lower shift: `e_j -> e_{j+1}`.
pub(crate) fn shift_matrix(field: FieldSpec, a: usize) -> Matrix {
    Matrix::from_fn(field, a, a, |i, j| if i == j + 1 { field.one() } else { field.zero() })
}

/// `J_a`: a single Jordan block of size `a` in degree `n`.
pub fn jordan_block(field: FieldSpec, a: usize, n: usize) -> Result<DiffObject> {
    if a > n {
        return Err(Error::OutOfRange { what: "block size", value: a, lo: 0, hi: n });
    }
    DiffObject::new(n, shift_matrix(field, a))
}

/// Jordan type from the ranks of the powers of `eps`: the number of blocks
/// of size at least `k` is `rank eps^(k-1) - rank eps^k`.
pub fn jordan_type(x: &DiffObject) -> JordanType {
    let n = x.n();
    let mut ranks = vec![x.dim()];
    let mut pow = Matrix::identity(x.field(), x.dim());
    for _ in 1..=n {
        pow = pow.mul(x.eps());
        ranks.push(pow.rank());
    }
    let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut parts = Vec::new();
    for k in (1..=n).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k, exactly));
    }
    JordanType { n, parts }
}

/// An explicit Jordan basis: `eps = P J P^-1` with `J` the canonical form.
///
/// Columns of `P` come chain by chain, `v, eps v, ..., eps^(a-1) v`, chains
/// sorted by decreasing length.
#[derive(Clone, Debug)]
pub struct JordanBasis {
    pub jordan_type: JordanType,
    pub p: Matrix,
    pub p_inv: Matrix,
    /// Starting column of each chain in `p`.
    pub offsets: Vec<usize>,
}

impl JordanBasis {
    pub fn chains(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.offsets.iter().copied().zip(self.jordan_type.parts.iter().copied())
    }
}

pub fn jordan_basis(x: &DiffObject) -> Result<JordanBasis> {
    let field = x.field();
    let d = x.dim();
    let n = x.n();
    let eps = x.eps();
    let powers = eps.powers(n);
    let kernels: Vec<Subspace> = powers.iter().map(kernel_basis).collect();

    let mut tops: Vec<(usize, Matrix)> = Vec::new();
    for k in (1..=n).rev() {
        if kernels[k].dim() == kernels[k - 1].dim() {
            continue;
        }
        // complement of Ker eps^(k-1) + eps Ker eps^(k+1) inside Ker eps^k
        let mut below = kernels[k - 1].basis().clone();
        if k < n {
            below = below.hstack(&eps.mul(kernels[k + 1].basis()));
        }
        let below = Subspace::span(&below);
        let quo = quotient_dim(&kernels[k], &below)?;
        for j in 0..quo.reps.cols() {
            tops.push((k, quo.reps.select_columns(&[j])));
        }
    }

    let mut columns = Vec::with_capacity(d);
    let mut offsets = Vec::with_capacity(tops.len());
    let mut parts = Vec::with_capacity(tops.len());
    for (len, v) in &tops {
        offsets.push(columns.len());
        parts.push(*len);
        let mut w = v.clone();
        for _ in 0..*len {
            columns.push(w.column(0));
            w = eps.mul(&w);
        }
    }
    if columns.len() != d {
        return Err(Error::Internal(format!("Jordan chains cover {} of {d} dimensions", columns.len())));
    }
    let p = Matrix::from_columns(field, d, &columns);
    let p_inv = p
        .inverse()
        .ok_or_else(|| Error::Internal("Jordan chains are dependent".into()))?;
    let jordan_type = JordanType { n, parts };
    let canon = jordan_type.canonical_object(field);
    if p_inv.mul(eps).mul(&p) != *canon.eps() {
        return Err(Error::Internal("Jordan basis does not conjugate eps to normal form".into()));
    }
    Ok(JordanBasis { jordan_type, p, p_inv, offsets })
}

/// Basis of `Hom(J_X, J_Y)` between the Jordan normal forms of `X` and `Y`,
/// where `J_X = P_X^-1 eps_X P_X`.
///
/// A map from `J_a` to `J_b` is determined by where the top of the chain
/// goes; it can go to `eps^c w` for `c >= max(0, b - a)`, giving `min(a, b)`
/// basis maps per block pair, each a partial identity on a shifted diagonal.
pub(crate) fn canonical_hom_basis(jx: &JordanBasis, jy: &JordanBasis) -> Vec<Matrix> {
    let field = jx.p.field();
    let (dx, dy) = (jx.p.rows(), jy.p.rows());
    let mut out = Vec::new();
    for (ox, a) in jx.chains() {
        for (oy, b) in jy.chains() {
            for c in b.saturating_sub(a)..b {
                let mut m = Matrix::zeros(field, dy, dx);
                for r in 0..a.min(b - c) {
                    m.set(oy + c + r, ox + r, field.one());
                }
                out.push(m);
            }
        }
    }
    out
}

/// Basis of `Hom(X, Y)`: the canonical basis conjugated back to the
/// original coordinates, `P_Y h P_X^-1`.
pub fn hom_space_basis(x: &DiffObject, y: &DiffObject) -> Result<Vec<DiffMorphism>> {
    x.check_compatible(y)?;
    let jx = jordan_basis(x)?;
    let jy = jordan_basis(y)?;
    Ok(canonical_hom_basis(&jx, &jy)
        .into_iter()
        .map(|h| DiffMorphism::unchecked(x, y, jy.p.mul(&h).mul(&jx.p_inv)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{direct_sum, hom_space_basis_dense};

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn types_from_ranks() {
        let f = q();
        let j3 = jordan_block(f, 3, 3).unwrap();
        assert_eq!(jordan_type(&j3).parts(), &[3]);
        let zero4 = DiffObject::new(2, Matrix::zeros(f, 4, 4)).unwrap();
        assert_eq!(jordan_type(&zero4).parts(), &[1, 1, 1, 1]);
        let j2 = jordan_block(f, 2, 4).unwrap();
        let j1 = jordan_block(f, 1, 4).unwrap();
        assert_eq!(jordan_type(&direct_sum(&j2, &j1).unwrap()).parts(), &[2, 1]);
        let j3 = jordan_block(f, 3, 4).unwrap();
        assert_eq!(jordan_type(&direct_sum(&j2, &j3).unwrap()).parts(), &[3, 2]);
    }

    #[test]
    fn basis_conjugates_to_normal_form() {
        let f = FieldSpec::prime(5).unwrap();
        // J2 (+) J1 scrambled by a fixed invertible matrix
        let t = JordanType::new(3, vec![1, 2]).unwrap();
        let canon = t.canonical_object(f);
        let g = Matrix::from_i64_rows(f, &[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 2]]);
        let g_inv = g.inverse().unwrap();
        let x = DiffObject::new(3, g.mul(canon.eps()).mul(&g_inv)).unwrap();
        let jb = jordan_basis(&x).unwrap();
        assert_eq!(jb.jordan_type.parts(), &[2, 1]);
        assert_eq!(jb.offsets, vec![0, 2]);
    }

    #[test]
    fn hom_dims_match_dense() {
        let f = q();
        for n in 2..=4 {
            for a in 1..=n {
                for b in 1..=n {
                    let x = jordan_block(f, a, n).unwrap();
                    let y = jordan_block(f, b, n).unwrap();
                    let fast = hom_space_basis(&x, &y).unwrap();
                    let dense = hom_space_basis_dense(&x, &y).unwrap();
                    assert_eq!(fast.len(), a.min(b));
                    assert_eq!(fast.len(), dense.len());
                }
            }
        }
    }

    #[test]
    fn small_hom_examples() {
        let f = q();
        let j1 = jordan_block(f, 1, 5).unwrap();
        assert_eq!(hom_space_basis(&j1, &j1).unwrap().len(), 1);
        let j2 = jordan_block(f, 2, 2).unwrap();
        assert_eq!(hom_space_basis(&j2, &j2).unwrap().len(), 2);
        let j2 = jordan_block(f, 2, 3).unwrap();
        let j3 = jordan_block(f, 3, 3).unwrap();
        assert_eq!(hom_space_basis(&j2, &j3).unwrap().len(), 2);
    }

    #[test]
    fn part_range_checked() {
        assert!(JordanType::new(3, vec![4]).is_err());
        assert!(JordanType::new(3, vec![0]).is_err());
        assert_eq!(JordanType::new(3, vec![1, 3, 2]).unwrap().parts(), &[3, 2, 1]);
    }
}
