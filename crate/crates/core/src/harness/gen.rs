//! Random objects, morphisms and sequences.

use super::rng::Rng;
use crate::category::{
    augment, biproduct, direct_sum, direct_sum_morphism, hom_space_basis, DiffMorphism, DiffObject, JordanType,
    ShortExactSeq,
};
use crate::derived::minimal_model;
use crate::error::{Error, Result};
use crate::exactla::{image_basis, quotient_dim, solve_linear, FieldSpec, Matrix, Subspace};

/// Parameters shared by every generator in a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub field: FieldSpec,
    pub n: usize,
    pub max_dim: usize,
    pub trials: u64,
}

impl GenConfig {
    pub fn new(seed: u64, field: FieldSpec, n: usize, max_dim: usize, trials: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDegree(n));
        }
        if max_dim < 1 {
            return Err(Error::OutOfRange { what: "max_dim", value: 0, lo: 1, hi: usize::MAX });
        }
        if trials < 1 {
            return Err(Error::OutOfRange { what: "trials", value: 0, lo: 1, hi: usize::MAX });
        }
        Ok(GenConfig { seed, field, n, max_dim, trials })
    }
}

pub fn random_matrix(rng: &mut Rng, field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| rng.scalar(field))
}

/// A random invertible `d x d` matrix and its inverse.
///
/// Over GF(p) this is uniform over the group, by rejection. Over the
/// rationals it is `P L U` with `P` a random permutation and `L`, `U` unit
/// triangular with entries in `-1..=1`: the determinant is `+-1`, so the
/// inverse is integral too and entries stay small through later
/// eliminations.
pub fn random_invertible(rng: &mut Rng, field: FieldSpec, d: usize) -> (Matrix, Matrix) {
    if field.is_rationals() {
        let mut perm: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            perm.swap(i, rng.range(0, i));
        }
        let one = field.one();
        let l = Matrix::from_fn(field, d, d, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => rng.small_scalar(field),
            std::cmp::Ordering::Equal => one.clone(),
            std::cmp::Ordering::Less => field.zero(),
        });
        let u = Matrix::from_fn(field, d, d, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => rng.small_scalar(field),
            std::cmp::Ordering::Equal => one.clone(),
            std::cmp::Ordering::Greater => field.zero(),
        });
        let g = Matrix::identity(field, d).select_rows(&perm).mul(&l).mul(&u);
        let g_inv = g.inverse().expect("unimodular matrix is invertible");
        return (g, g_inv);
    }
    loop {
        let g = Matrix::from_fn(field, d, d, |_, _| rng.small_scalar(field));
        if let Some(inv) = g.inverse() {
            return (g, inv);
        }
    }
}

/// Parts in `1..=n` summing to at most `max_dim`.
pub fn random_jordan_type(rng: &mut Rng, n: usize, max_dim: usize) -> JordanType {
    let total = rng.range(0, max_dim);
    let mut parts = Vec::new();
    let mut left = total;
    while left > 0 {
        let a = rng.range(1, left.min(n));
        parts.push(a);
        left -= a;
    }
    JordanType::new(n, parts).expect("parts are in range")
}

/// The canonical form of `t` conjugated by a random invertible matrix.
pub fn object_of_type(rng: &mut Rng, field: FieldSpec, t: &JordanType) -> DiffObject {
    let canon = t.canonical_object(field);
    let (g, g_inv) = random_invertible(rng, field, t.dim());
    DiffObject::new(t.n(), g.mul(canon.eps()).mul(&g_inv)).expect("conjugate of a nilpotent")
}

pub fn random_diff_object(rng: &mut Rng, field: FieldSpec, n: usize, max_dim: usize) -> DiffObject {
    let t = random_jordan_type(rng, n, max_dim);
    object_of_type(rng, field, &t)
}

/// A random combination of a basis of `Hom(X, Y)`.
pub fn random_morphism(rng: &mut Rng, x: &DiffObject, y: &DiffObject) -> Result<DiffMorphism> {
    let basis = hom_space_basis(x, y)?;
    Ok(combine(rng, x, y, &basis))
}

pub(crate) fn combine(
    rng: &mut Rng,
    x: &DiffObject,
    y: &DiffObject,
    basis: &[DiffMorphism],
) -> DiffMorphism {
    let field = x.field();
    let mut acc = Matrix::zeros(field, y.dim(), x.dim());
    for h in basis {
        let c = rng.scalar(field);
        if !field.is_zero(&c) {
            acc = acc.add(&h.matrix().scale(&c));
        }
    }
    DiffMorphism::unchecked(x, y, acc)
}

/// A random automorphism of `X`, sampled from `End(X)` until invertible.
pub fn random_automorphism(rng: &mut Rng, x: &DiffObject) -> Result<DiffMorphism> {
    let basis = hom_space_basis(x, x)?;
    for _ in 0..64 {
        let f = combine(rng, x, x, &basis);
        if f.is_iso() {
            return Ok(f);
        }
    }
    Ok(x.identity())
}

/// A linear map that is injective when `rows >= cols`.
fn random_injective(rng: &mut Rng, field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, rows, cols);
        if m.rank() == cols.min(rows) {
            return m;
        }
    }
}

/// `A` generated by `1..=dim B` random vectors (fewer more likely) and
/// closed under `eps`, with the induced quotient `C = B / A`.
pub fn random_invariant_ses(rng: &mut Rng, b: &DiffObject) -> Result<ShortExactSeq> {
    let field = b.field();
    let d = b.dim();
    let mut k = 0;
    if d > 0 {
        k = 1;
        while k < d && rng.chance(1, 2) {
            k += 1;
        }
    }
    let gens = random_matrix(rng, field, d, k);
    let mut span = gens.clone();
    let mut cur = gens;
    for _ in 1..b.n() {
        cur = b.eps().mul(&cur);
        span = span.hstack(&cur);
    }
    let sub = image_basis(&span);
    ses_from_subspace(b, &sub)
}

/// The sequence `A -> B -> B/A` for an `eps`-invariant subspace `A`.
pub fn ses_from_subspace(b: &DiffObject, sub: &Subspace) -> Result<ShortExactSeq> {
    let field = b.field();
    let d = b.dim();
    let internal = |what: &str| Error::Internal(format!("invariant subspace: {what}"));
    let basis = sub.basis().clone();
    let eps_a = solve_linear(&basis, &b.eps().mul(&basis))
        .ok_or_else(|| Error::NotExact("subspace is not eps-invariant".into()))?;
    let reps = quotient_dim(&Subspace::full(field, d), sub)?.reps;
    let frame_inv = basis
        .hstack(&reps)
        .inverse()
        .ok_or_else(|| internal("completion is singular"))?;
    let p = frame_inv.submatrix(sub.dim(), d, 0, d);
    let eps_c = p.mul(b.eps()).mul(&reps);
    let a = DiffObject::new(b.n(), eps_a).map_err(|_| internal("sub not nilpotent"))?;
    let c = DiffObject::new(b.n(), eps_c).map_err(|_| internal("quotient not nilpotent"))?;
    let i = DiffMorphism::build(&a, b, basis, "inclusion")?;
    let p = DiffMorphism::build(b, &c, p, "projection")?;
    ShortExactSeq::new(i, p)
}

/// An idempotent endomorphism of `T(k^d)`: `diag(e0, ..., e0)` conjugated
/// by a random automorphism `sum_m c_m t^m` with `c_0` invertible.
pub fn random_idempotent_on_t(
    rng: &mut Rng,
    field: FieldSpec,
    d: usize,
    n: usize,
) -> Result<DiffMorphism> {
    let (h, h_inv) = random_invertible(rng, field, d);
    let r = rng.range(0, d);
    let proj = Matrix::from_fn(field, d, d, |i, j| {
        if i == j && i < r { field.one() } else { field.zero() }
    });
    let e0 = h.mul(&proj).mul(&h_inv);
    let diag = Matrix::block_diag(field, &vec![&e0; n]);
    let (c0, _) = random_invertible(rng, field, d);
    let coeffs: Vec<Matrix> = (0..n)
        .map(|m| if m == 0 { c0.clone() } else { random_matrix(rng, field, d, d) })
        .collect();
    let g = Matrix::from_blocks(field, &vec![d; n], &vec![d; n], |k, j| {
        (k >= j).then(|| coeffs[k - j].clone())
    });
    let g_inv = g.inverse().ok_or_else(|| Error::Internal("Toeplitz automorphism".into()))?;
    let t = augment(field, d, n)?;
    DiffMorphism::build(&t, &t, g.mul(&diag).mul(&g_inv), "random idempotent")
}

/// A quasi-isomorphism of one of several shapes, pre- and post-composed
/// with random automorphisms.
pub fn random_quasi_iso(
    rng: &mut Rng,
    field: FieldSpec,
    n: usize,
    max_dim: usize,
) -> Result<DiffMorphism> {
    let free = rng.range(0, (max_dim / n).min(2));
    let x = random_diff_object(rng, field, n, max_dim.saturating_sub(free * n));
    let t = augment(field, free, n)?;
    let core = match rng.below(5) {
        0 => biproduct(&x, &t)?.proj[0].clone(),
        1 => biproduct(&x, &t)?.inj[0].clone(),
        2 => minimal_model(&x)?.include,
        3 => minimal_model(&x)?.project,
        _ => {
            // an isomorphism onto a re-scrambled copy, plus any map between free parts
            let (h, h_inv) = random_invertible(rng, field, x.dim());
            let y = DiffObject::new(n, h.mul(x.eps()).mul(&h_inv))?;
            let iso = DiffMorphism::build(&x, &y, h, "conjugation")?;
            let t2 = augment(field, rng.range(0, free), n)?;
            let between = random_morphism(rng, &t, &t2)?;
            direct_sum_morphism(&iso, &between)?
        }
    };
    let a = random_automorphism(rng, core.src())?;
    let b = random_automorphism(rng, core.dst())?;
    b.compose(&core)?.compose(&a)
}

/// Objects of a random type that are free, i.e. acyclic.
pub fn random_free_object(rng: &mut Rng, field: FieldSpec, n: usize, max_dim: usize) -> DiffObject {
    let m = rng.range(0, max_dim / n);
    let t = JordanType::new(n, vec![n; m]).expect("parts equal n");
    object_of_type(rng, field, &t)
}

/// `X (+) T(k^m)` for a small random `m`, keeping the dimension near `max_dim`.
pub fn pad_with_free(rng: &mut Rng, x: &DiffObject) -> Result<DiffObject> {
    let m = rng.range(0, 2);
    direct_sum(x, &augment(x.field(), m, x.n())?)
}

/// A random injective linear map, exposed for the adjunction checks.
pub fn random_linear(rng: &mut Rng, field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    if rng.chance(1, 2) && rows >= cols {
        random_injective(rng, field, rows, cols)
    } else {
        random_matrix(rng, field, rows, cols)
    }
}
