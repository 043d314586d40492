use std::collections::HashMap;

use crate::category::{
    adjoint_phi, adjoint_phi_inv, jordan_basis, lift_through, ses_proj, DiffMorphism, DiffObject,
    JordanBasis,
};
use crate::error::{Error, Result};
use crate::exactla::{image_basis, quotient_dim, solve_linear, FieldSpec, Matrix, Subspace};

/// `s` with `f = sum_k eps_Y^(n-1-k) s eps_X^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyWitness {
    pub s: Matrix,
}

/// `sum_(k=0)^(n-1) eps_Y^(n-1-k) s eps_X^k` for an arbitrary linear `s : X -> Y`.
///
/// The result always commutes with the differentials.
pub fn null_operator(x: &DiffObject, y: &DiffObject, s: &Matrix) -> Matrix {
    // Horner in eps_Y: acc <- eps_Y acc + s eps_X^j
    let xp = x.eps_powers();
    let mut acc = s.clone();
    for p in xp.iter().skip(1) {
        acc = y.eps().mul(&acc).add(&s.mul(p));
    }
    acc
}

/// Column-major index of entry `(i, j)` in a `rows x _` matrix.
fn vec_index(rows: usize, i: usize, j: usize) -> usize {
    j * rows + i
}

/// The null operator between single blocks `J_a -> J_b`, as a matrix acting
/// on vectorized `b x a` maps. Column `vec_index(b, p, q)` is the image of `E_pq`.
fn local_null_operator(field: FieldSpec, a: usize, b: usize, n: usize) -> Matrix {
    let mut m = Matrix::zeros(field, a * b, a * b);
    for q in 0..a {
        for p in 0..b {
            let col = vec_index(b, p, q);
            // eps^(n-1-k) E_pq eps^k = E_(p+n-1-k, q-k) when both indices are in range
            for k in 0..=q {
                let row = p + n - 1 - k;
                if row < b {
                    let idx = vec_index(b, row, q - k);
                    let v = field.add(m.get(idx, col), &field.one());
                    m.set(idx, col, v);
                }
            }
        }
    }
    m
}

/// Basis of `Hom(J_a, J_b)`, vectorized: the diagonals `c >= max(0, b - a)`.
fn local_hom_basis(field: FieldSpec, a: usize, b: usize) -> Matrix {
    let cols: Vec<_> = (b.saturating_sub(a)..b)
        .map(|c| {
            let mut v = vec![field.zero(); a * b];
            for r in 0..a.min(b - c) {
                v[vec_index(b, r + c, r)] = field.one();
            }
            v
        })
        .collect();
    Matrix::from_columns(field, a * b, &cols)
}

struct BlockPairs {
    jx: JordanBasis,
    jy: JordanBasis,
}

impl BlockPairs {
    fn new(x: &DiffObject, y: &DiffObject) -> Result<Self> {
        x.check_compatible(y)?;
        Ok(BlockPairs { jx: jordan_basis(x)?, jy: jordan_basis(y)? })
    }

    /// `(ox, a, oy, b)` for every chain of `X` against every chain of `Y`.
    fn pairs(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for (ox, a) in self.jx.chains() {
            for (oy, b) in self.jy.chains() {
                out.push((ox, a, oy, b));
            }
        }
        out
    }

    fn to_local(&self, f: &Matrix) -> Matrix {
        self.jy.p_inv.mul(f).mul(&self.jx.p)
    }

    fn to_global(&self, m: &Matrix) -> Matrix {
        self.jy.p.mul(m).mul(&self.jx.p_inv)
    }

    /// Embeds a vectorized `b x a` block at `(oy, ox)` and conjugates it back.
    fn block_to_global(&self, ox: usize, a: usize, oy: usize, b: usize, v: &[crate::Scalar]) -> Matrix {
        let field = self.jx.p.field();
        let blk = Matrix::unvectorize(field, b, a, v);
        let cols = self.jy.p.submatrix(0, self.jy.p.rows(), oy, oy + b);
        let rows = self.jx.p_inv.submatrix(ox, ox + a, 0, self.jx.p.rows());
        cols.mul(&blk).mul(&rows)
    }
}

/// Solves the witness equation one pair of Jordan blocks at a time.
///
/// In Jordan coordinates the null operator preserves the block structure,
/// so the system splits into independent problems with at most `n^2`
/// unknowns each. The returned witness is checked against `f` exactly.
pub fn null_homotopy_witness(f: &DiffMorphism) -> Result<Option<HomotopyWitness>> {
    let (x, y) = (f.src(), f.dst());
    let field = f.field();
    let n = f.n();
    let bp = BlockPairs::new(x, y)?;
    let local_f = bp.to_local(f.matrix());
    let mut local_s = Matrix::zeros(field, y.dim(), x.dim());
    let mut ops: HashMap<(usize, usize), Matrix> = HashMap::new();
    for (ox, a, oy, b) in bp.pairs() {
        let blk = local_f.submatrix(oy, oy + b, ox, ox + a);
        if blk.is_zero() {
            continue;
        }
        let op = ops.entry((a, b)).or_insert_with(|| local_null_operator(field, a, b, n));
        let rhs = Matrix::column_vector(field, blk.vectorize());
        let Some(sol) = solve_linear(op, &rhs) else {
            return Ok(None);
        };
        local_s.set_block(oy, ox, &Matrix::unvectorize(field, b, a, &sol.column(0)));
    }
    let s = bp.to_global(&local_s);
    if null_operator(x, y, &s) != *f.matrix() {
        return Err(Error::Internal("block-wise null-homotopy witness does not verify".into()));
    }
    Ok(Some(HomotopyWitness { s }))
}

/// The same question solved as one linear system in all `dim X * dim Y`
/// entries of `s`. Much slower; used as a cross-check.
pub fn null_homotopy_witness_dense(f: &DiffMorphism) -> Result<Option<HomotopyWitness>> {
    let (x, y) = (f.src(), f.dst());
    let field = f.field();
    let (dx, dy) = (x.dim(), y.dim());
    let mut cols = Vec::with_capacity(dx * dy);
    for q in 0..dx {
        for p in 0..dy {
            let mut e = Matrix::zeros(field, dy, dx);
            e.set(p, q, field.one());
            cols.push(null_operator(x, y, &e).vectorize());
        }
    }
    let system = Matrix::from_columns(field, dx * dy, &cols);
    let rhs = Matrix::column_vector(field, f.matrix().vectorize());
    Ok(solve_linear(&system, &rhs)
        .map(|sol| HomotopyWitness { s: Matrix::unvectorize(field, dy, dx, &sol.column(0)) }))
}

/// `f ~ g`.
pub fn homotopic(f: &DiffMorphism, g: &DiffMorphism) -> Result<bool> {
    Ok(null_homotopy_witness(&f.sub(g)?)?.is_some())
}

/// Some `g : X -> T(Y)` with `p'_Y . g = f`, found by solving the lifting
/// problem through `p'_Y : T(Y) -> Y` over a basis of `Hom(X, T(Y))`.
pub fn factor_through_projective(f: &DiffMorphism) -> Result<Option<DiffMorphism>> {
    let seq = ses_proj(f.dst())?;
    lift_through(seq.p(), f)
}

/// The witness `s = g_n` read off a factorization `f = p'_Y g`.
pub fn witness_from_factorization(g: &DiffMorphism) -> Result<HomotopyWitness> {
    Ok(HomotopyWitness { s: adjoint_phi_inv(g)? })
}

/// The factorization `g = (s eps^(n-1); ...; s)` built from a witness.
pub fn factorization_from_witness(x: &DiffObject, w: &HomotopyWitness) -> Result<DiffMorphism> {
    adjoint_phi(x, &w.s)
}

struct PairData {
    ox: usize,
    a: usize,
    oy: usize,
    b: usize,
    /// `[null basis | representatives]`, vectorized local maps.
    frame: Matrix,
    null_dim: usize,
}

/// `Hom_K(X, Y)` with explicit bases.
pub struct HomK {
    pub src: DiffObject,
    pub dst: DiffObject,
    pub hom_dim: usize,
    pub null_basis: Vec<DiffMorphism>,
    /// Morphisms whose classes form a basis of `Hom_K(X, Y)`.
    pub reps: Vec<DiffMorphism>,
    bp: BlockPairs,
    pairs: Vec<PairData>,
}

impl HomK {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn null_dim(&self) -> usize {
        self.null_basis.len()
    }

    /// Coordinates of the class of `f` in the basis given by `reps`.
    pub fn class_of(&self, f: &DiffMorphism) -> Result<Matrix> {
        if *f.src() != self.src || *f.dst() != self.dst {
            return Err(Error::Shape("morphism does not belong to this Hom space".into()));
        }
        let field = self.src.field();
        let local = self.bp.to_local(f.matrix());
        let mut out = Vec::with_capacity(self.dim());
        for pd in &self.pairs {
            let blk = local.submatrix(pd.oy, pd.oy + pd.b, pd.ox, pd.ox + pd.a);
            let rhs = Matrix::column_vector(field, blk.vectorize());
            let coords = solve_linear(&pd.frame, &rhs)
                .ok_or_else(|| Error::Internal("block is not a local morphism".into()))?;
            for k in pd.null_dim..pd.frame.cols() {
                out.push(coords.get(k, 0).clone());
            }
        }
        Ok(Matrix::column_vector(field, out))
    }
}

/// `Hom(X, Y)` modulo null-homotopic maps, computed block pair by block pair.
pub fn hom_k(x: &DiffObject, y: &DiffObject) -> Result<HomK> {
    let bp = BlockPairs::new(x, y)?;
    let field = x.field();
    let n = x.n();
    let mut pairs = Vec::new();
    let mut null_basis = Vec::new();
    let mut reps = Vec::new();
    let mut hom_dim = 0;
    let mut cache: HashMap<(usize, usize), (Matrix, usize)> = HashMap::new();
    for (ox, a, oy, b) in bp.pairs() {
        let (frame, null_dim) = cache
            .entry((a, b))
            .or_insert_with(|| {
                let hom = Subspace::span(&local_hom_basis(field, a, b));
                let null = image_basis(&local_null_operator(field, a, b, n));
                let quo = quotient_dim(&hom, &null).expect("null-homotopic maps are morphisms");
                (null.basis().hstack(&quo.reps), null.dim())
            })
            .clone();
        hom_dim += a.min(b);
        for k in 0..frame.cols() {
            let m = bp.block_to_global(ox, a, oy, b, &frame.column(k));
            let mor = DiffMorphism::unchecked(x, y, m);
            if k < null_dim {
                null_basis.push(mor);
            } else {
                reps.push(mor);
            }
        }
        pairs.push(PairData { ox, a, oy, b, frame, null_dim });
    }
    Ok(HomK { src: x.clone(), dst: y.clone(), hom_dim, null_basis, reps, bp, pairs })
}
