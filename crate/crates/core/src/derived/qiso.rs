use crate::category::{canonical_hom_basis, jordan_basis, DiffMorphism};
use crate::error::{Error, Result};
use crate::exactla::{solve_linear, Matrix};
use super::minimal::minimal_model;
use crate::homotopy::{
    cone, homology_map, is_acyclic, null_homotopy_witness, null_operator, HomotopyWitness,
};

/// Both characterizations of a quasi-isomorphism, computed independently.
#[derive(Clone, Debug)]
pub struct QisoVerdict {
    pub is_qiso: bool,
    /// `(r, H_(r)(f), invertible)` for `r = 1, ..., n-1`.
    pub per_r: Vec<(usize, Matrix, bool)>,
    pub cone_acyclic: bool,
}

/// Decides whether `f` induces isomorphisms on every `H_(r)`, and checks
/// the answer against acyclicity of `Cone(f)`.
pub fn is_quasi_iso(f: &DiffMorphism) -> Result<QisoVerdict> {
    let mut per_r = Vec::new();
    for r in 1..f.n() {
        let h = homology_map(f, r)?;
        let inv = h.is_invertible();
        per_r.push((r, h, inv));
    }
    let all = per_r.iter().all(|(_, _, inv)| *inv);
    let cone_acyclic = is_acyclic(cone(f)?.cone())?;
    if all != cone_acyclic {
        return Err(Error::Internal(format!(
            "homology maps say {all}, cone acyclicity says {cone_acyclic}"
        )));
    }
    Ok(QisoVerdict { is_qiso: all, per_r, cone_acyclic })
}

/// `g : Y -> X` with `f g ~ 1_Y`, and the witness for `f g - 1_Y`.
#[derive(Clone, Debug)]
pub struct HomotopySection {
    pub g: DiffMorphism,
    pub witness: HomotopyWitness,
}

/// Solves `f g - 1_Y = sum_k eps_Y^(n-1-k) s eps_Y^k` jointly for the
/// coefficients of `g` in a basis of `Hom(Y, X)` and the entries of `s`.
///
/// The system is set up in Jordan coordinates, `g = P_X g' P_Y^-1` and
/// `s = P_Y s' P_Y^-1`, where it reads `F g' - 1 = L_J(s')` with
/// `F = P_Y^-1 f P_X` and `L_J` the null operator of the normal form of `Y`.
pub fn homotopy_section(f: &DiffMorphism) -> Result<HomotopySection> {
    if !is_quasi_iso(f)?.is_qiso {
        return Err(Error::NotQuasiIso);
    }
    let (x, y) = (f.src(), f.dst());
    let field = f.field();
    let dy = y.dim();
    let (jx, jy) = (jordan_basis(x)?, jordan_basis(y)?);
    let jnf = jy.jordan_type.canonical_object(field);
    let big_f = jy.p_inv.mul(f.matrix()).mul(&jx.p);
    let basis = canonical_hom_basis(&jy, &jx);
    let mut cols: Vec<_> = basis.iter().map(|h| big_f.mul(h).vectorize()).collect();
    for q in 0..dy {
        for p in 0..dy {
            let mut e = Matrix::zeros(field, dy, dy);
            e.set(p, q, field.one());
            cols.push(null_operator(&jnf, &jnf, &e).neg().vectorize());
        }
    }
    let system = Matrix::from_columns(field, dy * dy, &cols);
    let rhs = Matrix::column_vector(field, Matrix::identity(field, dy).vectorize());
    let sol = solve_linear(&system, &rhs)
        .ok_or_else(|| Error::Internal("no homotopy section for a quasi-isomorphism".into()))?;
    let mut g = Matrix::zeros(field, x.dim(), dy);
    for (k, h) in basis.iter().enumerate() {
        let c = sol.get(k, 0);
        if !field.is_zero(c) {
            g = g.add(&h.scale(c));
        }
    }
    let s_vec: Vec<_> = (basis.len()..sol.rows()).map(|k| sol.get(k, 0).clone()).collect();
    let s = jy.p.mul(&Matrix::unvectorize(field, dy, dy, &s_vec)).mul(&jy.p_inv);
    let g = DiffMorphism::build(y, x, jx.p.mul(&g).mul(&jy.p_inv), "homotopy section")?;
    let diff = f.matrix().mul(g.matrix()).sub(&Matrix::identity(field, dy));
    if null_operator(y, y, &s) != diff {
        return Err(Error::Internal("homotopy section witness does not verify".into()));
    }
    Ok(HomotopySection { g, witness: HomotopyWitness { s } })
}

/// A homotopy section built without a joint solve: `f` is inverted on
/// minimal models.
///
/// The induced map between the reduced parts is an isomorphism in the
/// homotopy category between modules without free summands, hence an
/// honest isomorphism; `g` is its inverse pushed through the inclusion and
/// projection of the minimal models.
pub fn homotopy_section_minimal(f: &DiffMorphism) -> Result<HomotopySection> {
    if !is_quasi_iso(f)?.is_qiso {
        return Err(Error::NotQuasiIso);
    }
    let (x, y) = (f.src(), f.dst());
    let mx = minimal_model(x)?;
    let my = minimal_model(y)?;
    let reduced = my.project.compose(f)?.compose(&mx.include)?;
    let inv = reduced
        .inverse()
        .ok_or_else(|| Error::Internal("reduced map of a quasi-isomorphism is singular".into()))?;
    let g = mx.include.compose(&inv)?.compose(&my.project)?;
    let diff = f.compose(&g)?.sub(&y.identity())?;
    let witness = null_homotopy_witness(&diff)?
        .ok_or_else(|| Error::Internal("f g is not homotopic to 1".into()))?;
    Ok(HomotopySection { g, witness })
}
