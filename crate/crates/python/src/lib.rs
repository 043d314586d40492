//! Python bindings: objects, morphisms and the main homotopy and derived
//! constructions. Matrix entries go in as ints, strings (`"3/4"`) or
//! `fractions.Fraction`, and come out as strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use diffn::category::{self as cat, jordan_type};
use diffn::derived;
use diffn::harness::{run_verify, GenConfig, Selection};
use diffn::homotopy;
use diffn::{Error, FieldSpec, Matrix};

fn err(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_field(s: &str) -> PyResult<FieldSpec> {
    s.parse().map_err(err)
}

fn to_matrix(field: FieldSpec, rows: &Bound<'_, PyAny>) -> PyResult<Matrix> {
    let mut data = Vec::new();
    let mut shape = (0, None);
    for row in rows.try_iter()? {
        let row = row?;
        let mut len = 0;
        for x in row.try_iter()? {
            data.push(field.parse_scalar(&x?.str()?.to_cow()?).map_err(err)?);
            len += 1;
        }
        if *shape.1.get_or_insert(len) != len {
            return Err(PyValueError::new_err("ragged matrix rows"));
        }
        shape.0 += 1;
    }
    Matrix::from_vec(field, shape.0, shape.1.unwrap_or(0), data).map_err(err)
}

/// Empty shapes need explicit sizes.
fn to_matrix_sized(field: FieldSpec, rows: usize, cols: usize, m: &Bound<'_, PyAny>) -> PyResult<Matrix> {
    let m = to_matrix(field, m)?;
    if m.rows() == 0 && rows * cols == 0 {
        return Ok(Matrix::zeros(field, rows, cols));
    }
    if m.shape() != (rows, cols) {
        return Err(PyValueError::new_err(format!("expected a {rows}x{cols} matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

fn from_matrix(m: &Matrix) -> Vec<Vec<String>> {
    let f = m.field();
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| f.format_scalar(x)).collect()).collect()
}

/// An n-th differential object `(X, eps)`.
#[pyclass(name = "DiffObject", module = "diffn", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDiffObject(cat::DiffObject);

#[pymethods]
impl PyDiffObject {
    #[new]
    fn new(field: &str, n: usize, eps: &Bound<'_, PyAny>) -> PyResult<Self> {
        let field = parse_field(field)?;
        let eps = to_matrix(field, eps)?;
        Ok(Self(cat::DiffObject::with_field(field, n, eps).map_err(err)?))
    }

    /// `J_a` in degree `n`.
    #[staticmethod]
    fn jordan_block(field: &str, a: usize, n: usize) -> PyResult<Self> {
        Ok(Self(cat::jordan_block(parse_field(field)?, a, n).map_err(err)?))
    }

    /// `T(k^d)`.
    #[staticmethod]
    fn augment(field: &str, d: usize, n: usize) -> PyResult<Self> {
        Ok(Self(cat::augment(parse_field(field)?, d, n).map_err(err)?))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.0.field().to_string()
    }

    fn eps(&self) -> Vec<Vec<String>> {
        from_matrix(self.0.eps())
    }

    fn jordan_type(&self) -> Vec<usize> {
        jordan_type(&self.0).parts().to_vec()
    }

    fn direct_sum(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(cat::direct_sum(&self.0, &other.0).map_err(err)?))
    }

    fn identity(&self) -> PyDiffMorphism {
        PyDiffMorphism(self.0.identity())
    }

    /// `dim H_(r)`.
    fn homology_dim(&self, r: usize) -> PyResult<usize> {
        Ok(homotopy::homology(&self.0, r).map_err(err)?.dim)
    }

    fn is_acyclic(&self) -> PyResult<bool> {
        homotopy::is_acyclic(&self.0).map_err(err)
    }

    fn is_projective(&self) -> PyResult<bool> {
        Ok(cat::is_projective(&self.0).map_err(err)?.is_some())
    }

    fn shift(&self) -> PyResult<Self> {
        Ok(Self(cat::shift(&self.0).map_err(err)?))
    }

    fn coshift(&self) -> PyResult<Self> {
        Ok(Self(cat::coshift(&self.0).map_err(err)?))
    }

    /// The object with its free summands stripped.
    fn minimal_model(&self) -> PyResult<Self> {
        Ok(Self(derived::minimal_model(&self.0).map_err(err)?.reduced))
    }

    /// `(dim Hom_K(J_i, X), dim H_(i)(X))`.
    fn theta(&self, i: usize) -> PyResult<(usize, usize)> {
        let t = derived::theta_check(&self.0, i).map_err(err)?;
        Ok((t.dim_hom_k, t.dim_h))
    }

    fn __repr__(&self) -> String {
        format!(
            "DiffObject(field={}, n={}, dim={}, jordan={})",
            self.0.field(),
            self.0.n(),
            self.0.dim(),
            jordan_type(&self.0)
        )
    }
}

/// A morphism `f : X -> Y` with `f eps_X = eps_Y f`.
#[pyclass(name = "DiffMorphism", module = "diffn", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDiffMorphism(cat::DiffMorphism);

#[pymethods]
impl PyDiffMorphism {
    #[new]
    fn new(src: &PyDiffObject, dst: &PyDiffObject, matrix: &Bound<'_, PyAny>) -> PyResult<Self> {
        let m = to_matrix_sized(src.0.field(), dst.0.dim(), src.0.dim(), matrix)?;
        Ok(Self(cat::DiffMorphism::new(&src.0, &dst.0, m).map_err(err)?))
    }

    #[getter]
    fn src(&self) -> PyDiffObject {
        PyDiffObject(self.0.src().clone())
    }

    #[getter]
    fn dst(&self) -> PyDiffObject {
        PyDiffObject(self.0.dst().clone())
    }

    fn matrix(&self) -> Vec<Vec<String>> {
        from_matrix(self.0.matrix())
    }

    /// `self . other`.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.compose(&other.0).map_err(err)?))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.sub(&other.0).map_err(err)?))
    }

    /// A witness `s` with `f = sum_k eps_Y^(n-1-k) s eps_X^k`, or `None`.
    fn null_homotopy(&self) -> PyResult<Option<Vec<Vec<String>>>> {
        Ok(homotopy::null_homotopy_witness(&self.0).map_err(err)?.map(|w| from_matrix(&w.s)))
    }

    fn homotopic(&self, other: &Self) -> PyResult<bool> {
        homotopy::homotopic(&self.0, &other.0).map_err(err)
    }

    fn cone(&self) -> PyResult<PyDiffObject> {
        Ok(PyDiffObject(homotopy::cone(&self.0).map_err(err)?.cone().clone()))
    }

    /// The matrix of `H_(r)(f)` in the quotient bases.
    fn homology_map(&self, r: usize) -> PyResult<Vec<Vec<String>>> {
        Ok(from_matrix(&homotopy::homology_map(&self.0, r).map_err(err)?))
    }

    fn is_quasi_iso(&self) -> PyResult<bool> {
        Ok(derived::is_quasi_iso(&self.0).map_err(err)?.is_qiso)
    }

    /// `(g, s)` with `f g - 1 = sum_k eps^(n-1-k) s eps^k`.
    fn homotopy_section(&self) -> PyResult<(PyDiffMorphism, Vec<Vec<String>>)> {
        let sec = derived::homotopy_section(&self.0).map_err(err)?;
        Ok((PyDiffMorphism(sec.g), from_matrix(&sec.witness.s)))
    }

    fn __repr__(&self) -> String {
        format!("DiffMorphism({} -> {})", jordan_type(self.0.src()), jordan_type(self.0.dst()))
    }
}

/// `(dim Hom, dim of the null-homotopic part, dim Hom_K)`.
#[pyfunction]
fn hom_dims(x: &PyDiffObject, y: &PyDiffObject) -> PyResult<(usize, usize, usize)> {
    let h = homotopy::hom_k(&x.0, &y.0).map_err(err)?;
    Ok((h.hom_dim, h.null_dim(), h.dim()))
}

/// Runs the property suite; returns `(failures, report)`.
#[pyfunction]
#[pyo3(signature = (seed=0, field="Q", n=3, max_dim=12, trials=20, only=Vec::new()))]
fn verify(seed: u64, field: &str, n: usize, max_dim: usize, trials: u64, only: Vec<String>) -> PyResult<(usize, String)> {
    let cfg = GenConfig::new(seed, parse_field(field)?, n, max_dim, trials).map_err(err)?;
    let report = run_verify(&cfg, &Selection { only, trial: None }).map_err(err)?;
    Ok((report.failures(), report.body()))
}

#[pymodule]
#[pyo3(name = "diffn")]
fn diffn_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiffObject>()?;
    m.add_class::<PyDiffMorphism>()?;
    m.add_function(wrap_pyfunction!(hom_dims, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
