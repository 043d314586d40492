//! Seeded property runner behind `diffn verify`.
//!
//! Every property is a function of one trial's RNG stream, so a failing
//! trial is reproduced by its index alone. The report body lists, per
//! property, the trial count and every failure with the inputs that
//! triggered it written in DFN-1; wall times are kept apart so that the
//! body is byte-identical across runs.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use super::format::{field_tag, morphism_to_string, object_to_string};
use super::gen::{
    combine, object_of_type, pad_with_free, random_diff_object, random_free_object,
    random_idempotent_on_t, random_invariant_ses, random_invertible, random_jordan_type,
    random_matrix, random_morphism, random_quasi_iso, GenConfig,
};
use super::rng::Rng;
use crate::category::{
    adjoint_phi, adjoint_phi_inv, adjoint_psi, adjoint_psi_inv, augment, augment_morphism,
    biproduct, check_ses, coshift, direct_sum, extend_along, hom_space_basis,
    hom_space_basis_dense, is_projective, jordan_basis, jordan_block, jordan_type, lift_through,
    ses_inj, ses_proj, shift, split_idempotent, DiffMorphism, DiffObject, ShortExactSeq,
};
use crate::derived::{
    compact_generator, derived_hom_dim, generator_hom_dim, homotopy_equivalence,
    homotopy_section, homotopy_section_minimal, is_quasi_iso, minimal_model, theta_check,
    zero_detection,
};
use crate::error::Error;
use crate::exactla::{image_basis, kernel_basis, rref, solve_linear, FieldSpec, Matrix};
use crate::homotopy::{
    cone, factor_through_projective, factorization_from_witness, hom_k, homology, homology_map,
    homotopic, is_acyclic, les, null_homotopy_witness, null_homotopy_witness_dense,
    null_operator, shift_morphism, witness_from_factorization,
};

/// Why a trial failed.
#[derive(Clone, Debug)]
pub struct Fail {
    pub reason: String,
    /// The failure came from a library self-check rather than from the
    /// property's own comparison.
    pub internal: bool,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail { internal: e.is_internal(), reason: format!("error: {e}") }
    }
}

type Outcome = Result<(), Fail>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Fail { reason: format!($($msg)+), internal: false });
        }
    };
}

enum Exhibit {
    Object(String, DiffObject),
    Morphism(String, DiffMorphism),
}

/// One trial: its RNG stream, the configuration and the inputs drawn so far.
pub struct Trial<'a> {
    pub rng: Rng,
    pub cfg: &'a GenConfig,
    exhibits: Vec<Exhibit>,
}

impl<'a> Trial<'a> {
    pub fn new(cfg: &'a GenConfig, index: u64) -> Self {
        Trial { rng: Rng::for_trial(cfg.seed, index), cfg, exhibits: Vec::new() }
    }

    fn field(&self) -> FieldSpec {
        self.cfg.field
    }

    fn n(&self) -> usize {
        self.cfg.n
    }

    fn note_object(&mut self, label: &str, x: &DiffObject) {
        self.exhibits.push(Exhibit::Object(label.to_string(), x.clone()));
    }

    fn note_morphism(&mut self, label: &str, f: &DiffMorphism) {
        self.exhibits.push(Exhibit::Morphism(label.to_string(), f.clone()));
    }

    fn object(&mut self, label: &str) -> DiffObject {
        let (field, n, max_dim) = (self.field(), self.n(), self.cfg.max_dim);
        let x = random_diff_object(&mut self.rng, field, n, max_dim);
        self.note_object(label, &x);
        x
    }

    /// Like [`Trial::object`] but free or padded with free summands half
    /// the time, so that the projective branches are exercised.
    fn mixed_object(&mut self, label: &str) -> Result<DiffObject, Fail> {
        let (field, n, max_dim) = (self.field(), self.n(), self.cfg.max_dim);
        let x = match self.rng.below(4) {
            0 => random_free_object(&mut self.rng, field, n, max_dim),
            1 => {
                let small = random_diff_object(&mut self.rng, field, n, max_dim.saturating_sub(n));
                let padded = pad_with_free(&mut self.rng, &small)?;
                scramble(&mut self.rng, &padded)
            }
            _ => random_diff_object(&mut self.rng, field, n, max_dim),
        };
        self.note_object(label, &x);
        Ok(x)
    }

    fn morphism(&mut self, label: &str, x: &DiffObject, y: &DiffObject) -> Result<DiffMorphism, Fail> {
        let f = random_morphism(&mut self.rng, x, y)?;
        self.note_morphism(label, &f);
        Ok(f)
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let field = self.field();
        random_matrix(&mut self.rng, field, rows, cols)
    }

    /// A small dimension for the bare vector spaces fed to `T`.
    fn small_dim(&mut self) -> usize {
        let cap = (self.cfg.max_dim / self.n()).clamp(1, 4);
        self.rng.range(0, cap)
    }

    fn counterexample(&self) -> String {
        let mut out = String::new();
        for e in &self.exhibits {
            match e {
                Exhibit::Object(label, x) => {
                    let _ = writeln!(out, "    {label}:");
                    push_indented(&mut out, &object_to_string(x));
                }
                Exhibit::Morphism(label, f) => {
                    let _ = writeln!(out, "    {label}:");
                    let text = morphism_to_string(f, &format!("{label}.src.dfn"), &format!("{label}.dst.dfn"));
                    push_indented(&mut out, &text);
                    let _ = writeln!(out, "    {label}.src.dfn:");
                    push_indented(&mut out, &object_to_string(f.src()));
                    let _ = writeln!(out, "    {label}.dst.dfn:");
                    push_indented(&mut out, &object_to_string(f.dst()));
                }
            }
        }
        out
    }
}

fn push_indented(out: &mut String, text: &str) {
    for line in text.lines() {
        out.push_str("      ");
        out.push_str(line);
        out.push('\n');
    }
}

/// `x` conjugated by a random invertible matrix.
fn scramble(rng: &mut Rng, x: &DiffObject) -> DiffObject {
    let (g, g_inv) = random_invertible(rng, x.field(), x.dim());
    DiffObject::new(x.n(), g.mul(x.eps()).mul(&g_inv)).expect("conjugate of a nilpotent")
}

/// `x` together with an isomorphism onto a scrambled copy.
fn scrambled_iso(rng: &mut Rng, x: &DiffObject) -> Result<DiffMorphism, Fail> {
    let (g, g_inv) = random_invertible(rng, x.field(), x.dim());
    let y = DiffObject::new(x.n(), g.mul(x.eps()).mul(&g_inv))?;
    Ok(DiffMorphism::new(x, &y, g)?)
}

fn is_null(f: &DiffMorphism) -> Result<bool, Fail> {
    Ok(null_homotopy_witness(f)?.is_some())
}

/// `rank(in) + rank(out) = dim` and `out . in = 0`.
fn exact_joint(dim: usize, incoming: &Matrix, outgoing: &Matrix) -> bool {
    outgoing.mul(incoming).is_zero() && incoming.rank() + outgoing.rank() == dim
}

fn injective(m: &Matrix) -> bool {
    m.rank() == m.cols()
}

fn surjective(m: &Matrix) -> bool {
    m.rank() == m.rows()
}

fn nilpotent(x: &DiffObject) -> bool {
    x.eps_pow(x.n()).is_zero()
}

fn check_sequence(seq: &ShortExactSeq, what: &str) -> Outcome {
    let (i, p) = (seq.i().matrix(), seq.p().matrix());
    ensure!(check_ses(seq.i(), seq.p()), "{what}: check_ses rejects the sequence");
    ensure!(
        nilpotent(seq.a()) && nilpotent(seq.b()) && nilpotent(seq.c()),
        "{what}: some eps^n != 0"
    );
    ensure!(
        injective(i) && surjective(p) && p.mul(i).is_zero() && seq.a().dim() + seq.c().dim() == seq.b().dim(),
        "{what}: not exact by ranks"
    );
    for (m, src, dst) in [(i, seq.a(), seq.b()), (p, seq.b(), seq.c())] {
        ensure!(m.mul(src.eps()) == dst.eps().mul(m), "{what}: a map does not commute with eps");
    }
    Ok(())
}

// ---------------------------------------------------------------- exactla

fn la_kernel(t: &mut Trial) -> Outcome {
    let max = t.cfg.max_dim;
    let (r, c, inner) = (t.rng.range(1, max), t.rng.range(1, max), t.rng.range(0, max));
    let m = t.matrix(r, inner).mul(&t.matrix(inner, c));
    let k = kernel_basis(&m);
    ensure!(m.mul(k.basis()).is_zero(), "M K != 0");
    ensure!(m.rank() + k.dim() == c, "rank {} + nullity {} != {c}", m.rank(), k.dim());
    ensure!(k.basis().rank() == k.dim(), "kernel basis is dependent");
    ensure!(kernel_basis(&m).basis() == k.basis(), "kernel basis is not reproducible");
    let im = image_basis(&m);
    ensure!(im.dim() == m.rank() && im.contains_columns(&m), "image basis is wrong");
    Ok(())
}

fn la_rref(t: &mut Trial) -> Outcome {
    let max = t.cfg.max_dim;
    let (r, c, inner) = (t.rng.range(1, max), t.rng.range(1, max), t.rng.range(0, max));
    let m = t.matrix(r, inner).mul(&t.matrix(inner, c));
    let once = rref(&m);
    let twice = rref(&once.reduced);
    ensure!(twice.reduced == once.reduced, "rref is not idempotent");
    ensure!(twice.pivots == once.pivots && once.rank == m.rank(), "pivots or rank differ");
    for (row, &col) in once.pivots.iter().enumerate() {
        for i in 0..r {
            let v = once.reduced.get(i, col);
            let want = if i == row { t.field().is_one(v) } else { t.field().is_zero(v) };
            ensure!(want, "pivot column {col} is not a unit vector");
        }
    }
    Ok(())
}

fn la_solve(t: &mut Trial) -> Outcome {
    let max = t.cfg.max_dim;
    let (r, c, inner) = (t.rng.range(1, max), t.rng.range(1, max), t.rng.range(0, max));
    let a = t.matrix(r, inner).mul(&t.matrix(inner, c));
    let b = if t.rng.chance(1, 2) { a.mul(&t.matrix(c, 1)) } else { t.matrix(r, 1) };
    let consistent = a.hstack(&b).rank() == a.rank();
    match solve_linear(&a, &b) {
        Some(x) => {
            ensure!(consistent, "solution returned for an inconsistent system");
            ensure!(a.mul(&x) == b, "A x != b");
        }
        None => ensure!(!consistent, "no solution returned for a consistent system"),
    }
    Ok(())
}

// ----------------------------------------------------------------- core

fn core_hom_basis(t: &mut Trial) -> Outcome {
    let x = t.object("X");
    let y = t.object("Y");
    let basis = hom_space_basis(&x, &y)?;
    let tx = jordan_type(&x);
    let ty = jordan_type(&y);
    let want: usize = tx.parts().iter().flat_map(|&a| ty.parts().iter().map(move |&b| a.min(b))).sum();
    ensure!(basis.len() == want, "hom basis has {} elements, expected {want}", basis.len());
    let cols: Vec<_> = basis.iter().map(|h| h.matrix().vectorize()).collect();
    let stacked = Matrix::from_columns(t.field(), x.dim() * y.dim(), &cols);
    ensure!(stacked.rank() == basis.len(), "hom basis is dependent");
    for h in &basis {
        ensure!(h.matrix().mul(x.eps()) == y.eps().mul(h.matrix()), "basis map does not commute");
    }
    if x.dim() * y.dim() <= 64 {
        let dense = hom_space_basis_dense(&x, &y)?;
        ensure!(dense.len() == basis.len(), "dense hom dimension {} differs", dense.len());
    }
    let f = combine(&mut t.rng, &x, &y, &basis);
    ensure!(DiffMorphism::new(&x, &y, f.into_matrix()).is_ok(), "random combination does not commute");
    Ok(())
}

fn core_jordan_invariant(t: &mut Trial) -> Outcome {
    let (field, n) = (t.field(), t.n());
    let ty = random_jordan_type(&mut t.rng, n, t.cfg.max_dim);
    let x = object_of_type(&mut t.rng, field, &ty);
    let y = object_of_type(&mut t.rng, field, &ty);
    t.note_object("X", &x);
    t.note_object("Y", &y);
    ensure!(jordan_type(&x) == ty && jordan_type(&y) == ty, "jordan_type differs from the sampled type");
    let (jx, jy) = (jordan_basis(&x)?, jordan_basis(&y)?);
    let iso = DiffMorphism::new(&x, &y, jy.p.mul(&jx.p_inv));
    ensure!(matches!(&iso, Ok(f) if f.is_iso()), "equal types but Jordan bases give no isomorphism");
    // a different type admits no isomorphism: the dimension defect is positive
    let other = random_jordan_type(&mut t.rng, n, t.cfg.max_dim);
    if other != ty {
        let z = object_of_type(&mut t.rng, field, &other);
        t.note_object("Z", &z);
        let defect = hom_space_basis(&x, &x)?.len() + hom_space_basis(&z, &z)?.len();
        let cross = 2 * hom_space_basis(&x, &z)?.len();
        ensure!(defect > cross, "types differ but dim End X + dim End Z = 2 dim Hom(X, Z)");
    }
    Ok(())
}

fn core_adjunction_phi(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.object("X");
    let x2 = t.object("X2");
    let (d, e) = (t.small_dim(), t.small_dim());
    let f = t.matrix(d, x.dim());
    let g = adjoint_phi(&x, &f)?;
    ensure!(adjoint_phi_inv(&g)? == f, "phi^-1 phi f != f");
    let ty = augment(t.field(), d, n)?;
    let g2 = t.morphism("g", &x, &ty)?;
    ensure!(adjoint_phi(&x, &adjoint_phi_inv(&g2)?)?.matrix() == g2.matrix(), "phi phi^-1 g != g");
    // naturality in X: phi(f . F(alpha)) = phi(f) . alpha
    let alpha = t.morphism("alpha", &x2, &x)?;
    let lhs = adjoint_phi(&x2, &f.mul(alpha.matrix()))?;
    ensure!(lhs.matrix() == &g.matrix().mul(alpha.matrix()), "phi is not natural in X");
    // naturality in Y: phi(beta . f) = T(beta) . phi(f)
    let beta = t.matrix(e, d);
    let lhs = adjoint_phi(&x, &beta.mul(&f))?;
    let rhs = augment_morphism(&beta, n)?.matrix().mul(g.matrix());
    ensure!(lhs.matrix() == &rhs, "phi is not natural in Y");
    Ok(())
}

fn core_adjunction_psi(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.object("X");
    let x2 = t.object("X2");
    let (d, e) = (t.small_dim(), t.small_dim());
    let h = t.matrix(x.dim(), d);
    let f = adjoint_psi_inv(&x, &h)?;
    ensure!(adjoint_psi(&f)? == h, "psi psi^-1 h != h");
    let ty = augment(t.field(), d, n)?;
    let f2 = t.morphism("f", &ty, &x)?;
    ensure!(adjoint_psi_inv(&x, &adjoint_psi(&f2)?)?.matrix() == f2.matrix(), "psi^-1 psi f != f");
    // naturality in X: psi(alpha . f) = F(alpha) . psi(f)
    let alpha = t.morphism("alpha", &x, &x2)?;
    let lhs = adjoint_psi(&alpha.compose(&f)?)?;
    ensure!(lhs == alpha.matrix().mul(&h), "psi is not natural in X");
    // naturality in Y: psi(f . T(beta)) = psi(f) . beta
    let beta = t.matrix(d, e);
    let tb = augment_morphism(&beta, n)?;
    let lhs = adjoint_psi(&f.compose(&tb)?)?;
    ensure!(lhs == h.mul(&beta), "psi is not natural in Y");
    Ok(())
}

/// The sequences written out for `n = 2`, entry by entry.
fn displayed_n2(x: &DiffObject) -> [Matrix; 6] {
    let e = x.eps();
    let one = Matrix::identity(x.field(), x.dim());
    [
        e.neg().vstack(&one), // i'
        one.hstack(e),        // p'
        e.neg(),              // eps of X'
        e.vstack(&one),       // i''
        one.hstack(&e.neg()), // p''
        e.neg(),              // eps of X''
    ]
}

fn core_ses_canonical(t: &mut Trial) -> Outcome {
    let x = t.object("X");
    let proj = ses_proj(&x)?;
    let inj = ses_inj(&x)?;
    check_sequence(&proj, "ses_proj")?;
    check_sequence(&inj, "ses_inj")?;
    ensure!(proj.b().augmented_block() == Some(x.dim()), "middle of ses_proj is not T(X)");
    ensure!(proj.c() == &x && inj.a() == &x, "end terms are not X");
    if t.n() == 2 {
        let want = displayed_n2(&x);
        let got = [
            proj.i().matrix(),
            proj.p().matrix(),
            proj.a().eps(),
            inj.i().matrix(),
            inj.p().matrix(),
            inj.c().eps(),
        ];
        for (k, (g, w)) in got.iter().zip(want.iter()).enumerate() {
            ensure!(*g == w, "n = 2 form {k} differs from the displayed matrix");
        }
    }
    Ok(())
}

fn core_split_idempotent(t: &mut Trial) -> Outcome {
    let (field, n) = (t.field(), t.n());
    let d = t.small_dim().max(1);
    let e = random_idempotent_on_t(&mut t.rng, field, d, n)?;
    t.note_morphism("e", &e);
    let em = e.matrix();
    ensure!(em.mul(em) == *em, "generated map is not idempotent");
    let s = split_idempotent(&e)?;
    let (g, g_inv) = (s.g.matrix(), s.g_inv.matrix());
    ensure!(g.is_invertible() && g.mul(g_inv).is_identity() && g_inv.mul(g).is_identity(), "conjugator is not invertible");
    let conj = g.mul(em).mul(g_inv);
    for k in 0..n {
        for j in 0..n {
            let blk = conj.submatrix(k * d, (k + 1) * d, j * d, (j + 1) * d);
            if k == j {
                ensure!(blk == s.e0, "diagonal block {k} differs from e0");
            } else {
                ensure!(blk.is_zero(), "off-diagonal block ({k},{j}) is nonzero");
            }
        }
    }
    ensure!(s.e0.mul(&s.e0) == s.e0, "e0 is not idempotent");
    ensure!(s.e0.rank() * n == em.rank(), "rank of e is not n rank e0");
    Ok(())
}

fn core_projective(t: &mut Trial) -> Outcome {
    let x = t.mixed_object("X")?;
    let witness = is_projective(&x)?;
    let free = jordan_type(&x).is_free();
    let lifts = lift_through(ses_proj(&x)?.p(), &x.identity())?.is_some();
    let extends = extend_along(ses_inj(&x)?.i(), &x.identity())?.is_some();
    ensure!(
        witness.is_some() == free && lifts == free && extends == free,
        "projective {} / free {free} / id lifts {lifts} / id extends {extends}",
        witness.is_some()
    );
    if let Some(w) = &witness {
        ensure!(w.is_iso(), "projectivity witness is not an isomorphism");
    }
    if !free {
        return Ok(());
    }
    // lifting through a random surjection and extending along a random injection
    let b = t.object("B");
    let seq = random_invariant_ses(&mut t.rng, &b)?;
    let f = t.morphism("f", &x, seq.c())?;
    let h = lift_through(seq.p(), &f)?;
    ensure!(matches!(&h, Some(h) if seq.p().compose(h)?.matrix() == f.matrix()), "no lift through a surjection");
    let g = t.morphism("g", seq.a(), &x)?;
    let h = extend_along(seq.i(), &g)?;
    ensure!(matches!(&h, Some(h) if h.compose(seq.i())?.matrix() == g.matrix()), "no extension along an injection");
    Ok(())
}

// ------------------------------------------------------------- homotopy

/// A random morphism that is null-homotopic half the time.
fn maybe_null(t: &mut Trial, x: &DiffObject, y: &DiffObject) -> Result<DiffMorphism, Fail> {
    let f = if t.rng.chance(1, 2) {
        let s = t.matrix(y.dim(), x.dim());
        DiffMorphism::new(x, y, null_operator(x, y, &s))?
    } else {
        random_morphism(&mut t.rng, x, y)?
    };
    t.note_morphism("f", &f);
    Ok(f)
}

fn homotopy_witness(t: &mut Trial) -> Outcome {
    let x = t.object("X");
    let y = t.object("Y");
    let f = maybe_null(t, &x, &y)?;
    let g = t.morphism("g", &x, &y)?;
    let g = if t.rng.chance(1, 2) {
        let s = t.matrix(y.dim(), x.dim());
        DiffMorphism::new(&x, &y, f.matrix().add(&null_operator(&x, &y, &s)))?
    } else {
        g
    };
    let hk = hom_k(&x, &y)?;
    ensure!(hk.dim() + hk.null_dim() == hom_space_basis(&x, &y)?.len(), "hom_K dimensions do not add up");
    let same_class = hk.class_of(&f)? == hk.class_of(&g)?;
    ensure!(homotopic(&f, &g)? == same_class, "homotopic disagrees with class equality");
    if let Some(w) = null_homotopy_witness(&f)? {
        ensure!(null_operator(&x, &y, &w.s) == *f.matrix(), "witness equation fails");
        ensure!(hk.class_of(&f)?.is_zero(), "null-homotopic map has a nonzero class");
    }
    if x.dim() * y.dim() <= 64 {
        let dense = null_homotopy_witness_dense(&f)?;
        ensure!(dense.is_some() == is_null(&f)?, "dense and block-wise witness searches disagree");
    }
    Ok(())
}

fn homotopy_factorization(t: &mut Trial) -> Outcome {
    let x = t.object("X");
    let y = t.object("Y");
    let f = maybe_null(t, &x, &y)?;
    let w = null_homotopy_witness(&f)?;
    let g = factor_through_projective(&f)?;
    ensure!(w.is_some() == g.is_some(), "witness exists: {}, factorization exists: {}", w.is_some(), g.is_some());
    let (Some(w), Some(g)) = (w, g) else {
        return Ok(());
    };
    let p = ses_proj(&y)?;
    ensure!(p.p().compose(&g)?.matrix() == f.matrix(), "factorization does not compose to f");
    let s2 = witness_from_factorization(&g)?;
    ensure!(null_operator(&x, &y, &s2.s) == *f.matrix(), "witness read off the factorization fails");
    let g2 = factorization_from_witness(&x, &w)?;
    ensure!(p.p().compose(&g2)?.matrix() == f.matrix(), "factorization built from the witness fails");
    ensure!(witness_from_factorization(&g2)?.s == w.s, "s -> g -> g_n does not return s");
    ensure!(factorization_from_witness(&x, &s2)?.matrix() == g.matrix(), "g -> g_n -> g does not return g");
    Ok(())
}

fn homotopy_cone(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.object("X");
    let y = t.object("Y");
    let f = t.morphism("f", &x, &y)?;
    let tri = cone(&f)?;
    let sx = shift(&x)?;
    ensure!(nilpotent(tri.cone()) && nilpotent(&sx), "cone or shift has eps^n != 0");
    ensure!(tri.v.compose(&tri.u)?.is_zero(), "v u != 0");
    ensure!(is_null(&tri.u.compose(&f)?)?, "u f is not null-homotopic");
    ensure!(is_null(&shift_morphism(&f)?.compose(&tri.v)?)?, "(Sigma f) v is not null-homotopic");
    let iso = scrambled_iso(&mut t.rng, &x)?;
    ensure!(is_acyclic(cone(&iso)?.cone())?, "cone of an isomorphism is not acyclic");
    let zero = cone(&DiffMorphism::zero(&x, &y)?)?;
    ensure!(
        jordan_type(zero.cone()) == jordan_type(&direct_sum(&y, &sx)?),
        "Cone(0) is not Y + Sigma X"
    );
    for r in 1..n {
        let (a, b) = (homology(&sx, r)?.dim, homology(&x, n - r)?.dim);
        ensure!(a == b, "dim H_{r}(Sigma X) = {a} but dim H_{}(X) = {b}", n - r);
    }
    Ok(())
}

fn homotopy_shift_duality(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.object("X");
    let seq = ses_inj(&x)?;
    for r in 1..n {
        let w = les(&seq, r)?;
        let d = w.connecting();
        ensure!(
            d.rows() == d.cols() && d.rank() == d.rows(),
            "connecting map H_{r}(Sigma X) -> H_{}(X) is not invertible",
            n - r
        );
        ensure!(homology(seq.c(), r)?.dim == homology(&x, n - r)?.dim, "shift duality fails at r = {r}");
    }
    Ok(())
}

fn homotopy_homology_invariance(t: &mut Trial) -> Outcome {
    let x = t.object("X");
    let y = t.object("Y");
    let f = t.morphism("f", &x, &y)?;
    let s = t.matrix(y.dim(), x.dim());
    let g = DiffMorphism::new(&x, &y, f.matrix().add(&null_operator(&x, &y, &s)))?;
    t.note_morphism("g", &g);
    for r in 1..t.n() {
        ensure!(homology_map(&f, r)? == homology_map(&g, r)?, "H_{r}(f) != H_{r}(g)");
    }
    Ok(())
}

fn check_window(seq: &ShortExactSeq, n: usize, what: &str, middle_acyclic: bool) -> Outcome {
    for r in 1..n {
        let w = les(seq, r)?;
        ensure!(w.is_exact(), "{what}: les reports a non-exact joint at r = {r}");
        for k in 0..6 {
            let incoming = &w.maps[(k + 5) % 6];
            let outgoing = &w.maps[k];
            ensure!(exact_joint(w.dims[k], incoming, outgoing), "{what}: not exact at term {k}, r = {r}");
        }
        if middle_acyclic {
            let d = w.connecting();
            ensure!(d.rows() == d.cols() && d.rank() == d.rows(), "{what}: connecting map not invertible at r = {r}");
        }
    }
    Ok(())
}

fn homotopy_les(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.object("X");
    check_window(&ses_proj(&x)?, n, "ses_proj", true)?;
    check_window(&ses_inj(&x)?, n, "ses_inj", true)?;
    let b = t.object("B");
    let seq = random_invariant_ses(&mut t.rng, &b)?;
    t.note_morphism("i", seq.i());
    check_sequence(&seq, "random sequence")?;
    check_window(&seq, n, "random sequence", false)
}

fn homotopy_shift_functor(t: &mut Trial) -> Outcome {
    let w = t.object("W");
    let x = t.object("X");
    let y = t.object("Y");
    let g = t.morphism("g", &w, &x)?;
    let f = t.morphism("f", &x, &y)?;
    let lhs = shift_morphism(&f.compose(&g)?)?;
    let rhs = shift_morphism(&f)?.compose(&shift_morphism(&g)?)?;
    ensure!(lhs.matrix() == rhs.matrix(), "Sigma(f g) != Sigma f Sigma g");
    // the round trip multiplies dimensions by (n-1)^2, so it starts smaller
    let (field, n) = (t.field(), t.n());
    let small = random_diff_object(&mut t.rng, field, n, (t.cfg.max_dim / (n - 1)).max(1));
    t.note_object("S", &small);
    ensure!(homotopy_equivalence(&coshift(&shift(&small)?)?, &small)?.is_some(), "Sigma^-1 Sigma S is not S");
    ensure!(homotopy_equivalence(&shift(&coshift(&small)?)?, &small)?.is_some(), "Sigma Sigma^-1 S is not S");
    Ok(())
}

fn homotopy_projective_contractible(t: &mut Trial) -> Outcome {
    let (field, n) = (t.field(), t.n());
    let p = random_free_object(&mut t.rng, field, n, t.cfg.max_dim);
    t.note_object("P", &p);
    let y = t.object("Y");
    let d = t.small_dim();
    let ta = augment(field, d, n)?;
    for (a, b) in [(&p, &y), (&y, &p), (&ta, &y), (&y, &ta)] {
        ensure!(hom_k(a, b)?.dim() == 0, "Hom_K between a projective and Y is nonzero");
    }
    ensure!(is_null(&p.identity())?, "identity of a projective is not null-homotopic");
    Ok(())
}

// -------------------------------------------------------------- derived

/// A quasi-isomorphism half the time, an arbitrary morphism otherwise.
fn maybe_qiso(t: &mut Trial) -> Result<(DiffMorphism, bool), Fail> {
    let (field, n, max_dim) = (t.field(), t.n(), t.cfg.max_dim);
    let (f, known) = if t.rng.chance(1, 2) {
        (random_quasi_iso(&mut t.rng, field, n, max_dim)?, true)
    } else {
        let x = random_diff_object(&mut t.rng, field, n, max_dim);
        let y = random_diff_object(&mut t.rng, field, n, max_dim);
        (random_morphism(&mut t.rng, &x, &y)?, false)
    };
    t.note_morphism("f", &f);
    Ok((f, known))
}

fn derived_qiso_agree(t: &mut Trial) -> Outcome {
    let (f, known) = maybe_qiso(t)?;
    let v = is_quasi_iso(&f)?;
    let per_r = v.per_r.iter().all(|(_, _, inv)| *inv);
    let acyclic = is_acyclic(cone(&f)?.cone())?;
    ensure!(per_r == acyclic && v.is_qiso == per_r && v.cone_acyclic == acyclic, "characterizations disagree");
    for (r, h, inv) in &v.per_r {
        ensure!(*h == homology_map(&f, *r)?, "reported H_{r}(f) differs");
        ensure!(*inv == (h.rows() == h.cols() && h.rank() == h.rows()), "invertibility flag wrong at r = {r}");
    }
    if known {
        ensure!(v.is_qiso, "generated quasi-isomorphism is not recognized");
    }
    Ok(())
}

fn derived_homotopy_section(t: &mut Trial) -> Outcome {
    let (field, n, max_dim) = (t.field(), t.n(), t.cfg.max_dim);
    let f = random_quasi_iso(&mut t.rng, field, n, max_dim)?;
    t.note_morphism("f", &f);
    let (x, y) = (f.src(), f.dst());
    let a = homotopy_section(&f)?;
    let b = homotopy_section_minimal(&f)?;
    for sec in [&a, &b] {
        ensure!(sec.g.src() == y && sec.g.dst() == x, "section has the wrong shape");
        ensure!(sec.g.matrix().mul(y.eps()) == x.eps().mul(sec.g.matrix()), "section does not commute");
        let diff = f.matrix().mul(sec.g.matrix()).sub(&Matrix::identity(field, y.dim()));
        ensure!(null_operator(y, y, &sec.witness.s) == diff, "f g - 1 != L(s)");
    }
    ensure!(homotopic(&a.g, &b.g)?, "two sections of f are not homotopic");
    let x2 = t.object("X2");
    let g = t.morphism("g", &x2, y)?;
    if !is_quasi_iso(&g)?.is_qiso {
        ensure!(matches!(homotopy_section(&g), Err(Error::NotQuasiIso)), "section offered for a non-quasi-isomorphism");
    }
    Ok(())
}

fn derived_two_of_three(t: &mut Trial) -> Outcome {
    let (field, n, max_dim) = (t.field(), t.n(), t.cfg.max_dim);
    let f = if t.rng.chance(2, 3) {
        random_quasi_iso(&mut t.rng, field, n, max_dim)?
    } else {
        let x = random_diff_object(&mut t.rng, field, n, max_dim);
        let y = random_diff_object(&mut t.rng, field, n, max_dim);
        random_morphism(&mut t.rng, &x, &y)?
    };
    t.note_morphism("f", &f);
    let y = f.dst().clone();
    let g = if t.rng.chance(2, 3) {
        // a quasi-isomorphism out of Y: drop or add free summands, then scramble
        let mm = minimal_model(&y)?;
        let base = if t.rng.chance(1, 2) {
            mm.project.clone()
        } else {
            biproduct(&y, &augment(field, 1, n)?)?.inj[0].clone()
        };
        let iso = scrambled_iso(&mut t.rng, base.dst())?;
        iso.compose(&base)?
    } else {
        let z = random_diff_object(&mut t.rng, field, n, max_dim);
        random_morphism(&mut t.rng, &y, &z)?
    };
    t.note_morphism("g", &g);
    let gf = g.compose(&f)?;
    let q = [is_quasi_iso(&f)?.is_qiso, is_quasi_iso(&g)?.is_qiso, is_quasi_iso(&gf)?.is_qiso];
    ensure!(q.iter().filter(|&&b| b).count() != 2, "exactly two of f, g, g f are quasi-isomorphisms: {q:?}");
    Ok(())
}

fn derived_minimal_model(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.mixed_object("X")?;
    let mm = minimal_model(&x)?;
    let ty = jordan_type(&x);
    ensure!(mm.project.compose(&mm.include)?.matrix().is_identity(), "project include != 1");
    let ip = mm.include.compose(&mm.project)?.matrix().sub(&Matrix::identity(t.field(), x.dim()));
    ensure!(null_operator(&x, &x, &mm.witness.s) == ip, "stored witness for include project ~ 1 fails");
    ensure!(jordan_type(&mm.reduced) == ty.stable_part(), "reduced type is not the stable part");
    ensure!(jordan_type(&mm.reduced).parts().iter().all(|&a| a < n), "reduced model has a free part");
    ensure!(mm.free_rank == ty.free_rank(), "free rank is wrong");
    ensure!(is_quasi_iso(&mm.include)?.is_qiso, "include is not a quasi-isomorphism");
    ensure!(mm.splitting.is_iso(), "splitting is not an isomorphism");
    let target = direct_sum(&mm.reduced, &augment(t.field(), mm.free_rank, n)?)?;
    ensure!(*mm.splitting.dst() == target, "splitting does not land in reduced + T");
    Ok(())
}

fn derived_theta(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.mixed_object("X")?;
    let ty = jordan_type(&x);
    for i in 1..n {
        let tc = theta_check(&x, i)?;
        let hk = hom_k(&compact_generator(t.field(), n, i)?, &x)?.dim();
        let h = homology(&x, i)?.dim;
        let closed: usize = ty.parts().iter().map(|&j| generator_hom_dim(i, j, n)).sum();
        ensure!(
            tc.dim_hom_k == hk && tc.dim_h == h && hk == h && h == closed && tc.bijective,
            "i = {i}: hom_K {hk} / theta {} / H {h} / closed form {closed} / bijective {}",
            tc.dim_hom_k,
            tc.bijective
        );
        ensure!(tc.matrix.rank() == tc.dim_h, "theta matrix is not of full rank at i = {i}");
    }
    Ok(())
}

/// `dim Hom_K(X, Y)` from dense ranks alone: the commuting maps are the
/// kernel of `vec(f) |-> vec(f eps_X - eps_Y f)` and the null-homotopic
/// ones the image of `vec(s) |-> vec(sum_k eps_Y^(n-1-k) s eps_X^k)`.
pub fn brute_force_hom_k(x: &DiffObject, y: &DiffObject) -> usize {
    let field = x.field();
    let n = x.n();
    let (ix, iy) = (Matrix::identity(field, x.dim()), Matrix::identity(field, y.dim()));
    let commutator = x.eps().transpose().kron(&iy).sub(&ix.kron(y.eps()));
    let hom = commutator.cols() - commutator.rank();
    let (px, py) = (x.eps_powers(), y.eps_powers());
    let mut null = Matrix::zeros(field, x.dim() * y.dim(), x.dim() * y.dim());
    for k in 0..n {
        null = null.add(&px[k].transpose().kron(&py[n - 1 - k]));
    }
    hom - null.rank()
}

fn derived_theta_closed_form(t: &mut Trial) -> Outcome {
    let (field, n) = (t.field(), t.n());
    let i = t.rng.range(1, n);
    let j = t.rng.range(1, n);
    let x = scramble(&mut t.rng, &jordan_block(field, i, n)?);
    let y = scramble(&mut t.rng, &jordan_block(field, j, n)?);
    t.note_object("X", &x);
    t.note_object("Y", &y);
    let brute = brute_force_hom_k(&x, &y);
    let closed = i.min(j) - (i + j).saturating_sub(n);
    let computed = hom_k(&x, &y)?.dim();
    ensure!(
        brute == closed && closed == generator_hom_dim(i, j, n) && computed == closed,
        "J_{i} -> J_{j}: brute force {brute}, closed form {closed}, hom_k {computed}"
    );
    Ok(())
}

fn derived_zero_detection(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.mixed_object("X")?;
    let v = zero_detection(&x)?;
    let acyclic = is_acyclic(&x)?;
    let free = jordan_type(&x).is_free();
    let null_id = is_null(&x.identity())?;
    let mut gens = true;
    for i in 1..n {
        gens &= hom_k(&compact_generator(t.field(), n, i)?, &x)?.dim() == 0;
    }
    ensure!(
        acyclic == free && free == null_id && null_id == gens && v.is_zero == acyclic,
        "acyclic {acyclic} / free {free} / id ~ 0 {null_id} / generators vanish {gens} / verdict {}",
        v.is_zero
    );
    Ok(())
}

fn derived_hom_invariance(t: &mut Trial) -> Outcome {
    let x = t.object("X");
    let y = t.object("Y");
    let base = derived_hom_dim(&x, &y)?;
    ensure!(base == hom_k(&x, &y)?.dim(), "derived Hom differs from Hom_K");
    let x2 = pad_with_free(&mut t.rng, &x)?;
    let x2 = scramble(&mut t.rng, &x2);
    let y2 = pad_with_free(&mut t.rng, &y)?;
    let y2 = scramble(&mut t.rng, &y2);
    t.note_object("X2", &x2);
    t.note_object("Y2", &y2);
    ensure!(homotopy_equivalence(&x, &x2)?.is_some(), "X + T is not homotopy equivalent to X");
    let (a, b) = (derived_hom_dim(&x2, &y)?, derived_hom_dim(&x, &y2)?);
    ensure!(a == base && b == base, "derived Hom changes under replacement: {base}, {a}, {b}");
    Ok(())
}

fn derived_coproduct(t: &mut Trial) -> Outcome {
    let n = t.n();
    let x = t.object("X");
    let y = t.object("Y");
    let xy = direct_sum(&x, &y)?;
    for i in 1..n {
        let g = compact_generator(t.field(), n, i)?;
        let (a, b, c) = (hom_k(&g, &xy)?.dim(), hom_k(&g, &x)?.dim(), hom_k(&g, &y)?.dim());
        ensure!(a == b + c, "i = {i}: Hom_K(G, X + Y) = {a} but {b} + {c}");
    }
    Ok(())
}

// -------------------------------------------------------------- harness

fn harness_generators(t: &mut Trial) -> Outcome {
    let (field, n, max_dim) = (t.field(), t.n(), t.cfg.max_dim);
    let ty = random_jordan_type(&mut t.rng, n, max_dim);
    ensure!(ty.dim() <= max_dim, "sampled type exceeds max_dim");
    let x = object_of_type(&mut t.rng, field, &ty);
    t.note_object("X", &x);
    ensure!(nilpotent(&x) && jordan_type(&x) == ty, "object does not have the sampled type");
    let y = t.object("Y");
    let f = t.morphism("f", &x, &y)?;
    ensure!(DiffMorphism::new(&x, &y, f.matrix().clone()).is_ok(), "random morphism does not commute");
    let seq = random_invariant_ses(&mut t.rng, &x)?;
    check_sequence(&seq, "random invariant sequence")?;
    let q = random_quasi_iso(&mut t.rng, field, n, max_dim)?;
    t.note_morphism("q", &q);
    ensure!(is_quasi_iso(&q)?.is_qiso, "random quasi-isomorphism is not one");
    let d = t.small_dim().max(1);
    let e = random_idempotent_on_t(&mut t.rng, field, d, n)?;
    ensure!(e.matrix().mul(e.matrix()) == *e.matrix(), "random idempotent is not idempotent");
    // the same stream regenerates the same object
    let mut a = Rng::for_trial(t.cfg.seed, 0);
    let mut b = Rng::for_trial(t.cfg.seed, 0);
    let (o1, o2) = (random_diff_object(&mut a, field, n, max_dim), random_diff_object(&mut b, field, n, max_dim));
    ensure!(o1 == o2, "generation is not deterministic");
    Ok(())
}

/// A named property.
pub struct Property {
    pub name: &'static str,
    run: fn(&mut Trial) -> Outcome,
}

/// Every property, sorted by name.
pub fn properties() -> &'static [Property] {
    const ALL: &[Property] = &[
        Property { name: "core.adjunction_phi", run: core_adjunction_phi },
        Property { name: "core.adjunction_psi", run: core_adjunction_psi },
        Property { name: "core.hom_basis", run: core_hom_basis },
        Property { name: "core.jordan_invariant", run: core_jordan_invariant },
        Property { name: "core.projective", run: core_projective },
        Property { name: "core.ses_canonical", run: core_ses_canonical },
        Property { name: "core.split_idempotent", run: core_split_idempotent },
        Property { name: "derived.coproduct", run: derived_coproduct },
        Property { name: "derived.hom_invariance", run: derived_hom_invariance },
        Property { name: "derived.homotopy_section", run: derived_homotopy_section },
        Property { name: "derived.minimal_model", run: derived_minimal_model },
        Property { name: "derived.qiso_agree", run: derived_qiso_agree },
        Property { name: "derived.theta", run: derived_theta },
        Property { name: "derived.theta_closed_form", run: derived_theta_closed_form },
        Property { name: "derived.two_of_three", run: derived_two_of_three },
        Property { name: "derived.zero_detection", run: derived_zero_detection },
        Property { name: "harness.generators", run: harness_generators },
        Property { name: "homotopy.cone", run: homotopy_cone },
        Property { name: "homotopy.factorization", run: homotopy_factorization },
        Property { name: "homotopy.homology_invariance", run: homotopy_homology_invariance },
        Property { name: "homotopy.les", run: homotopy_les },
        Property { name: "homotopy.projective_contractible", run: homotopy_projective_contractible },
        Property { name: "homotopy.shift_duality", run: homotopy_shift_duality },
        Property { name: "homotopy.shift_functor", run: homotopy_shift_functor },
        Property { name: "homotopy.witness", run: homotopy_witness },
        Property { name: "la.kernel", run: la_kernel },
        Property { name: "la.rref", run: la_rref },
        Property { name: "la.solve", run: la_solve },
    ];
    ALL
}

/// Which properties and trials to run.
#[derive(Clone, Debug, Default)]
pub struct Selection {
    /// Property names, or every property when empty. A name ending in `.`
    /// selects a whole group (`homotopy.`).
    pub only: Vec<String>,
    /// Run just this trial index instead of `0..trials`.
    pub trial: Option<u64>,
}

impl Selection {
    fn matches(&self, name: &str) -> bool {
        self.only.is_empty()
            || self.only.iter().any(|o| o == name || (o.ends_with('.') && name.starts_with(o.as_str())))
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub trial: u64,
    pub reason: String,
    pub internal: bool,
    /// Generated inputs, in DFN-1.
    pub counterexample: String,
}

#[derive(Clone, Debug)]
pub struct PropertyRecord {
    pub name: &'static str,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub cfg: GenConfig,
    pub records: Vec<PropertyRecord>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.records.iter().map(|r| r.failures.len()).sum()
    }

    pub fn has_internal_failure(&self) -> bool {
        self.records.iter().flat_map(|r| &r.failures).any(|f| f.internal)
    }

    /// The deterministic part of the report.
    pub fn body(&self) -> String {
        let c = &self.cfg;
        let tag = field_tag(c.field);
        let mut out = format!(
            "diffn verify seed={} field={tag} n={} max_dim={} trials={}\n",
            c.seed, c.n, c.max_dim, c.trials
        );
        for r in &self.records {
            let verdict = if r.failures.is_empty() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {} trials={} failures={}", r.name, r.trials, r.failures.len());
            for f in &r.failures {
                let _ = writeln!(out, "  trial {}: {}", f.trial, f.reason);
                let _ = writeln!(
                    out,
                    "    replay: diffn verify --seed {} --trials {} --field {tag} --n {} --max-dim {} --only {} --trial {}",
                    c.seed, c.trials, c.n, c.max_dim, r.name, f.trial
                );
                out.push_str(&f.counterexample);
            }
        }
        let _ = writeln!(out, "total properties={} failures={}", self.records.len(), self.failures());
        out
    }

    /// Wall times, one line per property.
    pub fn timings(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "time {} {:.3}s", r.name, r.wall.as_secs_f64());
        }
        out
    }
}

/// Fails on a property name that matches nothing.
pub fn check_selection(sel: &Selection) -> Result<(), Error> {
    for o in &sel.only {
        if !properties().iter().any(|p| Selection { only: vec![o.clone()], trial: None }.matches(p.name)) {
            return Err(Error::Parse(format!("unknown property `{o}`")));
        }
    }
    Ok(())
}

pub fn run_verify(cfg: &GenConfig, sel: &Selection) -> Result<VerifyReport, Error> {
    check_selection(sel)?;
    if let Some(k) = sel.trial {
        if k >= cfg.trials {
            return Err(Error::OutOfRange {
                what: "trial",
                value: k as usize,
                lo: 0,
                hi: cfg.trials as usize - 1,
            });
        }
    }
    let trials: Vec<u64> = match sel.trial {
        Some(k) => vec![k],
        None => (0..cfg.trials).collect(),
    };
    let mut records = Vec::new();
    for p in properties().iter().filter(|p| sel.matches(p.name)) {
        let start = Instant::now();
        let mut failures = Vec::new();
        for &k in &trials {
            let mut trial = Trial::new(cfg, k);
            if let Err(fail) = (p.run)(&mut trial) {
                failures.push(Failure {
                    trial: k,
                    reason: fail.reason,
                    internal: fail.internal,
                    counterexample: trial.counterexample(),
                });
            }
        }
        records.push(PropertyRecord { name: p.name, trials: trials.len() as u64, failures, wall: start.elapsed() });
    }
    Ok(VerifyReport { cfg: *cfg, records })
}
