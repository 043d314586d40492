//! Structural invariants as proptest properties. Expected values come from
//! rank computations written out here, not from the library's own
//! decompositions.

use proptest::prelude::*;

use diffn::category::{
    adjoint_phi, adjoint_phi_inv, adjoint_psi, adjoint_psi_inv, augment, direct_sum, is_projective,
    jordan_type, lift_through, ses_inj, ses_proj, shift, split_idempotent, DiffMorphism, DiffObject,
};
use diffn::derived::{is_quasi_iso, minimal_model, theta_check};
use diffn::exactla::{kernel_basis, rref, solve_linear};
use diffn::harness::gen::{
    object_of_type, random_diff_object, random_idempotent_on_t, random_invertible, random_jordan_type,
    random_matrix, random_morphism, random_quasi_iso,
};
use diffn::harness::{run_verify, GenConfig, Rng, Selection};
use diffn::homotopy::{
    cone, factor_through_projective, hom_k, homology, homology_map, is_acyclic, null_homotopy_witness,
    null_operator, witness_from_factorization,
};
use diffn::{FieldSpec, Matrix};

const MAX_DIM: usize = 8;

fn field_of(k: u8) -> FieldSpec {
    match k % 4 {
        0 => FieldSpec::prime(2).unwrap(),
        1 => FieldSpec::prime(5).unwrap(),
        2 => FieldSpec::prime(97).unwrap(),
        _ => FieldSpec::rationals(),
    }
}

fn setup() -> impl Strategy<Value = (FieldSpec, usize, Rng)> {
    (any::<u8>(), 2usize..=5, any::<u64>()).prop_map(|(f, n, s)| (field_of(f), n, Rng::new(s)))
}

fn small_matrix() -> impl Strategy<Value = (FieldSpec, Matrix)> {
    (any::<u8>(), 1usize..6, 1usize..6)
        .prop_flat_map(|(f, r, c)| (Just(f), Just(r), proptest::collection::vec(-3i64..=3, r * c)))
        .prop_map(|(f, r, v)| {
            let field = field_of(f);
            let rows: Vec<Vec<i64>> = v.chunks(v.len() / r).map(|c| c.to_vec()).collect();
            (field, Matrix::from_i64_rows(field, &rows))
        })
}

/// `dim Hom(X, Y)`: kernel of `vec(f) |-> vec(eps_Y f - f eps_X)`.
fn hom_dim_oracle(x: &DiffObject, y: &DiffObject) -> usize {
    let f = x.field();
    let (dx, dy) = (x.dim(), y.dim());
    let mut cols = Vec::new();
    for q in 0..dx {
        for p in 0..dy {
            let mut e = Matrix::zeros(f, dy, dx);
            e.set(p, q, f.one());
            cols.push(y.eps().mul(&e).sub(&e.mul(x.eps())).vectorize());
        }
    }
    let m = Matrix::from_columns(f, dx * dy, &cols);
    dx * dy - m.rank()
}

/// `dim` of the null-homotopic maps: rank of `s |-> sum eps_Y^(n-1-k) s eps_X^k`.
fn null_dim_oracle(x: &DiffObject, y: &DiffObject) -> usize {
    let f = x.field();
    let (dx, dy) = (x.dim(), y.dim());
    let mut cols = Vec::new();
    for q in 0..dx {
        for p in 0..dy {
            let mut e = Matrix::zeros(f, dy, dx);
            e.set(p, q, f.one());
            let mut acc = Matrix::zeros(f, dy, dx);
            for k in 0..x.n() {
                acc = acc.add(&y.eps().pow(x.n() - 1 - k).mul(&e).mul(&x.eps().pow(k)));
            }
            cols.push(acc.vectorize());
        }
    }
    Matrix::from_columns(f, dx * dy, &cols).rank()
}

/// `dim Ker eps^r - rank eps^(n-r)`.
fn homology_dim_oracle(x: &DiffObject, r: usize) -> usize {
    x.dim() - x.eps().pow(r).rank() - x.eps().pow(x.n() - r).rank()
}

fn object(rng: &mut Rng, field: FieldSpec, n: usize) -> DiffObject {
    random_diff_object(rng, field, n, MAX_DIM)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn kernel_is_annihilated_and_rank_nullity_holds((_, m) in small_matrix()) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(k.basis()).is_zero());
        prop_assert_eq!(m.rank() + k.dim(), m.cols());
    }

    #[test]
    fn rref_is_idempotent((_, m) in small_matrix()) {
        let r = rref(&m);
        let rr = rref(&r.reduced);
        prop_assert_eq!(&rr.reduced, &r.reduced);
        prop_assert_eq!(rr.pivots, r.pivots);
    }

    #[test]
    fn solve_exactly_when_consistent((field, a) in small_matrix(), seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let b = random_matrix(&mut rng, field, a.rows(), 1);
        let consistent = a.hstack(&b).rank() == a.rank();
        match solve_linear(&a, &b) {
            Some(x) => prop_assert!(consistent && a.mul(&x) == b),
            None => prop_assert!(!consistent),
        }
    }

    #[test]
    fn adjunctions_round_trip((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        let dy = rng.below(4) as usize;
        let f = random_matrix(&mut rng, field, dy, x.dim());
        let g = adjoint_phi(&x, &f).unwrap();
        prop_assert_eq!(g.dst(), &augment(field, dy, n).unwrap());
        prop_assert_eq!(adjoint_phi_inv(&g).unwrap(), f);
        let h = random_matrix(&mut rng, field, x.dim(), dy);
        let k = adjoint_psi_inv(&x, &h).unwrap();
        prop_assert_eq!(adjoint_psi(&k).unwrap(), h);
    }

    #[test]
    fn canonical_sequences_are_exact((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        for seq in [ses_proj(&x).unwrap(), ses_inj(&x).unwrap()] {
            prop_assert!(seq.p().matrix().mul(seq.i().matrix()).is_zero());
            prop_assert_eq!(seq.i().matrix().rank() + seq.p().matrix().rank(), seq.b().dim());
            prop_assert_eq!(seq.i().matrix().rank(), seq.a().dim());
            for o in [seq.a(), seq.b(), seq.c()] {
                prop_assert!(o.eps().pow(n).is_zero());
            }
        }
    }

    #[test]
    fn jordan_type_is_a_conjugation_invariant((field, n, mut rng) in setup()) {
        let ty = random_jordan_type(&mut rng, n, MAX_DIM);
        let x = object_of_type(&mut rng, field, &ty);
        prop_assert_eq!(jordan_type(&x), ty.clone());
        let (g, g_inv) = random_invertible(&mut rng, field, x.dim());
        let y = DiffObject::new(n, g.mul(x.eps()).mul(&g_inv)).unwrap();
        prop_assert!(DiffMorphism::new(&x, &y, g).unwrap().is_iso());
        prop_assert_eq!(jordan_type(&y), ty);
    }

    #[test]
    fn idempotents_on_t_split((field, n, mut rng) in setup()) {
        let d = 1 + rng.below(3) as usize;
        let e = random_idempotent_on_t(&mut rng, field, d, n).unwrap();
        let s = split_idempotent(&e).unwrap();
        let conj = s.g.matrix().mul(e.matrix()).mul(s.g_inv.matrix());
        prop_assert!(s.g.matrix().mul(s.g_inv.matrix()).is_identity());
        for r in 0..n {
            for c in 0..n {
                let blk = conj.submatrix(r * d, (r + 1) * d, c * d, (c + 1) * d);
                let expected = if r == c { s.e0.clone() } else { Matrix::zeros(field, d, d) };
                prop_assert_eq!(blk, expected);
            }
        }
    }

    #[test]
    fn projective_iff_free_iff_identity_lifts((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        let free = jordan_type(&x).parts().iter().all(|&a| a == n);
        prop_assert_eq!(is_projective(&x).unwrap().is_some(), free);
        let lift = lift_through(ses_proj(&x).unwrap().p(), &x.identity()).unwrap();
        prop_assert_eq!(lift.is_some(), free);
    }

    #[test]
    fn witnesses_match_factorizations((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        let y = object(&mut rng, field, n);
        let s = random_matrix(&mut rng, field, y.dim(), x.dim());
        let null = DiffMorphism::new(&x, &y, null_operator(&x, &y, &s)).unwrap();
        let w = null_homotopy_witness(&null).unwrap().expect("built from a witness");
        prop_assert_eq!(null_operator(&x, &y, &w.s), null.matrix().clone());

        let f = random_morphism(&mut rng, &x, &y).unwrap();
        let w = null_homotopy_witness(&f).unwrap();
        let g = factor_through_projective(&f).unwrap();
        prop_assert_eq!(w.is_some(), g.is_some());
        if let Some(g) = g {
            let s = witness_from_factorization(&g).unwrap().s;
            prop_assert_eq!(null_operator(&x, &y, &s), f.matrix().clone());
        }
    }

    #[test]
    fn hom_k_matches_rank_oracle((field, n, mut rng) in setup()) {
        let x = random_diff_object(&mut rng, field, n, 5);
        let y = random_diff_object(&mut rng, field, n, 5);
        let h = hom_k(&x, &y).unwrap();
        prop_assert_eq!(h.hom_dim, hom_dim_oracle(&x, &y));
        prop_assert_eq!(h.null_dim(), null_dim_oracle(&x, &y));
        let t = augment(field, 1, n).unwrap();
        prop_assert_eq!(hom_k(&t, &y).unwrap().dim(), 0);
        prop_assert_eq!(hom_k(&x, &t).unwrap().dim(), 0);
    }

    #[test]
    fn homology_dims_and_shift_duality((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        let sx = shift(&x).unwrap();
        for r in 1..n {
            prop_assert_eq!(homology(&x, r).unwrap().dim, homology_dim_oracle(&x, r));
            prop_assert_eq!(homology(&sx, r).unwrap().dim, homology_dim_oracle(&x, n - r));
        }
    }

    #[test]
    fn homotopic_maps_agree_on_homology((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        let y = object(&mut rng, field, n);
        let f = random_morphism(&mut rng, &x, &y).unwrap();
        let s = random_matrix(&mut rng, field, y.dim(), x.dim());
        let g = DiffMorphism::new(&x, &y, f.matrix().add(&null_operator(&x, &y, &s))).unwrap();
        for r in 1..n {
            prop_assert_eq!(homology_map(&f, r).unwrap(), homology_map(&g, r).unwrap());
        }
    }

    #[test]
    fn cones((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        let y = object(&mut rng, field, n);
        let f = random_morphism(&mut rng, &x, &y).unwrap();
        let tri = cone(&f).unwrap();
        prop_assert!(tri.cone().eps().pow(n).is_zero());
        prop_assert!(tri.v.matrix().mul(tri.u.matrix()).is_zero());
        prop_assert!(null_homotopy_witness(&tri.u.compose(&f).unwrap()).unwrap().is_some());
        prop_assert!(is_acyclic(cone(&x.identity()).unwrap().cone()).unwrap());
        let zero = DiffMorphism::zero(&x, &y).unwrap();
        let expected = direct_sum(&y, &shift(&x).unwrap()).unwrap();
        prop_assert_eq!(jordan_type(cone(&zero).unwrap().cone()), jordan_type(&expected));
    }

    #[test]
    fn quasi_isomorphisms((field, n, mut rng) in setup()) {
        let q = random_quasi_iso(&mut rng, field, n, MAX_DIM).unwrap();
        let v = is_quasi_iso(&q).unwrap();
        prop_assert!(v.is_qiso && v.cone_acyclic);
        for r in 1..n {
            prop_assert_eq!(homology_dim_oracle(q.src(), r), homology_dim_oracle(q.dst(), r));
        }
        let x = object(&mut rng, field, n);
        let y = object(&mut rng, field, n);
        let f = random_morphism(&mut rng, &x, &y).unwrap();
        let v = is_quasi_iso(&f).unwrap();
        prop_assert_eq!(v.is_qiso, v.cone_acyclic);
    }

    #[test]
    fn minimal_models((field, n, mut rng) in setup()) {
        let x = object(&mut rng, field, n);
        let mm = minimal_model(&x).unwrap();
        prop_assert!(jordan_type(&mm.reduced).parts().iter().all(|&a| a < n));
        prop_assert!(is_quasi_iso(&mm.include).unwrap().is_qiso);
        prop_assert!(mm.splitting.is_iso());
        prop_assert_eq!(mm.reduced.dim() + n * mm.free_rank, x.dim());
    }

    #[test]
    fn theta_and_coproducts((field, n, mut rng) in setup()) {
        let x = random_diff_object(&mut rng, field, n, 6);
        let y = random_diff_object(&mut rng, field, n, 6);
        let xy = direct_sum(&x, &y).unwrap();
        for i in 1..n {
            let (a, b, c) = (theta_check(&x, i).unwrap(), theta_check(&y, i).unwrap(), theta_check(&xy, i).unwrap());
            prop_assert!(a.bijective && b.bijective && c.bijective);
            prop_assert_eq!(a.dim_hom_k, homology_dim_oracle(&x, i));
            prop_assert_eq!(c.dim_hom_k, a.dim_hom_k + b.dim_hom_k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn verify_is_deterministic(seed in any::<u64>(), f in any::<u8>(), n in 2usize..=4) {
        let cfg = GenConfig::new(seed, field_of(f), n, 6, 2).unwrap();
        let sel = Selection::default();
        let a = run_verify(&cfg, &sel).unwrap();
        let b = run_verify(&cfg, &sel).unwrap();
        prop_assert_eq!(a.body(), b.body());
        prop_assert_eq!(a.failures(), 0);
    }
}
