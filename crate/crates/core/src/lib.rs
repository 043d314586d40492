//! Exact computations with n-th differential modules.
//!
//! An n-th differential module is a finite-dimensional vector space over
//! GF(p) or the rationals with an endomorphism `eps` satisfying `eps^n = 0`;
//! equivalently a finitely generated module over `k[t]/(t^n)`. The crate
//! builds the augmenting functor and its adjunctions, the homotopy category
//! (null-homotopies, shift, cones, homology and its long exact sequence) and
//! the derived category at finite scale (quasi-isomorphisms, minimal models,
//! compact generators), all with exact arithmetic and explicit witnesses.
//!
//! Over a field every object is a direct sum of Jordan blocks `J_a`
//! (`1 <= a <= n`). The blocks of size `n` are exactly the projective
//! (equivalently injective, equivalently acyclic) objects, and every object
//! is K-projective, so derived Hom spaces are computed in the homotopy
//! category directly.

pub mod category;
pub mod derived;
pub mod error;
pub mod exactla;
pub mod harness;
pub mod homotopy;

pub use category::{DiffMorphism, DiffObject, JordanType, ShortExactSeq};
pub use error::{Error, Result};
pub use exactla::{FieldSpec, Matrix, Scalar, Subspace};
