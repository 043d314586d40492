//! The homotopy category: morphisms modulo maps of the form
//! `sum_k eps_Y^(n-1-k) s eps_X^k`.

mod homology;
mod les;
mod nullhomotopy;
mod triangle;

pub use homology::{homology, homology_map, is_acyclic, HomologySpace};
pub use les::{les, LongExactWindow};
pub use nullhomotopy::{
    factor_through_projective, hom_k, homotopic, null_homotopy_witness,
    factorization_from_witness, null_homotopy_witness_dense, null_operator,
    witness_from_factorization, HomK,
    HomotopyWitness,
};
pub use triangle::{cone, shift_morphism, Triangle};

pub use crate::category::{coshift, shift};
