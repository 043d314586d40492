//! The category of n-th differential objects over a field.

mod functor;
mod idempotent;
mod jordan;
mod object;
mod projective;
mod ses;

pub use functor::{
    adjoint_phi, adjoint_phi_inv, adjoint_psi, adjoint_psi_inv, augment, augment_morphism,
};
pub use idempotent::{split_idempotent, SplitIdempotent};
pub(crate) use jordan::canonical_hom_basis;
pub use jordan::{
    hom_space_basis, jordan_basis, jordan_block, jordan_type, JordanBasis, JordanType,
};
pub use object::{
    biproduct, direct_sum, direct_sum_all, direct_sum_morphism, hom_space_basis_dense, Biproduct,
    DiffMorphism, DiffObject,
};
pub use projective::{is_projective, lift_through, extend_along, ProjectiveWitness};
pub use ses::{check_ses, coshift, ses_inj, ses_proj, shift, ShortExactSeq};
