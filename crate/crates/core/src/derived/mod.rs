//! The derived category at finite scale.
//!
//! Over a field every finite-dimensional object is K-projective: it splits
//! into blocks `J_i`, the ones with `i < n` are K-projective by the
//! generator computation in [`theta_check`] and the ones with `i = n` are
//! projective. Derived Hom spaces are therefore homotopy Hom spaces and no
//! resolution step is needed.

mod generators;
mod minimal;
mod qiso;

pub use generators::{
    compact_generator, derived_hom_dim, generator_hom_dim, theta_check, zero_detection,
    ThetaCheck, ZeroVerdict,
};
pub use minimal::{homotopy_equivalence, minimal_model, HomotopyEquivalence, MinimalModel};
pub use qiso::{homotopy_section, homotopy_section_minimal, is_quasi_iso, HomotopySection, QisoVerdict};
