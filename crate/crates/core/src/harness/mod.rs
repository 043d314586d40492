//! Randomized verification: seeded generators, the DFN-1 text format and
//! the property runner behind `diffn verify`.

pub mod format;
pub mod gen;
pub mod rng;
pub mod verify;

pub use gen::GenConfig;
pub use rng::Rng;
pub use verify::{run_verify, properties, Selection, VerifyReport};
