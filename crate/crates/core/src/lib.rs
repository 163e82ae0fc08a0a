//! Exact computations for the algebraic obstructions attached to spin
//! 4-manifolds with a given fundamental group: group homology, the `d²`
//! differentials of the spin bordism spectral sequence, the map `A` into the
//! Tate group of sesquilinear forms, evenness of hermitian forms over `ℤ[G]`,
//! and Whitehead's `Γ` on `π₂` of the presentation complex.

pub mod amap;
pub mod chains;
pub mod forms;
pub mod gamma;
pub mod groupring;
pub mod groups;
pub mod homology;
pub mod matrix;
pub mod report;
pub mod serial;
pub mod steenrod;
