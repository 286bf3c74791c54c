//! Verification workbench for reflection spaces and symmetric spaces built from
//! matrix groups with involution.
//!
//! The crate is organized bottom-up:
//!
//! * [`numeric`]: exact rationals, ℚ(√2), fixed-precision reals, small dense
//!   matrices and SPD factorizations.
//! * [`reflection`]: the reflection-space interface, axiom batteries and words in
//!   elementary reflections evaluated as actions.
//! * [`gk`]: the `G/K` construction for `SL_n` with the Cartan involution.
//! * [`hyperbolic`]: shear factorizations, generator words and commutator
//!   identities on the hyperbolic plane.
//! * [`embedding`]: embedded subspaces, restricted transvection groups, central
//!   kernels and the rank-two cocone.
//! * [`suite`]: configuration, suite execution and JSON reports.

pub mod embedding;
pub mod gk;
pub mod hyperbolic;
pub mod numeric;
pub mod par;
pub mod reflection;
pub mod sampling;
pub mod suite;
