//! Spectral analysis and dominance certification for closed convex cones in
//! finite-dimensional complex spaces.
//!
//! The crate provides, in dependency order:
//!
//! - [`linalg`]: dense complex linear algebra (Schur form, matrix
//!   exponentials, eigenstructure with Jordan chains, invariant splits);
//! - [`cones`]: cone descriptions (orthants, polyhedral cones, complexified
//!   and transformed cones, restrictions to invariant subspaces) with
//!   membership, interior, alignment, and intersection queries;
//! - [`positivity`]: certified positivity and rotational strong positivity of
//!   operators relative to a cone;
//! - [`dynamics`]: linear flows, cone-invariance monitoring, and asymptotic
//!   growth profiles;
//! - [`theorems`]: end-to-end certification of dominant-eigenpair structure,
//!   splitting coherence, and counterexample searches;
//! - [`families`]: seeded generators of structured test instances.
//!
//! All randomness flows through [`rng`] (a counter-based generator with
//! stable cross-platform output) and every tolerance is carried explicitly by
//! [`config::ToleranceProfile`]; identical inputs yield identical reports.

pub mod cones;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod linalg;
pub mod positivity;
pub mod rng;
pub mod theorems;

pub use config::ToleranceProfile;
pub use error::{Error, Result};
