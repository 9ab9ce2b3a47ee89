//! Dense complex linear algebra: vectors/matrices, LU and column-pivoted QR,
//! Schur decomposition, matrix exponential flows, subspaces, and
//! eigenstructure (clusters, chains, multiplicities, invariant splits).

pub mod expm;
pub mod factor;
pub mod schur;
pub mod spectral;
pub mod subspace;
pub mod types;

pub use expm::{expm, flow_apply, Flow};
pub use factor::{orthonormalize, solve, Cpqr, Lu};
pub use schur::{reorder, schur, unitarity_defect, Schur};
pub use spectral::{
    eigen_spectrum, invariant_split, multiplicities, Cluster, EigenChain, InvariantSplit,
    SpectralData,
};
pub use subspace::{distance_to_subspace, SubspaceBasis};
pub use types::{c, CMatrix, CVector, C64};
