//! Equivariance for finite groups, organized coalgebraically.
//!
//! The crate models a group action on a finite-dimensional space as a
//! coalgebra for the blockwise functor `E(V) = V^G` and builds everything
//! on top of that structure:
//!
//! - [`group`]: finite groups as validated multiplication tables and their
//!   linear representations;
//! - [`linalg`]: the dense matrix/vector arithmetic and ridge solver the
//!   rest of the crate runs on;
//! - [`setcoalg`]: transition tables `A -> A^G` on finite carriers, with
//!   group-action/equivariance checking, orbits, and invariant subsets;
//! - [`comonad`]: the comonad structure on `E`, the orbit coalgebra and its
//!   Reynolds left inverse, law checkers, and the symmetrization operator;
//! - [`freelift`]: the free-vector-space embedding of finite carriers and
//!   the lifting of set coalgebras to linear ones;
//! - [`nets`]: random-feature fitting of shallow nets and the factorization
//!   of their symmetrizations into equivariant vector networks.

pub mod comonad;
pub mod freelift;
pub mod group;
pub mod linalg;
pub mod nets;
pub mod setcoalg;

pub use comonad::{
    comodule_law_residual, comonad_law_residual, left_inverse_residual, symmetrize,
    ActionCoalgebra, BlockGrid, BlockVector, ComonadError, ReynoldsAlgebra,
};
pub use freelift::{
    check_compatibility_identity, check_embedding_equivariance, lift_coalgebra, FormalFunctionSum,
    FreeLiftError, FreeVector, FunctionTable,
};
pub use group::{build_group, GroupError, GroupKind, GroupTable, LinearRep};
pub use linalg::{ridge_solve, sup_distance, DenseMatrix, DenseVector, LinalgError};
pub use nets::{
    equivariance_residual, fit_random_features, sample_box, symmetrize_sample, symmetrized_eval,
    to_vector_net, Activation, CompactSample, NetsError, ShallowNet, VectorNet,
};
pub use setcoalg::{
    natural_action, permutation_rep, verify_homomorphism, ActionViolation, HomViolation,
    SetCoalgError, SetCoalgebra, SubsetViolation,
};
