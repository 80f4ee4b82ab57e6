//! Shared fixtures for the criterion benchmarks.

use equivar_core::{
    natural_action, permutation_rep, ActionCoalgebra, GroupKind, ReynoldsAlgebra,
};

/// The dihedral-4 permutation pair used by most benchmarks: big enough to
/// expose the group-order factor, small enough to iterate quickly.
pub fn d4_pair() -> (ActionCoalgebra, ReynoldsAlgebra) {
    let action = natural_action(GroupKind::Dihedral, 4).expect("built-in");
    let rep = permutation_rep(&action).expect("natural action is an action");
    (
        ActionCoalgebra::new(rep.clone()).expect("permutation rep is exact"),
        ReynoldsAlgebra::new(rep).expect("permutation rep is exact"),
    )
}
