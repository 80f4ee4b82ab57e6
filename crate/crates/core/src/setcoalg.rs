//! Coalgebras for the functor `X -> X^G` on finite sets: group-action law
//! checking, equivariant-map (homomorphism) checking, orbits, and invariant
//! subsets.
//!
//! A structure map `alpha: A -> A^G` on a finite carrier is stored as a
//! `|A| x m` table whose `(a, g)` entry is `alpha(a)(g)`, the result of `g`
//! acting on `a`. The table itself only has to be well typed; whether it is
//! a genuine group action is a separate checkable predicate, and all the
//! checkers return a witness on failure rather than a bare boolean.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{build_group, GroupError, GroupKind, GroupTable, LinearRep};
use crate::linalg::DenseMatrix;

/// Largest carrier accepted by [`SetCoalgebra::invariant_subsets`].
pub const MAX_ENUMERATION_CARRIER: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum SetCoalgError {
    #[error("table has {got} entries, expected carrier {carrier} x order {order} = {expected}")]
    BadShape {
        carrier: usize,
        order: usize,
        got: usize,
        expected: usize,
    },
    #[error("entry ({element}, {group_element}) = {value} is not a carrier index (carrier size {carrier})")]
    NotWellTyped {
        element: usize,
        group_element: usize,
        value: usize,
        carrier: usize,
    },
    #[error("carrier size must be at least 1")]
    EmptyCarrier,
    #[error("carrier size {0} exceeds the enumeration cap of {MAX_ENUMERATION_CARRIER}")]
    CarrierTooLarge(usize),
    #[error("subset contains {0}, which is not a carrier index")]
    SubsetOutOfRange(usize),
    #[error("coalgebra is not a group action: {0}")]
    NotAnAction(ActionViolation),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Witness that a table fails the group-action laws.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ActionViolation {
    #[error("identity law fails at element {element}: alpha({element})(1) = {image}")]
    Identity { element: usize, image: usize },
    #[error(
        "composition law fails at (a = {element}, g1 = {g1}, g2 = {g2}): \
         acting stepwise gives {stepwise}, acting by g1*g2 gives {combined}"
    )]
    Composition {
        element: usize,
        g1: usize,
        g2: usize,
        stepwise: usize,
        combined: usize,
    },
}

/// Witness that a carrier map fails the equivariance condition.
#[derive(Debug, Error, PartialEq)]
pub enum HomViolation {
    #[error("source and destination coalgebras live over different groups")]
    GroupMismatch,
    #[error("map has {got} entries, expected {expected} (one per source carrier element)")]
    BadMapLength { expected: usize, got: usize },
    #[error("map sends {element} to {image}, outside the destination carrier")]
    MapOutOfRange { element: usize, image: usize },
    #[error(
        "equivariance fails at (a = {element}, g = {group_element}): \
         f(g . a) = {mapped_image} but g . f(a) = {image_of_mapped}"
    )]
    NotEquivariant {
        element: usize,
        group_element: usize,
        mapped_image: usize,
        image_of_mapped: usize,
    },
}

/// Witness that a subset is not invariant.
#[derive(Debug, Error, PartialEq)]
pub enum SubsetViolation {
    #[error("subset contains {0}, which is not a carrier index")]
    OutOfRange(usize),
    #[error("subset is not invariant: {group_element} . {element} = {image} escapes it")]
    Escapes {
        element: usize,
        group_element: usize,
        image: usize,
    },
}

/// A coalgebra `alpha: A -> A^G` on a finite carrier `{0, .., |A| - 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetCoalgebra {
    group: Arc<GroupTable>,
    carrier_size: usize,
    table: Vec<usize>, // carrier_size x order, row-major
}

impl SetCoalgebra {
    /// Wraps a raw table, checking only well-typedness (every entry is a
    /// carrier index).
    pub fn new(
        group: Arc<GroupTable>,
        carrier_size: usize,
        table: Vec<usize>,
    ) -> Result<Self, SetCoalgError> {
        if carrier_size == 0 {
            return Err(SetCoalgError::EmptyCarrier);
        }
        let order = group.order();
        if table.len() != carrier_size * order {
            return Err(SetCoalgError::BadShape {
                carrier: carrier_size,
                order,
                got: table.len(),
                expected: carrier_size * order,
            });
        }
        for a in 0..carrier_size {
            for g in 0..order {
                let value = table[a * order + g];
                if value >= carrier_size {
                    return Err(SetCoalgError::NotWellTyped {
                        element: a,
                        group_element: g,
                        value,
                        carrier: carrier_size,
                    });
                }
            }
        }
        Ok(SetCoalgebra {
            group,
            carrier_size,
            table,
        })
    }

    /// Builds from one row per carrier element.
    pub fn from_rows(group: Arc<GroupTable>, rows: &[Vec<usize>]) -> Result<Self, SetCoalgError> {
        let carrier_size = rows.len();
        let table = rows.iter().flatten().copied().collect();
        SetCoalgebra::new(group, carrier_size, table)
    }

    /// The left-translation action of a group on itself: `g . a = g a`.
    pub fn regular(group: Arc<GroupTable>) -> Self {
        let m = group.order();
        let table = (0..m)
            .flat_map(|a| {
                let group = Arc::clone(&group);
                (0..m).map(move |g| group.mul(g, a))
            })
            .collect();
        SetCoalgebra {
            group,
            carrier_size: m,
            table,
        }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    /// `alpha(a)(g)`, the image of `a` under `g`.
    pub fn entry(&self, a: usize, g: usize) -> usize {
        self.table[a * self.group.order() + g]
    }

    /// Checks the group-action laws `1 . a = a` and
    /// `g1 . (g2 . a) = (g1 g2) . a` exhaustively, returning the first
    /// violating triple on failure.
    pub fn verify_group_action(&self) -> Result<(), ActionViolation> {
        for a in 0..self.carrier_size {
            let image = self.entry(a, GroupTable::IDENTITY);
            if image != a {
                return Err(ActionViolation::Identity { element: a, image });
            }
        }
        for a in 0..self.carrier_size {
            for g1 in self.group.elements() {
                for g2 in self.group.elements() {
                    let stepwise = self.entry(self.entry(a, g2), g1);
                    let combined = self.entry(a, self.group.mul(g1, g2));
                    if stepwise != combined {
                        return Err(ActionViolation::Composition {
                            element: a,
                            g1,
                            g2,
                            stepwise,
                            combined,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Orbit partition `{ g . a : g in G }`, one block per orbit, each block
    /// ascending and blocks ordered by least element. Requires the table to
    /// be a genuine group action.
    pub fn orbits(&self) -> Result<Vec<Vec<usize>>, SetCoalgError> {
        self.verify_group_action().map_err(SetCoalgError::NotAnAction)?;
        let mut seen = vec![false; self.carrier_size];
        let mut orbits = Vec::new();
        for a in 0..self.carrier_size {
            if seen[a] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.entry(a, g)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                seen[x] = true;
            }
            orbits.push(orbit);
        }
        Ok(orbits)
    }

    /// Checks that a subset is closed under the action (a subuniverse of the
    /// coalgebra), returning the escaping pair on failure.
    pub fn verify_invariant_subset(&self, subset: &[usize]) -> Result<(), SubsetViolation> {
        for &x in subset {
            if x >= self.carrier_size {
                return Err(SubsetViolation::OutOfRange(x));
            }
        }
        let mut member = vec![false; self.carrier_size];
        for &x in subset {
            member[x] = true;
        }
        for &x in subset {
            for g in self.group.elements() {
                let image = self.entry(x, g);
                if !member[image] {
                    return Err(SubsetViolation::Escapes {
                        element: x,
                        group_element: g,
                        image,
                    });
                }
            }
        }
        Ok(())
    }

    /// All invariant subsets (including the empty set), generated as unions
    /// of orbits and returned sorted, each subset ascending and the list in
    /// lexicographic order.
    pub fn invariant_subsets(&self) -> Result<Vec<Vec<usize>>, SetCoalgError> {
        if self.carrier_size > MAX_ENUMERATION_CARRIER {
            return Err(SetCoalgError::CarrierTooLarge(self.carrier_size));
        }
        let orbits = self.orbits()?;
        let k = orbits.len();
        let mut subsets = Vec::with_capacity(1 << k);
        for mask in 0u32..(1 << k) {
            let mut subset = Vec::new();
            for (i, orbit) in orbits.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    subset.extend_from_slice(orbit);
                }
            }
            subset.sort_unstable();
            subsets.push(subset);
        }
        subsets.sort();
        Ok(subsets)
    }
}

/// Checks that a carrier map `f: A -> B` (given as a lookup table) commutes
/// with the two structure maps, i.e. is a coalgebra homomorphism. For group
/// actions this is exactly equivariance: `f(g . a) = g . f(a)`.
pub fn verify_homomorphism(
    map: &[usize],
    src: &SetCoalgebra,
    dst: &SetCoalgebra,
) -> Result<(), HomViolation> {
    if src.group() != dst.group() {
        return Err(HomViolation::GroupMismatch);
    }
    if map.len() != src.carrier_size() {
        return Err(HomViolation::BadMapLength {
            expected: src.carrier_size(),
            got: map.len(),
        });
    }
    for (a, &fa) in map.iter().enumerate() {
        if fa >= dst.carrier_size() {
            return Err(HomViolation::MapOutOfRange {
                element: a,
                image: fa,
            });
        }
    }
    for a in 0..src.carrier_size() {
        for g in src.group().elements() {
            let mapped_image = map[src.entry(a, g)];
            let image_of_mapped = dst.entry(map[a], g);
            if mapped_image != image_of_mapped {
                return Err(HomViolation::NotEquivariant {
                    element: a,
                    group_element: g,
                    mapped_image,
                    image_of_mapped,
                });
            }
        }
    }
    Ok(())
}

/// The permutation representation induced by a group action:
/// `rho(g) e_a = e_{g . a}`, one 0/1 matrix per group element. Fails if the
/// table is not a genuine action.
pub fn permutation_rep(action: &SetCoalgebra) -> Result<LinearRep, SetCoalgError> {
    action
        .verify_group_action()
        .map_err(SetCoalgError::NotAnAction)?;
    let n = action.carrier_size();
    let matrices = action
        .group()
        .elements()
        .map(|g| {
            let mut m = DenseMatrix::zeros(n, n);
            for a in 0..n {
                m.set(action.entry(a, g), a, 1.0);
            }
            m
        })
        .collect();
    Ok(LinearRep::new(Arc::clone(action.group()), n, matrices, true)?)
}

/// The natural action of a built-in group: cyclic groups act on `0..n` by
/// addition, dihedral groups act on the `n` vertices of the polygon, and
/// symmetric groups act on `0..n` by permutation. Builds the group alongside
/// the action so the element ordering always matches.
pub fn natural_action(kind: GroupKind, n: usize) -> Result<SetCoalgebra, SetCoalgError> {
    let group = build_group(kind, n)?.into_shared();
    let coalg = match kind {
        GroupKind::Cyclic => SetCoalgebra::regular(group),
        GroupKind::Dihedral => {
            // Index a < n is the rotation r^a (vertex x -> x + a), index
            // n + a is the reflection r^a s (vertex x -> a - x).
            let rows: Vec<Vec<usize>> = (0..n)
                .map(|x| {
                    group
                        .elements()
                        .map(|g| {
                            let (a, e) = (g % n, g / n);
                            if e == 0 {
                                (x + a) % n
                            } else {
                                (a + n - x) % n
                            }
                        })
                        .collect()
                })
                .collect();
            SetCoalgebra::from_rows(group, &rows)?
        }
        GroupKind::Symmetric => {
            let perms = crate::group::lex_permutations(n);
            let rows: Vec<Vec<usize>> = (0..n)
                .map(|x| perms.iter().map(|p| p[x]).collect())
                .collect();
            SetCoalgebra::from_rows(group, &rows)?
        }
    };
    debug_assert!(coalg.verify_group_action().is_ok());
    Ok(coalg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseVector;

    fn z2_swap_fix_c() -> SetCoalgebra {
        // Z2 swaps {0, 1} and fixes 2.
        let group = GroupTable::cyclic(2).unwrap().into_shared();
        SetCoalgebra::from_rows(group, &[vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap()
    }

    fn trivial_action(group: Arc<GroupTable>, carrier: usize) -> SetCoalgebra {
        let rows: Vec<Vec<usize>> = (0..carrier)
            .map(|a| vec![a; group.order()])
            .collect();
        SetCoalgebra::from_rows(group, &rows).unwrap()
    }

    #[test]
    fn swap_action_satisfies_the_laws() {
        assert_eq!(z2_swap_fix_c().verify_group_action(), Ok(()));
    }

    #[test]
    fn identity_law_violation_yields_witness() {
        let group = GroupTable::cyclic(2).unwrap().into_shared();
        let bad = SetCoalgebra::from_rows(group, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(
            bad.verify_group_action(),
            Err(ActionViolation::Identity {
                element: 0,
                image: 1
            })
        );
    }

    #[test]
    fn addition_mod_four_is_an_action() {
        let group = GroupTable::cyclic(4).unwrap().into_shared();
        let action = SetCoalgebra::regular(group);
        assert_eq!(action.verify_group_action(), Ok(()));
    }

    #[test]
    fn ill_typed_table_rejected() {
        let group = GroupTable::cyclic(2).unwrap().into_shared();
        assert!(matches!(
            SetCoalgebra::from_rows(group, &[vec![0, 7], vec![1, 0]]),
            Err(SetCoalgError::NotWellTyped { value: 7, .. })
        ));
    }

    #[test]
    fn identity_map_is_a_homomorphism() {
        let c = z2_swap_fix_c();
        let id: Vec<usize> = (0..c.carrier_size()).collect();
        assert_eq!(verify_homomorphism(&id, &c, &c), Ok(()));
    }

    #[test]
    fn constant_to_fixed_point_is_equivariant() {
        let group = GroupTable::cyclic(2).unwrap().into_shared();
        let swap = SetCoalgebra::from_rows(Arc::clone(&group), &[vec![0, 1], vec![1, 0]]).unwrap();
        let point = trivial_action(group, 1);
        assert_eq!(verify_homomorphism(&[0, 0], &swap, &point), Ok(()));
    }

    #[test]
    fn constant_to_moved_point_is_not_equivariant() {
        let group = GroupTable::cyclic(2).unwrap().into_shared();
        let swap = SetCoalgebra::from_rows(group, &[vec![0, 1], vec![1, 0]]).unwrap();
        // f == 0, but g . 0 = 1, so f(g . 1) = 0 while g . f(1) = 1.
        let err = verify_homomorphism(&[0, 0], &swap, &swap).unwrap_err();
        assert!(matches!(err, HomViolation::NotEquivariant { .. }));
    }

    #[test]
    fn group_mismatch_detected() {
        let a = SetCoalgebra::regular(GroupTable::cyclic(2).unwrap().into_shared());
        let b = SetCoalgebra::regular(GroupTable::cyclic(3).unwrap().into_shared());
        let id = vec![0, 1];
        assert_eq!(
            verify_homomorphism(&id, &a, &b),
            Err(HomViolation::GroupMismatch)
        );
    }

    #[test]
    fn right_translations_are_equivariant_and_compose() {
        // For the left-translation action, right multiplication by any c is
        // equivariant, and composing two of them is again one.
        let group = GroupTable::symmetric(3).unwrap().into_shared();
        let action = SetCoalgebra::regular(Arc::clone(&group));
        for c in group.elements() {
            let f: Vec<usize> = group.elements().map(|a| group.mul(a, c)).collect();
            assert_eq!(verify_homomorphism(&f, &action, &action), Ok(()));
            for c2 in group.elements() {
                let h: Vec<usize> = group.elements().map(|a| group.mul(a, c2)).collect();
                let composed: Vec<usize> = (0..group.order()).map(|a| h[f[a]]).collect();
                assert_eq!(verify_homomorphism(&composed, &action, &action), Ok(()));
            }
        }
    }

    #[test]
    fn orbit_partition_examples() {
        assert_eq!(z2_swap_fix_c().orbits().unwrap(), vec![vec![0, 1], vec![2]]);

        let group = GroupTable::cyclic(3).unwrap().into_shared();
        let trivial = trivial_action(group, 3);
        assert_eq!(
            trivial.orbits().unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );

        let z4 = SetCoalgebra::regular(GroupTable::cyclic(4).unwrap().into_shared());
        assert_eq!(z4.orbits().unwrap(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn every_orbit_is_invariant() {
        for action in [
            z2_swap_fix_c(),
            SetCoalgebra::regular(GroupTable::symmetric(3).unwrap().into_shared()),
            natural_action(GroupKind::Dihedral, 4).unwrap(),
        ] {
            for orbit in action.orbits().unwrap() {
                assert_eq!(action.verify_invariant_subset(&orbit), Ok(()));
            }
        }
    }

    #[test]
    fn invariant_subset_examples() {
        let c = z2_swap_fix_c();
        assert_eq!(c.verify_invariant_subset(&[0, 1, 2]), Ok(()));
        assert_eq!(
            c.verify_invariant_subset(&[0]),
            Err(SubsetViolation::Escapes {
                element: 0,
                group_element: 1,
                image: 1
            })
        );
        assert_eq!(c.verify_invariant_subset(&[0, 1]), Ok(()));
        assert_eq!(
            c.verify_invariant_subset(&[5]),
            Err(SubsetViolation::OutOfRange(5))
        );
    }

    #[test]
    fn invariant_subset_enumeration_examples() {
        let c = z2_swap_fix_c();
        assert_eq!(
            c.invariant_subsets().unwrap(),
            vec![vec![], vec![0, 1], vec![0, 1, 2], vec![2]]
        );

        let group = GroupTable::cyclic(2).unwrap().into_shared();
        let trivial = trivial_action(group, 2);
        assert_eq!(
            trivial.invariant_subsets().unwrap(),
            vec![vec![], vec![0], vec![0, 1], vec![1]]
        );

        let z4 = SetCoalgebra::regular(GroupTable::cyclic(4).unwrap().into_shared());
        assert_eq!(
            z4.invariant_subsets().unwrap(),
            vec![vec![], vec![0, 1, 2, 3]]
        );
    }

    #[test]
    fn enumeration_matches_brute_force_on_small_actions() {
        for action in [
            z2_swap_fix_c(),
            SetCoalgebra::regular(GroupTable::symmetric(3).unwrap().into_shared()),
            natural_action(GroupKind::Dihedral, 2).unwrap(),
        ] {
            let enumerated = action.invariant_subsets().unwrap();
            let n = action.carrier_size();
            let mut brute = Vec::new();
            for mask in 0u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                if action.verify_invariant_subset(&subset).is_ok() {
                    brute.push(subset);
                }
            }
            brute.sort();
            assert_eq!(enumerated, brute);
        }
    }

    #[test]
    fn permutation_rep_of_swap_and_trivial() {
        let group = GroupTable::cyclic(2).unwrap().into_shared();
        let swap = SetCoalgebra::from_rows(Arc::clone(&group), &[vec![0, 1], vec![1, 0]]).unwrap();
        let rep = permutation_rep(&swap).unwrap();
        assert_eq!(
            rep.matrix(1),
            &DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
        );
        assert_eq!(rep.max_residual(), 0.0);

        let point = trivial_action(group, 1);
        let rep = permutation_rep(&point).unwrap();
        assert_eq!(rep.matrix(1), &DenseMatrix::identity(1));
    }

    #[test]
    fn permutation_rep_of_s3_natural_action() {
        let action = natural_action(GroupKind::Symmetric, 3).unwrap();
        let rep = permutation_rep(&action).unwrap();
        assert_eq!(rep.dim(), 3);
        assert_eq!(rep.max_residual(), 0.0);
        // rho(g) e_a = e_{g . a} for every element, checked directly.
        for g in action.group().elements() {
            for a in 0..3 {
                let e_a = DenseVector::from_fn(3, |i| if i == a { 1.0 } else { 0.0 });
                let image = rep.matrix(g).matvec(&e_a).unwrap();
                let expected = action.entry(a, g);
                for i in 0..3 {
                    assert_eq!(image.entry(i), if i == expected { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn permutation_rep_rejects_non_actions() {
        let group = GroupTable::cyclic(2).unwrap().into_shared();
        let bad = SetCoalgebra::from_rows(group, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(
            permutation_rep(&bad),
            Err(SetCoalgError::NotAnAction(_))
        ));
    }

    #[test]
    fn relabeling_the_carrier_conjugates_the_representation() {
        // Conjugating the action by a carrier permutation conjugates every
        // rho(g) by that permutation matrix.
        let action = natural_action(GroupKind::Dihedral, 4).unwrap();
        let n = action.carrier_size();
        let rep = permutation_rep(&action).unwrap();
        for sigma in crate::group::lex_permutations(n) {
            let mut inv_sigma = vec![0usize; n];
            for (i, &s) in sigma.iter().enumerate() {
                inv_sigma[s] = i;
            }
            let rows: Vec<Vec<usize>> = (0..n)
                .map(|a| {
                    action
                        .group()
                        .elements()
                        .map(|g| sigma[action.entry(inv_sigma[a], g)])
                        .collect()
                })
                .collect();
            let relabeled =
                SetCoalgebra::from_rows(Arc::clone(action.group()), &rows).unwrap();
            let relabeled_rep = permutation_rep(&relabeled).unwrap();
            let mut p = DenseMatrix::zeros(n, n);
            for (i, &s) in sigma.iter().enumerate() {
                p.set(s, i, 1.0);
            }
            for g in action.group().elements() {
                let conjugated = p
                    .matmul(rep.matrix(g))
                    .unwrap()
                    .matmul(&p.transpose())
                    .unwrap();
                assert_eq!(&conjugated, relabeled_rep.matrix(g));
            }
        }
    }

    #[test]
    fn natural_actions_are_actions() {
        for (kind, n) in [
            (GroupKind::Cyclic, 4),
            (GroupKind::Dihedral, 4),
            (GroupKind::Symmetric, 3),
        ] {
            let action = natural_action(kind, n).unwrap();
            assert_eq!(action.verify_group_action(), Ok(()));
            assert_eq!(action.carrier_size(), n);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_table(carrier: usize, order: usize) -> impl Strategy<Value = Vec<usize>> {
            proptest::collection::vec(0..carrier, carrier * order)
        }

        proptest! {
            // Whatever the checker reports must be reproducible from the
            // table itself: witnesses are genuine, never fabricated.
            #[test]
            fn action_witnesses_are_genuine(table in arb_table(4, 4)) {
                let group = GroupTable::cyclic(4).unwrap().into_shared();
                let coalg = SetCoalgebra::new(Arc::clone(&group), 4, table).unwrap();
                match coalg.verify_group_action() {
                    Ok(()) => {
                        for a in 0..4 {
                            prop_assert_eq!(coalg.entry(a, GroupTable::IDENTITY), a);
                        }
                    }
                    Err(ActionViolation::Identity { element, image }) => {
                        prop_assert_eq!(coalg.entry(element, GroupTable::IDENTITY), image);
                        prop_assert_ne!(image, element);
                    }
                    Err(ActionViolation::Composition {
                        element,
                        g1,
                        g2,
                        stepwise,
                        combined,
                    }) => {
                        prop_assert_eq!(coalg.entry(coalg.entry(element, g2), g1), stepwise);
                        prop_assert_eq!(coalg.entry(element, group.mul(g1, g2)), combined);
                        prop_assert_ne!(stepwise, combined);
                    }
                }
            }

            #[test]
            fn subset_witnesses_are_genuine(
                table in arb_table(5, 2),
                mask in 0u32..32,
            ) {
                let group = GroupTable::cyclic(2).unwrap().into_shared();
                let coalg = SetCoalgebra::new(group, 5, table).unwrap();
                let subset: Vec<usize> = (0..5).filter(|&i| mask & (1 << i) != 0).collect();
                match coalg.verify_invariant_subset(&subset) {
                    Ok(()) => {
                        for &x in &subset {
                            for g in coalg.group().elements() {
                                prop_assert!(subset.contains(&coalg.entry(x, g)));
                            }
                        }
                    }
                    Err(SubsetViolation::Escapes { element, group_element, image }) => {
                        prop_assert!(subset.contains(&element));
                        prop_assert_eq!(coalg.entry(element, group_element), image);
                        prop_assert!(!subset.contains(&image));
                    }
                    Err(SubsetViolation::OutOfRange(_)) => prop_assert!(false, "subset in range"),
                }
            }
        }
    }
}
