//! The group-action comonad on finite-dimensional spaces and its
//! symmetrization machinery.
//!
//! For a finite group `G` of order `m`, the functor `E(V) = V^G` sends a
//! space to one block of dimension `dim V` per group element. This module
//! carries the comonad structure on `E` (comultiplication `duplicate`,
//! counit `extract`), the action coalgebra `beta(x)(g) = g x`, its Reynolds
//! left inverse `gamma(phi) = (1/|G|) sum_g g^{-1} phi(g)`, residual-based
//! checkers for the comonad/comodule/left-inverse laws, and the
//! symmetrization operator
//!
//! ```text
//! symmetrize(f)(x) = (1/|G|) sum_g g^{-1} f(g x)
//! ```
//!
//! whose image is exactly the equivariant maps. Group elements are always
//! visited in index order, so every averaged result is deterministic.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{GroupTable, LinearRep};
use crate::linalg::DenseVector;

/// Tolerance a representation must meet before it may back an
/// [`ActionCoalgebra`] or [`ReynoldsAlgebra`].
pub const REP_RESIDUAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ComonadError {
    #[error("expected {expected} blocks (one per group element), got {got}")]
    BlockCount { expected: usize, got: usize },
    #[error("block {index} has dimension {got}, expected {expected}")]
    BlockDim {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("vector has dimension {got}, expected {expected}")]
    VectorDim { got: usize, expected: usize },
    #[error("representation fails its laws with residual {residual:.3e} (tolerance {REP_RESIDUAL_TOLERANCE:.0e})")]
    InvalidRep { residual: f64 },
    #[error("operands live over different groups")]
    GroupMismatch,
    #[error("coalgebra and algebra act on different spaces ({left} vs {right})")]
    SpaceMismatch { left: usize, right: usize },
}

/// An element of `E(V) = V^G`: one dense block per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    group: Arc<GroupTable>,
    dim: usize,
    blocks: Vec<DenseVector>,
}

impl BlockVector {
    pub fn new(group: Arc<GroupTable>, blocks: Vec<DenseVector>) -> Result<Self, ComonadError> {
        if blocks.len() != group.order() {
            return Err(ComonadError::BlockCount {
                expected: group.order(),
                got: blocks.len(),
            });
        }
        let dim = blocks[0].dim();
        for (index, b) in blocks.iter().enumerate() {
            if b.dim() != dim {
                return Err(ComonadError::BlockDim {
                    index,
                    got: b.dim(),
                    expected: dim,
                });
            }
        }
        Ok(BlockVector { group, dim, blocks })
    }

    pub fn zeros(group: Arc<GroupTable>, dim: usize) -> Self {
        let blocks = vec![DenseVector::zeros(dim); group.order()];
        BlockVector { group, dim, blocks }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The block at group element `g`, i.e. `phi(g)`.
    pub fn block(&self, g: usize) -> &DenseVector {
        &self.blocks[g]
    }

    pub fn blocks(&self) -> &[DenseVector] {
        &self.blocks
    }

    /// The functor on morphisms: applies `f` to every block (`E(f)` at this
    /// point). The map must send all blocks to a single output dimension.
    pub fn map_blocks(&self, f: impl Fn(&DenseVector) -> DenseVector) -> BlockVector {
        let blocks: Vec<DenseVector> = self.blocks.iter().map(f).collect();
        let dim = blocks[0].dim();
        assert!(
            blocks.iter().all(|b| b.dim() == dim),
            "map_blocks: image dimensions disagree across blocks"
        );
        BlockVector {
            group: Arc::clone(&self.group),
            dim,
            blocks,
        }
    }

    /// Comultiplication `delta: E(V) -> EE(V)`, defined by
    /// `delta(phi)(g)(h) = phi(h g)`.
    pub fn duplicate(&self) -> BlockGrid {
        let m = self.group.order();
        let mut entries = Vec::with_capacity(m * m);
        for g in 0..m {
            for h in 0..m {
                entries.push(self.blocks[self.group.mul(h, g)].clone());
            }
        }
        BlockGrid {
            group: Arc::clone(&self.group),
            dim: self.dim,
            entries,
        }
    }

    /// Counit `epsilon: E(V) -> V`, evaluation at the identity.
    pub fn extract(&self) -> DenseVector {
        self.blocks[GroupTable::IDENTITY].clone()
    }

    pub fn add(&self, other: &BlockVector) -> BlockVector {
        assert_eq!(self.group, other.group, "block vector addition groups");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect();
        BlockVector {
            group: Arc::clone(&self.group),
            dim: self.dim,
            blocks,
        }
    }

    pub fn scale(&self, a: f64) -> BlockVector {
        BlockVector {
            group: Arc::clone(&self.group),
            dim: self.dim,
            blocks: self.blocks.iter().map(|b| b.scale(a)).collect(),
        }
    }

    /// Largest absolute entry across all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |m, b| m.max(b.max_abs()))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &BlockVector) -> f64 {
        let mut worst = 0.0f64;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            for (x, y) in a.iter().zip(b.iter()) {
                worst = worst.max((x - y).abs());
            }
        }
        worst
    }
}

/// An element of `EE(V) = (V^G)^G`: an `m x m` grid of blocks, entry
/// `(g, h)` holding `phi(g)(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    group: Arc<GroupTable>,
    dim: usize,
    entries: Vec<DenseVector>, // m * m, row-major in (g, h)
}

impl BlockGrid {
    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, g: usize, h: usize) -> &DenseVector {
        &self.entries[g * self.group.order() + h]
    }

    /// Row `g` of the grid as a block vector (the value `phi(g) in E(V)`).
    pub fn row(&self, g: usize) -> BlockVector {
        let m = self.group.order();
        BlockVector {
            group: Arc::clone(&self.group),
            dim: self.dim,
            blocks: self.entries[g * m..(g + 1) * m].to_vec(),
        }
    }
}

/// The coalgebra side of a linear group action: `beta(x)(g) = rho(g) x`.
/// Construction validates the representation laws to the shared tolerance.
#[derive(Debug, Clone)]
pub struct ActionCoalgebra {
    rep: LinearRep,
}

impl ActionCoalgebra {
    pub fn new(rep: LinearRep) -> Result<Self, ComonadError> {
        let residual = rep.max_residual();
        if residual > REP_RESIDUAL_TOLERANCE {
            return Err(ComonadError::InvalidRep { residual });
        }
        Ok(ActionCoalgebra { rep })
    }

    /// Wraps without validating; for tests that need a broken action.
    pub fn new_unchecked(rep: LinearRep) -> Self {
        ActionCoalgebra { rep }
    }

    pub fn rep(&self) -> &LinearRep {
        &self.rep
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.rep.group()
    }

    /// The structure map `beta` at `x`: collects the whole orbit
    /// `g -> rho(g) x` as a block vector.
    pub fn orbit(&self, x: &DenseVector) -> Result<BlockVector, ComonadError> {
        if x.dim() != self.rep.dim() {
            return Err(ComonadError::VectorDim {
                got: x.dim(),
                expected: self.rep.dim(),
            });
        }
        let blocks = self
            .group()
            .elements()
            .map(|g| self.rep.matrix(g).matvec(x).expect("dims checked"))
            .collect();
        Ok(BlockVector {
            group: Arc::clone(self.group()),
            dim: self.rep.dim(),
            blocks,
        })
    }
}

/// The algebra side: the Reynolds average
/// `gamma(phi) = (1/|G|) sum_g rho(g^{-1}) phi(g)`, a left inverse of the
/// orbit coalgebra over the same representation.
#[derive(Debug, Clone)]
pub struct ReynoldsAlgebra {
    rep: LinearRep,
}

impl ReynoldsAlgebra {
    pub fn new(rep: LinearRep) -> Result<Self, ComonadError> {
        let residual = rep.max_residual();
        if residual > REP_RESIDUAL_TOLERANCE {
            return Err(ComonadError::InvalidRep { residual });
        }
        Ok(ReynoldsAlgebra { rep })
    }

    pub fn new_unchecked(rep: LinearRep) -> Self {
        ReynoldsAlgebra { rep }
    }

    pub fn rep(&self) -> &LinearRep {
        &self.rep
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.rep.group()
    }

    /// Applies the Reynolds average to a block vector. Summation runs in
    /// group-index order and divides by the order once at the end.
    pub fn average(&self, phi: &BlockVector) -> Result<DenseVector, ComonadError> {
        if phi.dim() != self.rep.dim() {
            return Err(ComonadError::VectorDim {
                got: phi.dim(),
                expected: self.rep.dim(),
            });
        }
        if phi.group() != self.group() {
            return Err(ComonadError::GroupMismatch);
        }
        let group = self.group();
        let mut acc = DenseVector::zeros(self.rep.dim());
        for g in group.elements() {
            let pulled = self
                .rep
                .matrix(group.inv(g))
                .matvec(phi.block(g))
                .expect("dims checked");
            acc = acc.add(&pulled);
        }
        Ok(acc.scale(1.0 / group.order() as f64))
    }
}

/// The symmetrization operator `Phi(f) = gamma . E(f) . beta`, pointwise
/// `x -> (1/|G|) sum_g rho_W(g^{-1}) f(rho_V(g) x)`. For any continuous `f`
/// the result is equivariant, and equivariant maps are fixed points.
pub fn symmetrize<F>(
    f: F,
    alpha: &ActionCoalgebra,
    gamma: &ReynoldsAlgebra,
) -> Result<impl Fn(&DenseVector) -> DenseVector, ComonadError>
where
    F: Fn(&DenseVector) -> DenseVector,
{
    if alpha.group() != gamma.group() {
        return Err(ComonadError::GroupMismatch);
    }
    let alpha = alpha.clone();
    let gamma = gamma.clone();
    Ok(move |x: &DenseVector| {
        let orbit = alpha.orbit(x).expect("input dimension matches the action");
        let image = orbit.map_blocks(&f);
        gamma
            .average(&image)
            .expect("f's output dimension matches the Reynolds algebra")
    })
}

/// Max entrywise residual of the three comonad diagrams over the samples:
/// coassociativity `delta_{E(V)} . delta = E(delta) . delta` and the two
/// counit laws `epsilon_{E(V)} . delta = id` and `E(epsilon) . delta = id`.
pub fn comonad_law_residual(samples: &[BlockVector]) -> f64 {
    let mut worst = 0.0f64;
    for phi in samples {
        let group = phi.group();
        let m = group.order();
        let dup = phi.duplicate();

        // delta_{E(V)}(dup) has entry (g, h) = dup-row(h g); E(delta)(dup)
        // has entry (g, h) = delta(dup-row(g))(h). Compare the inner blocks.
        for g in 0..m {
            let row_dup = dup.row(g).duplicate();
            for h in 0..m {
                let left = dup.row(group.mul(h, g));
                let right = row_dup.row(h);
                worst = worst.max(left.max_abs_diff(&right));
            }
        }

        // epsilon_{E(V)} . delta = id: the identity row of the grid is phi.
        worst = worst.max(dup.row(GroupTable::IDENTITY).max_abs_diff(phi));

        // E(epsilon) . delta = id: extracting each row gives back phi(g).
        for g in 0..m {
            let extracted = dup.row(g).extract();
            for (x, y) in extracted.iter().zip(phi.block(g).iter()) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    worst
}

/// Max residual of the comodule laws for the orbit coalgebra over the
/// samples: `delta . beta = E(beta) . beta` and `epsilon . beta = id`.
pub fn comodule_law_residual(alpha: &ActionCoalgebra, samples: &[DenseVector]) -> f64 {
    let mut worst = 0.0f64;
    for x in samples {
        let orbit = alpha.orbit(x).expect("sample dimension matches the action");
        let left = orbit.duplicate();
        let group = alpha.group();
        for g in group.elements() {
            // E(beta)(orbit) at g is beta applied to the g-th block.
            let right = alpha
                .orbit(orbit.block(g))
                .expect("block dimension matches");
            worst = worst.max(left.row(g).max_abs_diff(&right));
        }
        let back = orbit.extract();
        for (a, b) in back.iter().zip(x.iter()) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

/// Max residual of the left-inverse laws: `gamma . beta = id` over the
/// vector samples and `beta . gamma = E(gamma) . delta` over the block
/// samples. The coalgebra and algebra must act on the same space.
pub fn left_inverse_residual(
    alpha: &ActionCoalgebra,
    gamma: &ReynoldsAlgebra,
    vector_samples: &[DenseVector],
    block_samples: &[BlockVector],
) -> Result<f64, ComonadError> {
    if alpha.group() != gamma.group() {
        return Err(ComonadError::GroupMismatch);
    }
    if alpha.rep().dim() != gamma.rep().dim() {
        return Err(ComonadError::SpaceMismatch {
            left: alpha.rep().dim(),
            right: gamma.rep().dim(),
        });
    }
    let mut worst = 0.0f64;
    for x in vector_samples {
        let back = gamma.average(&alpha.orbit(x)?)?;
        for (a, b) in back.iter().zip(x.iter()) {
            worst = worst.max((a - b).abs());
        }
    }
    for phi in block_samples {
        let left = alpha.orbit(&gamma.average(phi)?)?;
        let dup = phi.duplicate();
        let right_blocks: Result<Vec<DenseVector>, ComonadError> = phi
            .group()
            .elements()
            .map(|g| gamma.average(&dup.row(g)))
            .collect();
        let right = BlockVector::new(Arc::clone(phi.group()), right_blocks?)?;
        worst = worst.max(left.max_abs_diff(&right));
    }
    Ok(worst)
}
