//! Finite groups as validated multiplication tables, plus linear
//! representations by dense matrices.
//!
//! A group of order `m` is stored as an `m x m` table of element indices
//! with the identity pinned at index 0. Products are O(1) lookups and every
//! group axiom is checkable by an exhaustive loop, which is what the
//! validators here do.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::DenseMatrix;

/// Largest `n` accepted by [`GroupTable::symmetric`]; keeps the table at
/// 120 x 120 and exhaustive axiom checks fast.
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("group parameter n must be at least 1, got {0}")]
    DegreeTooSmall(usize),
    #[error("symmetric group degree {0} exceeds the cap of {MAX_SYMMETRIC_DEGREE}")]
    SymmetricDegreeTooLarge(usize),
    #[error("multiplication table is not square: row {row} has {got} entries, expected {expected}")]
    NotSquare {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("empty multiplication table")]
    Empty,
    #[error("closure violated: entry ({g}, {h}) = {value} is not an element index")]
    NotClosed { g: usize, h: usize, value: usize },
    #[error("identity violated: element 0 is not an identity, witness mul({g}, {h}) = {got}")]
    NoIdentity { g: usize, h: usize, got: usize },
    #[error("associativity violated at ({g}, {h}, {k}): ({g}{h}){k} = {left} but {g}({h}{k}) = {right}")]
    NotAssociative {
        g: usize,
        h: usize,
        k: usize,
        left: usize,
        right: usize,
    },
    #[error("no inverse for element {0}")]
    NoInverse(usize),
    #[error("malformed group table file: {0}")]
    Malformed(String),
    #[error("representation dimension mismatch: matrix for element {element} is {rows}x{cols}, expected {dim}x{dim}")]
    RepDimension {
        element: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("expected {expected} matrices (one per group element), got {got}")]
    RepCount { expected: usize, got: usize },
    #[error("group is not cyclic with elements ordered as generator powers")]
    NotCyclic,
}

/// Which built-in family to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic,
    Dihedral,
    Symmetric,
}

impl std::str::FromStr for GroupKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cyclic" => Ok(GroupKind::Cyclic),
            "dihedral" => Ok(GroupKind::Dihedral),
            "symmetric" => Ok(GroupKind::Symmetric),
            other => Err(format!(
                "unknown group kind '{other}' (expected cyclic, dihedral, or symmetric)"
            )),
        }
    }
}

/// A finite group given by its multiplication table.
///
/// Element 0 is always the identity. `mul` is stored row-major, so
/// `mul[g * m + h]` is the product `g * h`; `inv[g]` is the inverse of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl GroupTable {
    /// Identity element index, by construction.
    pub const IDENTITY: usize = 0;

    /// Cyclic group of order `n`; element `i` is the `i`-th power of the
    /// generator, so multiplication is addition mod `n`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::DegreeTooSmall(n));
        }
        let mul = (0..n)
            .flat_map(|g| (0..n).map(move |h| (g + h) % n))
            .collect();
        let inv = (0..n).map(|g| (n - g) % n).collect();
        Ok(GroupTable { order: n, mul, inv })
    }

    /// Dihedral group of order `2n`: rotations first (indices `0..n`), then
    /// reflections (indices `n..2n`). Index `a` is the rotation `r^a`, index
    /// `n + a` is the reflection `r^a s`, with `s r = r^{-1} s`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::DegreeTooSmall(n));
        }
        let m = 2 * n;
        let decode = |i: usize| (i % n, i / n); // (rotation power, reflection bit)
        let encode = |a: usize, e: usize| a + e * n;
        let mut mul = vec![0usize; m * m];
        for g in 0..m {
            let (a1, e1) = decode(g);
            for h in 0..m {
                let (a2, e2) = decode(h);
                // (r^a1 s^e1)(r^a2 s^e2) = r^(a1 + (-1)^e1 a2) s^(e1 xor e2)
                let a = if e1 == 0 {
                    (a1 + a2) % n
                } else {
                    (a1 + n - a2) % n
                };
                mul[g * m + h] = encode(a, e1 ^ e2);
            }
        }
        let inv = (0..m)
            .map(|g| {
                let (a, e) = decode(g);
                if e == 0 {
                    encode((n - a) % n, 0)
                } else {
                    g // reflections are involutions
                }
            })
            .collect();
        Ok(GroupTable { order: m, mul, inv })
    }

    /// Symmetric group on `n` letters, elements ordered as lexicographic
    /// permutations. Capped at `n = 5` to keep exhaustive checks fast.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::DegreeTooSmall(n));
        }
        if n > MAX_SYMMETRIC_DEGREE {
            return Err(GroupError::SymmetricDegreeTooLarge(n));
        }
        let perms = lex_permutations(n);
        let m = perms.len();
        let index_of: std::collections::HashMap<&[usize], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let mut mul = vec![0usize; m * m];
        for (gi, g) in perms.iter().enumerate() {
            for (hi, h) in perms.iter().enumerate() {
                // Composition g . h acts as x -> g(h(x)).
                let composed: Vec<usize> = (0..n).map(|x| g[h[x]]).collect();
                mul[gi * m + hi] = index_of[composed.as_slice()];
            }
        }
        let mut inv = vec![0usize; m];
        for (gi, g) in perms.iter().enumerate() {
            let mut p = vec![0usize; n];
            for (x, &gx) in g.iter().enumerate() {
                p[gx] = x;
            }
            inv[gi] = index_of[p.as_slice()];
        }
        Ok(GroupTable { order: m, mul, inv })
    }

    /// Validates a raw multiplication table against all four group axioms
    /// and computes inverses. On failure the first violated axiom is
    /// reported together with a witness.
    pub fn from_table(raw: &[Vec<usize>]) -> Result<Self, GroupError> {
        let m = raw.len();
        if m == 0 {
            return Err(GroupError::Empty);
        }
        for (row, entries) in raw.iter().enumerate() {
            if entries.len() != m {
                return Err(GroupError::NotSquare {
                    row,
                    got: entries.len(),
                    expected: m,
                });
            }
        }
        // Closure.
        for (g, row) in raw.iter().enumerate() {
            for (h, &value) in row.iter().enumerate() {
                if value >= m {
                    return Err(GroupError::NotClosed { g, h, value });
                }
            }
        }
        // Identity at index 0.
        for (g, row) in raw.iter().enumerate() {
            if raw[0][g] != g {
                return Err(GroupError::NoIdentity {
                    g: 0,
                    h: g,
                    got: raw[0][g],
                });
            }
            if row[0] != g {
                return Err(GroupError::NoIdentity {
                    g,
                    h: 0,
                    got: row[0],
                });
            }
        }
        // Associativity, exhaustively.
        for g in 0..m {
            for h in 0..m {
                for k in 0..m {
                    let left = raw[raw[g][h]][k];
                    let right = raw[g][raw[h][k]];
                    if left != right {
                        return Err(GroupError::NotAssociative {
                            g,
                            h,
                            k,
                            left,
                            right,
                        });
                    }
                }
            }
        }
        // Two-sided inverses.
        let mut inv = vec![0usize; m];
        for g in 0..m {
            match (0..m).find(|&h| raw[g][h] == 0 && raw[h][g] == 0) {
                Some(h) => inv[g] = h,
                None => return Err(GroupError::NoInverse(g)),
            }
        }
        let mul = raw.iter().flatten().copied().collect();
        Ok(GroupTable { order: m, mul, inv })
    }

    /// Parses the plain-text table format: first line the order `m`, then
    /// `m` lines of `m` space-separated element indices.
    pub fn from_table_text(text: &str) -> Result<Self, GroupError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines.next().ok_or_else(|| {
            GroupError::Malformed("missing order line".to_string())
        })?;
        let m: usize = first
            .trim()
            .parse()
            .map_err(|_| GroupError::Malformed(format!("invalid order line '{}'", first.trim())))?;
        let mut raw = Vec::with_capacity(m);
        for i in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| GroupError::Malformed(format!("missing table row {i}")))?;
            let row: Result<Vec<usize>, _> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| GroupError::Malformed(format!("invalid index '{tok}' in row {i}")))
                })
                .collect();
            raw.push(row?);
        }
        GroupTable::from_table(&raw)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Product `g * h`.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn into_shared(self) -> Arc<GroupTable> {
        Arc::new(self)
    }
}

/// Dispatches to the built-in constructors.
pub fn build_group(kind: GroupKind, n: usize) -> Result<GroupTable, GroupError> {
    match kind {
        GroupKind::Cyclic => GroupTable::cyclic(n),
        GroupKind::Dihedral => GroupTable::dihedral(n),
        GroupKind::Symmetric => GroupTable::symmetric(n),
    }
}

/// All permutations of `0..n` in lexicographic order; the identity comes first.
pub(crate) fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A linear representation: one invertible dense matrix per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRep {
    group: Arc<GroupTable>,
    dim: usize,
    matrices: Vec<DenseMatrix>,
    orthogonal: bool,
}

impl LinearRep {
    /// Wraps raw matrices as a representation. Checks the shape contract
    /// (one `dim x dim` matrix per element) but not the homomorphism law;
    /// use [`LinearRep::max_residual`] for that.
    pub fn new(
        group: Arc<GroupTable>,
        dim: usize,
        matrices: Vec<DenseMatrix>,
        orthogonal: bool,
    ) -> Result<Self, GroupError> {
        if matrices.len() != group.order() {
            return Err(GroupError::RepCount {
                expected: group.order(),
                got: matrices.len(),
            });
        }
        for (element, m) in matrices.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(GroupError::RepDimension {
                    element,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
        }
        Ok(LinearRep {
            group,
            dim,
            matrices,
            orthogonal,
        })
    }

    /// Left-regular representation: `rho(g)` permutes basis vectors by left
    /// multiplication, `rho(g) e_h = e_{gh}`. Always orthogonal.
    pub fn regular(group: Arc<GroupTable>) -> Self {
        let m = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut mtx = DenseMatrix::zeros(m, m);
                for h in 0..m {
                    mtx.set(group.mul(g, h), h, 1.0);
                }
                mtx
            })
            .collect();
        LinearRep {
            group,
            dim: m,
            matrices,
            orthogonal: true,
        }
    }

    /// Planar rotation representation of a cyclic group: element `k` acts as
    /// rotation by `2 pi k / n`. Requires the table to be cyclic with
    /// elements ordered as powers of the generator (the [`GroupTable::cyclic`]
    /// ordering).
    pub fn rotation_2d(group: Arc<GroupTable>) -> Result<Self, GroupError> {
        let n = group.order();
        // Element 1 must generate, with g^k sitting at index k.
        let mut power = GroupTable::IDENTITY;
        for k in 0..n {
            if power != k {
                return Err(GroupError::NotCyclic);
            }
            power = group.mul(if n > 1 { 1 } else { 0 }, power);
        }
        let matrices = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let (s, c) = theta.sin_cos();
                DenseMatrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap()
            })
            .collect();
        Ok(LinearRep {
            group,
            dim: 2,
            matrices,
            orthogonal: true,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &DenseMatrix {
        &self.matrices[g]
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    /// Maximum entrywise residual over all representation laws:
    /// `rho(g) rho(h) = rho(gh)` for all pairs, `rho(1) = I`,
    /// `rho(g) rho(g^-1) = I`, and `rho(g)^T rho(g) = I` when the
    /// orthogonal flag is set. Built-in permutation constructions return
    /// exactly 0.
    pub fn max_residual(&self) -> f64 {
        let eye = DenseMatrix::identity(self.dim);
        let mut residual = self.matrices[GroupTable::IDENTITY].sub(&eye).max_abs();
        for g in self.group.elements() {
            let inv_product = self.matrices[g]
                .matmul(&self.matrices[self.group.inv(g)])
                .expect("dims checked at construction");
            residual = residual.max(inv_product.sub(&eye).max_abs());
            if self.orthogonal {
                let gram = self.matrices[g]
                    .transpose()
                    .matmul(&self.matrices[g])
                    .expect("dims checked at construction");
                residual = residual.max(gram.sub(&eye).max_abs());
            }
            for h in self.group.elements() {
                let product = self.matrices[g]
                    .matmul(&self.matrices[h])
                    .expect("dims checked at construction");
                residual = residual.max(product.sub(self.matrix(self.group.mul(g, h))).max_abs());
            }
        }
        residual
    }
}
