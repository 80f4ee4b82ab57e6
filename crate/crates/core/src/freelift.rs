//! The free-vector-space functor on finite sets and the lifting of set
//! coalgebras to linear ones.
//!
//! A finite carrier `A` embeds into its free vector space through the basis
//! inclusion `a -> e_a`. A coalgebra table `alpha: A -> A^G` then lifts to a
//! linear map `V(A) -> V(A)^G` by sending `e_a` to the block vector with
//! block `g = e_{g . a}` and extending linearly. The checkers here verify
//! the two commuting squares that make the basis inclusion an equivariant
//! embedding: the lifted structure agrees with the set-level structure on
//! basis vectors, and repacking a formal sum of functions pointwise agrees
//! with embedding the function directly. Everything is 0/1 arithmetic, so
//! all comparisons are exact.

use thiserror::Error;

use crate::linalg::{DenseMatrix, DenseVector};
use crate::setcoalg::SetCoalgebra;

#[derive(Debug, Error, PartialEq)]
pub enum FreeLiftError {
    #[error("base element {index} is out of range for base size {base_size}")]
    IndexOutOfRange { index: usize, base_size: usize },
    #[error("function value {value} at domain point {point} is outside the codomain of size {codomain_size}")]
    ValueOutOfRange {
        point: usize,
        value: usize,
        codomain_size: usize,
    },
    #[error("term {term} has domain size {got}, expected {expected}")]
    InconsistentDomain {
        term: usize,
        got: usize,
        expected: usize,
    },
    #[error("term {term} has codomain size {got}, expected {expected}")]
    InconsistentCodomain {
        term: usize,
        got: usize,
        expected: usize,
    },
}

/// Witness that the lifted structure disagrees with the set-level one on a
/// basis vector.
#[derive(Debug, Error, PartialEq)]
#[error("lifted structure of e_{element} at group element {group_element} is not e_{{{group_element} . {element}}}")]
pub struct EmbeddingViolation {
    pub element: usize,
    pub group_element: usize,
}

/// Witness that the repacking identity fails on the handler of an element.
#[derive(Debug, Error, PartialEq)]
#[error("compatibility identity fails on the input handler of element {element} at group element {group_element}")]
pub struct CompatibilityViolation {
    pub element: usize,
    pub group_element: usize,
}

/// An element of the free vector space on a finite base: one real
/// coefficient per base element.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeVector {
    coeffs: Vec<f64>,
}

impl FreeVector {
    /// The basis vector `e_a`; the unit of the free/forgetful adjunction at
    /// the element `a`.
    pub fn basis(index: usize, base_size: usize) -> Result<Self, FreeLiftError> {
        if index >= base_size {
            return Err(FreeLiftError::IndexOutOfRange { index, base_size });
        }
        let mut coeffs = vec![0.0; base_size];
        coeffs[index] = 1.0;
        Ok(FreeVector { coeffs })
    }

    pub fn zeros(base_size: usize) -> Self {
        FreeVector {
            coeffs: vec![0.0; base_size],
        }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        FreeVector { coeffs }
    }

    pub fn base_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, a: usize) -> f64 {
        self.coeffs[a]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn add(&self, other: &FreeVector) -> FreeVector {
        assert_eq!(self.base_size(), other.base_size());
        FreeVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> FreeVector {
        FreeVector {
            coeffs: self.coeffs.iter().map(|a| c * a).collect(),
        }
    }
}

/// A function between finite sets, tabulated: `values[x]` is the image of
/// the domain point `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    values: Vec<usize>,
    codomain_size: usize,
}

impl FunctionTable {
    pub fn new(values: Vec<usize>, codomain_size: usize) -> Result<Self, FreeLiftError> {
        for (point, &value) in values.iter().enumerate() {
            if value >= codomain_size {
                return Err(FreeLiftError::ValueOutOfRange {
                    point,
                    value,
                    codomain_size,
                });
            }
        }
        Ok(FunctionTable {
            values,
            codomain_size,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain_size
    }

    pub fn value(&self, x: usize) -> usize {
        self.values[x]
    }
}

/// A formal real-linear combination of functions `X -> A`; an element of
/// the free vector space on the function set `A^X`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalFunctionSum {
    domain_size: usize,
    codomain_size: usize,
    terms: Vec<(f64, FunctionTable)>,
}

impl FormalFunctionSum {
    /// The empty sum needs its shape declared explicitly.
    pub fn new(
        domain_size: usize,
        codomain_size: usize,
        terms: Vec<(f64, FunctionTable)>,
    ) -> Result<Self, FreeLiftError> {
        for (i, (_, f)) in terms.iter().enumerate() {
            if f.domain_size() != domain_size {
                return Err(FreeLiftError::InconsistentDomain {
                    term: i,
                    got: f.domain_size(),
                    expected: domain_size,
                });
            }
            if f.codomain_size() != codomain_size {
                return Err(FreeLiftError::InconsistentCodomain {
                    term: i,
                    got: f.codomain_size(),
                    expected: codomain_size,
                });
            }
        }
        Ok(FormalFunctionSum {
            domain_size,
            codomain_size,
            terms,
        })
    }

    pub fn single(f: FunctionTable) -> Self {
        FormalFunctionSum {
            domain_size: f.domain_size(),
            codomain_size: f.codomain_size(),
            terms: vec![(1.0, f)],
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn terms(&self) -> &[(f64, FunctionTable)] {
        &self.terms
    }

    /// Repacks the formal sum of functions into a function to formal sums:
    /// the result at `x` is `sum_i c_i e_{f_i(x)}`. In particular a single
    /// embedded function comes back as itself, pointwise embedded.
    pub fn repack(&self) -> Vec<FreeVector> {
        (0..self.domain_size)
            .map(|x| {
                let mut acc = FreeVector::zeros(self.codomain_size);
                for (c, f) in &self.terms {
                    acc = acc.add(&FreeVector::basis(f.value(x), self.codomain_size)
                        .expect("values validated at construction")
                        .scale(*c));
                }
                acc
            })
            .collect()
    }
}

/// Lifts a set coalgebra to the linear coalgebra on the free vector space:
/// the `(m |A|) x |A|` matrix, in block order, sending `e_a` to the block
/// vector with block `g = e_{g . a}`. Works for any well-typed table, not
/// just group actions.
pub fn lift_coalgebra(coalg: &SetCoalgebra) -> DenseMatrix {
    let a_size = coalg.carrier_size();
    let m = coalg.group().order();
    let mut out = DenseMatrix::zeros(m * a_size, a_size);
    for a in 0..a_size {
        for g in 0..m {
            out.set(g * a_size + coalg.entry(a, g), a, 1.0);
        }
    }
    out
}

/// Verifies that the basis inclusion is an equivariant map into the lifted
/// coalgebra: for every `a` and `g`, applying the lifted matrix to `e_a`
/// must put `e_{g . a}` in block `g`. Exact 0/1 comparison.
pub fn check_embedding_equivariance(coalg: &SetCoalgebra) -> Result<(), EmbeddingViolation> {
    let a_size = coalg.carrier_size();
    let lifted = lift_coalgebra(coalg);
    for a in 0..a_size {
        let e_a = DenseVector::from_fn(a_size, |i| if i == a { 1.0 } else { 0.0 });
        let image = lifted.matvec(&e_a).expect("shape fixed by construction");
        for g in coalg.group().elements() {
            let expected = FreeVector::basis(coalg.entry(a, g), a_size)
                .expect("table entries are carrier indices");
            for i in 0..a_size {
                if image.entry(g * a_size + i) != expected.coeff(i) {
                    return Err(EmbeddingViolation {
                        element: a,
                        group_element: g,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Verifies the compatibility identity between the embedding and the two
/// repackaging transformations, pointwise on the input handlers of the
/// coalgebra: embedding the handler of `a` blockwise must equal embedding
/// it as a single formal term and then repacking.
pub fn check_compatibility_identity(coalg: &SetCoalgebra) -> Result<(), CompatibilityViolation> {
    let a_size = coalg.carrier_size();
    let m = coalg.group().order();
    for a in 0..a_size {
        // The handler of a: the function G -> A, g -> g . a.
        let handler: Vec<usize> = coalg.group().elements().map(|g| coalg.entry(a, g)).collect();

        // Left side: embed each value directly, one free vector per g.
        let direct: Vec<FreeVector> = handler
            .iter()
            .map(|&v| FreeVector::basis(v, a_size).expect("table entries are carrier indices"))
            .collect();

        // Right side: embed the handler as a single formal term, repack
        // (and apply the identity repackaging on the outside).
        let table = FunctionTable::new(handler, a_size).expect("table entries are carrier indices");
        let repacked = FormalFunctionSum::single(table).repack();

        for g in 0..m {
            if direct[g] != repacked[g] {
                return Err(CompatibilityViolation {
                    element: a,
                    group_element: g,
                });
            }
        }
    }
    Ok(())
}
