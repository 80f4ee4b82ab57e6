//! Shallow-network fitting on sampled boxes, symmetrization of trained
//! nets, and the explicit factorization of a symmetrized net into an
//! equivariant vector network.
//!
//! Fitting uses random features: the inner layer `P x + b` is drawn once
//! from a seeded generator and frozen, and only the outer layer `Q` is
//! solved for by ridge regression. Widening the hidden layer drives the
//! approximation error down, which is all the harness needs. Everything is
//! deterministic for a fixed seed.
//!
//! A fitted net `x -> Q sigma(P x + b)` symmetrizes into the group average
//! `(1/|G|) sum_g rho_W(g^{-1}) Q sigma(P rho_V(g) x + b)`, and that
//! average factors exactly into a single wide net whose hidden units are
//! vector neurons: unit `j` carries one copy of neuron `j` per group
//! element, laid out at flat index `j * m + g`. [`to_vector_net`] builds
//! the factored weights; its output agrees with the direct group average to
//! machine precision, which the tests pin down.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::comonad::{symmetrize, ActionCoalgebra, ComonadError, ReynoldsAlgebra};
use crate::group::{GroupTable, LinearRep};
use crate::linalg::{ridge_solve, DenseMatrix, DenseVector, LinalgError};

#[derive(Debug, Error)]
pub enum NetsError {
    #[error("box bound {index} has lower {lower} above upper {upper}")]
    InvalidBounds {
        index: usize,
        lower: f64,
        upper: f64,
    },
    #[error("sample must contain at least one point")]
    EmptySample,
    #[error("sample count must be at least 1")]
    ZeroCount,
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("point {index} has dimension {got}, expected {expected}")]
    PointDim {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("operands live over different groups")]
    GroupMismatch,
    #[error("ridge solve failed: {0}")]
    Solver(#[from] LinalgError),
    #[error(transparent)]
    Comonad(#[from] ComonadError),
}

/// Activations usable in the fitted nets: continuous and non-polynomial,
/// as the density theorem requires. The catalog is closed because
/// non-polynomiality of arbitrary user functions is not checkable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Relu,
    Sigmoid,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Relu => x.max(0.0),
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tanh" => Ok(Activation::Tanh),
            "relu" => Ok(Activation::Relu),
            "sigmoid" => Ok(Activation::Sigmoid),
            other => Err(format!(
                "unknown activation '{other}' (expected tanh, relu, or sigmoid)"
            )),
        }
    }
}

/// A finite point cloud standing in for a compact subset of `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactSample {
    dim: usize,
    points: Vec<DenseVector>,
}

impl CompactSample {
    pub fn new(dim: usize, points: Vec<DenseVector>) -> Result<Self, NetsError> {
        if points.is_empty() {
            return Err(NetsError::EmptySample);
        }
        for (index, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(NetsError::PointDim {
                    index,
                    got: p.dim(),
                    expected: dim,
                });
            }
        }
        Ok(CompactSample { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DenseVector] {
        &self.points
    }
}

/// Draws `count` points uniformly from an axis-aligned box, one coordinate
/// interval per dimension. The generator is ChaCha8 seeded directly, so
/// identical seeds give identical samples.
pub fn sample_box(
    bounds: &[(f64, f64)],
    count: usize,
    seed: u64,
) -> Result<CompactSample, NetsError> {
    if count == 0 {
        return Err(NetsError::ZeroCount);
    }
    for (index, &(lower, upper)) in bounds.iter().enumerate() {
        if lower > upper || !lower.is_finite() || !upper.is_finite() {
            return Err(NetsError::InvalidBounds {
                index,
                lower,
                upper,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = bounds.len();
    let points = (0..count)
        .map(|_| {
            DenseVector::from_fn(dim, |i| {
                let (lower, upper) = bounds[i];
                lower + (upper - lower) * rng.gen::<f64>()
            })
        })
        .collect();
    CompactSample::new(dim, points)
}

/// The symmetrized sample: every group translate of every point, in
/// (group index, point index) order, duplicates kept.
pub fn symmetrize_sample(
    sample: &CompactSample,
    rep: &LinearRep,
) -> Result<CompactSample, NetsError> {
    if sample.dim() != rep.dim() {
        return Err(NetsError::DimensionMismatch {
            context: format!(
                "sample dim {} vs representation dim {}",
                sample.dim(),
                rep.dim()
            ),
        });
    }
    let mut points = Vec::with_capacity(rep.group().order() * sample.len());
    for g in rep.group().elements() {
        for x in sample.points() {
            points.push(rep.matrix(g).matvec(x).expect("dims checked"));
        }
    }
    CompactSample::new(sample.dim(), points)
}

/// A shallow net `x -> Q sigma(P x + bias)` with a frozen random inner
/// layer and a ridge-solved outer layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ShallowNet {
    p: DenseMatrix,       // width x n
    bias: DenseVector,    // width
    q: DenseMatrix,       // w x width
    activation: Activation,
}

impl ShallowNet {
    pub fn new(
        p: DenseMatrix,
        bias: DenseVector,
        q: DenseMatrix,
        activation: Activation,
    ) -> Result<Self, NetsError> {
        if bias.dim() != p.rows() || q.cols() != p.rows() {
            return Err(NetsError::DimensionMismatch {
                context: format!(
                    "inner layer is {}x{}, bias has {}, outer layer is {}x{}",
                    p.rows(),
                    p.cols(),
                    bias.dim(),
                    q.rows(),
                    q.cols()
                ),
            });
        }
        Ok(ShallowNet {
            p,
            bias,
            q,
            activation,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.p.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.q.rows()
    }

    pub fn width(&self) -> usize {
        self.p.rows()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn inner(&self) -> &DenseMatrix {
        &self.p
    }

    pub fn bias(&self) -> &DenseVector {
        &self.bias
    }

    pub fn outer(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn eval(&self, x: &DenseVector) -> Result<DenseVector, NetsError> {
        if x.dim() != self.input_dim() {
            return Err(NetsError::DimensionMismatch {
                context: format!("net input dim {} vs point dim {}", self.input_dim(), x.dim()),
            });
        }
        let hidden = self.p.matvec(x).expect("dims checked").add(&self.bias);
        let activated = DenseVector::from_fn(hidden.dim(), |i| self.activation.apply(hidden.entry(i)));
        Ok(self.q.matvec(&activated).expect("dims checked"))
    }
}

/// One standard normal draw via Box-Muller; two uniforms in, one normal
/// out. Hand-rolled so the stream is pinned to the ChaCha output alone.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Fits a shallow net to a target on a training sample by random features:
/// `P` is drawn entrywise from `N(0, 1) / sqrt(n)` and the bias uniformly
/// from `[-1, 1]`, both from a ChaCha8 stream seeded with `seed`; `Q` comes
/// from ridge regression of the activated features against the target
/// values. Fixed seeds give bit-identical nets.
pub fn fit_random_features<F>(
    target: F,
    train: &CompactSample,
    width: usize,
    activation: Activation,
    ridge_lambda: f64,
    seed: u64,
) -> Result<ShallowNet, NetsError>
where
    F: Fn(&DenseVector) -> DenseVector,
{
    if width == 0 {
        return Err(NetsError::ZeroWidth);
    }
    let n = train.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (n as f64).sqrt();
    let p = {
        let mut entries = Vec::with_capacity(width * n);
        for _ in 0..width * n {
            entries.push(standard_normal(&mut rng) * scale);
        }
        DenseMatrix::new(width, n, entries).expect("shape by construction")
    };
    let bias = DenseVector::from_fn(width, |_| -1.0 + 2.0 * rng.gen::<f64>());

    // Feature matrix: one row of activated hidden units per training point.
    let s = train.len();
    let mut features = DenseMatrix::zeros(s, width);
    let mut targets: Option<DenseMatrix> = None;
    for (r, x) in train.points().iter().enumerate() {
        let hidden = p.matvec(x).expect("dims by construction").add(&bias);
        for j in 0..width {
            features.set(r, j, activation.apply(hidden.entry(j)));
        }
        let y = target(x);
        let t = targets.get_or_insert_with(|| DenseMatrix::zeros(s, y.dim()));
        if y.dim() != t.cols() {
            return Err(NetsError::DimensionMismatch {
                context: format!(
                    "target output dim changed from {} to {} at point {}",
                    t.cols(),
                    y.dim(),
                    r
                ),
            });
        }
        for j in 0..y.dim() {
            t.set(r, j, y.entry(j));
        }
    }
    let targets = targets.expect("sample is nonempty");
    let solution = ridge_solve(&features, &targets, ridge_lambda)?; // width x w
    let q = solution.transpose();
    ShallowNet::new(p, bias, q, activation)
}

/// The factored equivariant network `Q' sigma(P' x + b')` with vector
/// neurons: hidden unit `j` carries one scalar per group element at flat
/// index `j * m + g`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorNet {
    group: Arc<GroupTable>,
    p_prime: DenseMatrix,    // (m d) x n
    bias_prime: DenseVector, // m d
    q_prime: DenseMatrix,    // w x (m d)
    activation: Activation,
}

impl VectorNet {
    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn input_dim(&self) -> usize {
        self.p_prime.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.q_prime.rows()
    }

    /// Number of vector neurons (each of block size `|G|`).
    pub fn width(&self) -> usize {
        self.p_prime.rows() / self.group.order()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn inner(&self) -> &DenseMatrix {
        &self.p_prime
    }

    pub fn bias(&self) -> &DenseVector {
        &self.bias_prime
    }

    pub fn outer(&self) -> &DenseMatrix {
        &self.q_prime
    }

    /// Evaluates `Q' sigma(P' x + b')`; the blockwise activation of this
    /// functor coincides with coordinatewise application.
    pub fn eval(&self, x: &DenseVector) -> Result<DenseVector, NetsError> {
        if x.dim() != self.input_dim() {
            return Err(NetsError::DimensionMismatch {
                context: format!(
                    "vector net input dim {} vs point dim {}",
                    self.input_dim(),
                    x.dim()
                ),
            });
        }
        let hidden = self
            .p_prime
            .matvec(x)
            .expect("dims checked")
            .add(&self.bias_prime);
        let activated =
            DenseVector::from_fn(hidden.dim(), |i| self.activation.apply(hidden.entry(i)));
        Ok(self.q_prime.matvec(&activated).expect("dims checked"))
    }
}

/// Factors the symmetrization of a shallow net into explicit vector-net
/// weights:
///
/// - row `(j, g)` of `P'` is row `j` of `P rho_V(g)`,
/// - `b'(j, g) = b(j)` (the same affine map is applied to every block),
/// - column `(j, g)` of `Q'` is `(1/m) rho_W(g^{-1})` applied to column `j`
///   of `Q`.
///
/// The result computes exactly the group average of the net.
pub fn to_vector_net(
    net: &ShallowNet,
    alpha: &ActionCoalgebra,
    gamma: &ReynoldsAlgebra,
) -> Result<VectorNet, NetsError> {
    if alpha.group() != gamma.group() {
        return Err(NetsError::GroupMismatch);
    }
    if alpha.rep().dim() != net.input_dim() || gamma.rep().dim() != net.output_dim() {
        return Err(NetsError::DimensionMismatch {
            context: format!(
                "net is {} -> {}, action dim {}, Reynolds dim {}",
                net.input_dim(),
                net.output_dim(),
                alpha.rep().dim(),
                gamma.rep().dim()
            ),
        });
    }
    let group = Arc::clone(alpha.group());
    let m = group.order();
    let d = net.width();
    let n = net.input_dim();
    let w = net.output_dim();
    let inv_m = 1.0 / m as f64;

    let mut p_prime = DenseMatrix::zeros(m * d, n);
    let mut bias_entries = vec![0.0; m * d];
    for j in 0..d {
        for g in 0..m {
            let flat = j * m + g;
            let rho = alpha.rep().matrix(g);
            for col in 0..n {
                // (P rho(g))[j, col] = sum_k P[j, k] rho(g)[k, col]
                let mut s = 0.0;
                for k in 0..n {
                    s += net.inner().entry(j, k) * rho.entry(k, col);
                }
                p_prime.set(flat, col, s);
            }
            bias_entries[flat] = net.bias().entry(j);
        }
    }
    let bias_prime = DenseVector::new(bias_entries);

    let mut q_prime = DenseMatrix::zeros(w, m * d);
    for j in 0..d {
        let q_col = DenseVector::from_fn(w, |row| net.outer().entry(row, j));
        for g in 0..m {
            let flat = j * m + g;
            let pulled = gamma
                .rep()
                .matrix(group.inv(g))
                .matvec(&q_col)
                .expect("dims checked");
            for row in 0..w {
                q_prime.set(row, flat, inv_m * pulled.entry(row));
            }
        }
    }

    Ok(VectorNet {
        group,
        p_prime,
        bias_prime,
        q_prime,
        activation: net.activation(),
    })
}

/// Max deviation from equivariance over a point sample:
/// `max_{x, g} || f(rho_in(g) x) - rho_out(g) f(x) ||_2`.
pub fn equivariance_residual<F>(
    f: F,
    rep_in: &LinearRep,
    rep_out: &LinearRep,
    points: &CompactSample,
) -> Result<f64, NetsError>
where
    F: Fn(&DenseVector) -> DenseVector,
{
    if rep_in.group() != rep_out.group() {
        return Err(NetsError::GroupMismatch);
    }
    if points.dim() != rep_in.dim() {
        return Err(NetsError::DimensionMismatch {
            context: format!(
                "points have dim {}, input representation has dim {}",
                points.dim(),
                rep_in.dim()
            ),
        });
    }
    let mut worst = 0.0f64;
    for x in points.points() {
        let fx = f(x);
        if fx.dim() != rep_out.dim() {
            return Err(NetsError::DimensionMismatch {
                context: format!(
                    "f output has dim {}, output representation has dim {}",
                    fx.dim(),
                    rep_out.dim()
                ),
            });
        }
        for g in rep_in.group().elements() {
            let lhs = f(&rep_in.matrix(g).matvec(x).expect("dims checked"));
            let rhs = rep_out.matrix(g).matvec(&fx).expect("dims checked");
            worst = worst.max(lhs.sub(&rhs).norm());
        }
    }
    Ok(worst)
}

/// Symmetrizes a net's evaluation map directly; the oracle that
/// [`to_vector_net`] is checked against.
pub fn symmetrized_eval<'a>(
    net: &'a ShallowNet,
    alpha: &ActionCoalgebra,
    gamma: &ReynoldsAlgebra,
) -> Result<impl Fn(&DenseVector) -> DenseVector + 'a, NetsError> {
    Ok(symmetrize(
        move |x: &DenseVector| net.eval(x).expect("dims fixed at construction"),
        alpha,
        gamma,
    )?)
}
