//! The three experiment runners behind the CLI subcommands.
//!
//! Exit-code contract: 0 when every check passes, 1 when a mathematical
//! check fails (with the witness or residual in the message), 2 for
//! configuration and usage problems. Runners write their reports to a
//! caller-supplied writer so tests can capture them.

use std::io::Write;
use std::sync::Arc;

use equivar_core::{
    check_compatibility_identity, check_embedding_equivariance, comodule_law_residual,
    comonad_law_residual, equivariance_residual, fit_random_features, left_inverse_residual,
    lift_coalgebra, sample_box, sup_distance, symmetrize_sample, verify_homomorphism, Activation,
    BlockVector, CompactSample, DenseVector, GroupTable, SetCoalgebra,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::ExperimentConfig;
use crate::setup::{resolve_action, resolve_setup, resolve_target, Setup};

/// Residual gate for the law suite.
pub const LAW_TOLERANCE: f64 = 1e-9;

/// How many random samples each law check draws.
const LAW_SAMPLES: usize = 20;

/// CSV header for the `uat` subcommand, columns in contract order.
pub const UAT_CSV_HEADER: &str =
    "width,train_err_K,f_err_Khat,l_err_Khat,equiv_residual,transfer_ratio,seed";

#[derive(Debug, Error)]
pub enum RunError {
    /// Configuration or usage problem; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A mathematical check failed; exit code 1.
    #[error("{0}")]
    Check(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Check(_) => 1,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from the config seed and a stream tag;
/// every width gets `sub_seed(seed, width)`, the train and test samples use
/// the two reserved tags below.
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

/// Stream tag of the training sample.
pub const TRAIN_STREAM: u64 = u64::MAX;
/// Stream tag of the held-out test sample.
pub const TEST_STREAM: u64 = u64::MAX - 1;

fn random_vectors(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<DenseVector> {
    (0..count)
        .map(|_| DenseVector::from_fn(dim, |_| rng.gen_range(-1.0..1.0)))
        .collect()
}

fn random_block_vectors(
    group: &Arc<GroupTable>,
    dim: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<BlockVector> {
    (0..count)
        .map(|_| {
            let blocks = (0..group.order())
                .map(|_| DenseVector::from_fn(dim, |_| rng.gen_range(-1.0..1.0)))
                .collect();
            BlockVector::new(Arc::clone(group), blocks).expect("shapes by construction")
        })
        .collect()
}

fn parse_activation(name: &str) -> Result<Activation, RunError> {
    name.parse::<Activation>().map_err(RunError::Usage)
}

/// Runs every law suite for the configured group and prints one residual or
/// verdict per check. Fails (exit 1) on the first residual above
/// [`LAW_TOLERANCE`] or the first violated discrete law.
pub fn run_laws(config: &ExperimentConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let setup = resolve_setup(config)?;
    let Setup {
        group,
        kind,
        alpha,
        gamma,
    } = &setup;
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, 0));
    let mut worst = 0.0f64;
    let mut report = |out: &mut dyn Write, name: &str, residual: f64| -> Result<(), RunError> {
        writeln!(out, "{name:<42} {residual:e}").map_err(io_usage)?;
        if residual > LAW_TOLERANCE {
            return Err(RunError::Check(format!(
                "{name} residual {residual:e} exceeds {LAW_TOLERANCE:e}"
            )));
        }
        worst = worst.max(residual);
        Ok(())
    };

    writeln!(out, "law suite for group of order {}", group.order()).map_err(io_usage)?;

    report(out, "rep_in validation", alpha.rep().max_residual())?;
    report(out, "rep_out validation", gamma.rep().max_residual())?;

    let dim_in = alpha.rep().dim();
    let dim_out = gamma.rep().dim();
    // The comonad laws are pure index arithmetic, so their residual does not
    // depend on the block dimension; cap it to keep large regular reps cheap.
    let samples = random_block_vectors(group, dim_in.min(5), LAW_SAMPLES, &mut rng);
    report(out, "comonad laws (coassociativity + counit)", comonad_law_residual(&samples))?;

    let vecs_in = random_vectors(dim_in, LAW_SAMPLES, &mut rng);
    report(out, "comodule laws (rep_in)", comodule_law_residual(alpha, &vecs_in))?;

    let gamma_as_action = equivar_core::ActionCoalgebra::new(gamma.rep().clone())
        .map_err(|e| RunError::Check(format!("codomain representation rejected: {e}")))?;
    let vecs_out = random_vectors(dim_out, LAW_SAMPLES, &mut rng);
    report(
        out,
        "comodule laws (rep_out)",
        comodule_law_residual(&gamma_as_action, &vecs_out),
    )?;

    let alpha_reynolds = equivar_core::ReynoldsAlgebra::new(alpha.rep().clone())
        .map_err(|e| RunError::Check(format!("domain representation rejected: {e}")))?;
    let blocks_in = random_block_vectors(group, dim_in, LAW_SAMPLES, &mut rng);
    let residual = left_inverse_residual(alpha, &alpha_reynolds, &vecs_in, &blocks_in)
        .map_err(|e| RunError::Check(e.to_string()))?;
    report(out, "left inverse (rep_in space)", residual)?;

    let blocks_out = random_block_vectors(group, dim_out, LAW_SAMPLES, &mut rng);
    let residual = left_inverse_residual(&gamma_as_action, gamma, &vecs_out, &blocks_out)
        .map_err(|e| RunError::Check(e.to_string()))?;
    report(out, "left inverse (rep_out space)", residual)?;

    // Set-level suites on the regular action (and the natural one when the
    // group came from a built-in family).
    let mut actions = vec![("regular action", SetCoalgebra::regular(Arc::clone(group)))];
    if let Some((kind, n)) = kind {
        let natural = equivar_core::natural_action(*kind, *n)
            .map_err(|e| RunError::Usage(e.to_string()))?;
        actions.push(("natural action", natural));
    }
    for (name, action) in &actions {
        action
            .verify_group_action()
            .map_err(|w| RunError::Check(format!("{name}: {w}")))?;
        writeln!(out, "{:<42} ok", format!("action laws ({name})")).map_err(io_usage)?;

        for orbit in action
            .orbits()
            .map_err(|e| RunError::Check(e.to_string()))?
        {
            action
                .verify_invariant_subset(&orbit)
                .map_err(|w| RunError::Check(format!("{name} orbit {orbit:?}: {w}")))?;
        }
        writeln!(out, "{:<42} ok", format!("orbits invariant ({name})")).map_err(io_usage)?;

        let identity: Vec<usize> = (0..action.carrier_size()).collect();
        verify_homomorphism(&identity, action, action)
            .map_err(|w| RunError::Check(format!("{name} identity map: {w}")))?;
        writeln!(out, "{:<42} ok", format!("identity homomorphism ({name})")).map_err(io_usage)?;

        check_embedding_equivariance(action)
            .map_err(|w| RunError::Check(format!("{name}: {w}")))?;
        check_compatibility_identity(action)
            .map_err(|w| RunError::Check(format!("{name}: {w}")))?;
        writeln!(out, "{:<42} ok", format!("free lifting squares ({name})")).map_err(io_usage)?;
    }

    // Right translations are equivariant maps of the regular action.
    let regular = &actions[0].1;
    for c in group.elements() {
        let f: Vec<usize> = group.elements().map(|a| group.mul(a, c)).collect();
        verify_homomorphism(&f, regular, regular)
            .map_err(|w| RunError::Check(format!("right translation by {c}: {w}")))?;
    }
    writeln!(out, "{:<42} ok", "right-translation homomorphisms").map_err(io_usage)?;

    writeln!(
        out,
        "PASS: all residuals at or below {LAW_TOLERANCE:e} (worst {worst:e})"
    )
    .map_err(io_usage)?;
    Ok(())
}

/// One row of the convergence report.
#[derive(Debug, Clone, PartialEq)]
pub struct UatRow {
    pub width: usize,
    pub train_err_k: f64,
    pub f_err_khat: f64,
    pub l_err_khat: f64,
    pub equiv_residual: f64,
    pub transfer_ratio: f64,
    pub seed: u64,
}

impl UatRow {
    /// CSV line; floats use the shortest representation that parses back
    /// to the same value.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.width,
            self.train_err_k,
            self.f_err_khat,
            self.l_err_khat,
            self.equiv_residual,
            self.transfer_ratio,
            self.seed
        )
    }
}

/// Fits one net per width, factors each into an equivariant vector net,
/// and reports errors on the symmetrized held-out sample.
pub fn compute_uat_rows(config: &ExperimentConfig) -> Result<Vec<UatRow>, RunError> {
    let setup = resolve_setup(config)?;
    let activation = parse_activation(&config.activation)?;
    let target = resolve_target(&config.target, &setup.alpha, &setup.gamma)?;

    let dim_in = setup.alpha.rep().dim();
    if config.bounds.len() != dim_in {
        return Err(RunError::Usage(format!(
            "bounds have dimension {}, domain representation has dimension {dim_in}",
            config.bounds.len()
        )));
    }
    let bounds: Vec<(f64, f64)> = config.bounds.iter().map(|b| (b[0], b[1])).collect();
    let train = sample_box(&bounds, config.train_count, sub_seed(config.seed, TRAIN_STREAM))
        .map_err(|e| RunError::Usage(e.to_string()))?;
    let test = sample_box(&bounds, config.test_count, sub_seed(config.seed, TEST_STREAM))
        .map_err(|e| RunError::Usage(e.to_string()))?;
    let test_sym = symmetrize_sample(&test, setup.alpha.rep())
        .map_err(|e| RunError::Usage(e.to_string()))?;

    let mut rows = Vec::with_capacity(config.widths.len());
    for &width in &config.widths {
        let seed = sub_seed(config.seed, width as u64);
        let net = fit_random_features(&target, &train, width, activation, config.ridge_lambda, seed)
            .map_err(|e| RunError::Check(format!("fit at width {width} failed: {e}")))?;
        let vnet = equivar_core::to_vector_net(&net, &setup.alpha, &setup.gamma)
            .map_err(|e| RunError::Check(format!("factorization at width {width} failed: {e}")))?;

        let eval_net = |x: &DenseVector| net.eval(x).expect("dims fixed");
        let eval_vnet = |x: &DenseVector| vnet.eval(x).expect("dims fixed");

        let train_err_k =
            sup_distance(&target, eval_net, train.points()).map_err(check_err)?;
        let f_err_khat =
            sup_distance(&target, eval_net, test_sym.points()).map_err(check_err)?;
        let l_err_khat =
            sup_distance(&target, eval_vnet, test_sym.points()).map_err(check_err)?;
        let equiv_residual = equivariance_residual(
            eval_vnet,
            setup.alpha.rep(),
            setup.gamma.rep(),
            &test_sym,
        )
        .map_err(|e| RunError::Check(e.to_string()))?;
        let transfer_ratio = if f_err_khat > 0.0 {
            l_err_khat / f_err_khat
        } else {
            0.0
        };
        rows.push(UatRow {
            width,
            train_err_k,
            f_err_khat,
            l_err_khat,
            equiv_residual,
            transfer_ratio,
            seed,
        });
    }
    Ok(rows)
}

/// The `uat` subcommand: CSV on the writer, header first, one row per
/// width in config order.
pub fn run_uat(config: &ExperimentConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let rows = compute_uat_rows(config)?;
    writeln!(out, "{UAT_CSV_HEADER}").map_err(io_usage)?;
    for row in &rows {
        writeln!(out, "{}", row.to_csv()).map_err(io_usage)?;
    }
    Ok(())
}

/// The `lift-demo` subcommand: builds the configured finite action, lifts
/// it to the free vector space, prints the lifted blocks, and verifies the
/// embedding and compatibility squares.
pub fn run_lift_demo(config: &ExperimentConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let (group, kind) = crate::setup::resolve_group(&config.group)?;
    let action = resolve_action(&config.action, &group, kind)?;
    action
        .verify_group_action()
        .map_err(|w| RunError::Check(format!("action table is not a group action: {w}")))?;

    let carrier = action.carrier_size();
    writeln!(
        out,
        "lifting a carrier of size {carrier} over a group of order {}",
        group.order()
    )
    .map_err(io_usage)?;
    let lifted = lift_coalgebra(&action);
    for g in group.elements() {
        writeln!(out, "block {g}{}:", if g == 0 { " (identity)" } else { "" })
            .map_err(io_usage)?;
        for row in 0..carrier {
            let line: Vec<String> = (0..carrier)
                .map(|col| format!("{}", lifted.entry(g * carrier + row, col)))
                .collect();
            writeln!(out, "  {}", line.join(" ")).map_err(io_usage)?;
        }
    }

    check_embedding_equivariance(&action)
        .map_err(|w| RunError::Check(w.to_string()))?;
    writeln!(out, "embedding equivariance: ok").map_err(io_usage)?;
    check_compatibility_identity(&action)
        .map_err(|w| RunError::Check(w.to_string()))?;
    writeln!(out, "compatibility identity: ok").map_err(io_usage)?;
    writeln!(out, "PASS").map_err(io_usage)?;
    Ok(())
}

fn io_usage(e: std::io::Error) -> RunError {
    RunError::Usage(format!("cannot write report: {e}"))
}

fn check_err(e: equivar_core::LinalgError) -> RunError {
    RunError::Check(e.to_string())
}

/// Scale factor `1 + max ||f(x)||` over a sample, for relative residual
/// gates.
pub fn output_scale<F>(f: F, points: &CompactSample) -> f64
where
    F: Fn(&DenseVector) -> DenseVector,
{
    1.0 + points
        .points()
        .iter()
        .fold(0.0f64, |m, x| m.max(f(x).norm()))
}
