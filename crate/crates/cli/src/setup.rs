//! Resolution of config fields into live objects: groups, representations,
//! actions, and the builtin target catalog.
//!
//! Failures split by exit-code semantics: unreadable files, unknown names,
//! and shape mismatches are usage errors (exit 2); a group table or action
//! table that parses but violates its mathematical laws is a failed check
//! (exit 1) and reports the witness.

use std::str::FromStr;
use std::sync::Arc;

use equivar_core::{
    build_group, natural_action, permutation_rep, symmetrize, ActionCoalgebra, DenseVector,
    GroupError, GroupKind, GroupTable, LinearRep, ReynoldsAlgebra, SetCoalgebra,
};

use crate::config::{ActionSpec, ExperimentConfig, GroupSpec};
use crate::runner::RunError;

/// A config resolved to live objects.
pub struct Setup {
    pub group: Arc<GroupTable>,
    /// Built-in family and degree, when the group was not table-loaded.
    pub kind: Option<(GroupKind, usize)>,
    pub alpha: ActionCoalgebra,
    pub gamma: ReynoldsAlgebra,
}

/// A resolved group together with its built-in family, when it has one.
pub type ResolvedGroup = (Arc<GroupTable>, Option<(GroupKind, usize)>);

pub fn resolve_group(spec: &GroupSpec) -> Result<ResolvedGroup, RunError> {
    match spec {
        GroupSpec::Kind { kind, n } => {
            let kind = GroupKind::from_str(kind).map_err(RunError::Usage)?;
            let group = build_group(kind, *n).map_err(|e| RunError::Usage(e.to_string()))?;
            Ok((group.into_shared(), Some((kind, *n))))
        }
        GroupSpec::Table { table } => {
            let text = std::fs::read_to_string(table).map_err(|e| {
                RunError::Usage(format!("cannot read group table {}: {e}", table.display()))
            })?;
            let group = GroupTable::from_table_text(&text).map_err(|e| match e {
                // Unparseable text is a usage problem; a parseable table
                // that fails a group axiom is a failed mathematical check.
                GroupError::Malformed(_) => RunError::Usage(e.to_string()),
                other => RunError::Check(format!("group table rejected: {other}")),
            })?;
            Ok((group.into_shared(), None))
        }
    }
}

/// Resolves a representation name over a group. `permutation` uses the
/// natural action of a built-in family and falls back to the regular
/// (left-translation) action for table-loaded groups.
pub fn resolve_rep(
    name: &str,
    group: &Arc<GroupTable>,
    kind: Option<(GroupKind, usize)>,
) -> Result<LinearRep, RunError> {
    match name {
        "permutation" => match kind {
            Some((kind, n)) => {
                let action = natural_action(kind, n)
                    .map_err(|e| RunError::Usage(e.to_string()))?;
                permutation_rep(&action).map_err(|e| RunError::Check(e.to_string()))
            }
            None => Ok(LinearRep::regular(Arc::clone(group))),
        },
        "regular" => Ok(LinearRep::regular(Arc::clone(group))),
        "rotation2d" => LinearRep::rotation_2d(Arc::clone(group))
            .map_err(|e| RunError::Usage(format!("rotation2d rep unavailable: {e}"))),
        other => Err(RunError::Usage(format!(
            "unknown representation '{other}' (expected permutation, regular, or rotation2d)"
        ))),
    }
}

pub fn resolve_setup(config: &ExperimentConfig) -> Result<Setup, RunError> {
    let (group, kind) = resolve_group(&config.group)?;
    let rep_in = resolve_rep(&config.rep_in, &group, kind)?;
    let rep_out = resolve_rep(&config.rep_out, &group, kind)?;
    let alpha = ActionCoalgebra::new(rep_in)
        .map_err(|e| RunError::Check(format!("domain representation rejected: {e}")))?;
    let gamma = ReynoldsAlgebra::new(rep_out)
        .map_err(|e| RunError::Check(format!("codomain representation rejected: {e}")))?;
    Ok(Setup {
        group,
        kind,
        alpha,
        gamma,
    })
}

/// Resolves the finite action used by the lifting demo.
pub fn resolve_action(
    spec: &ActionSpec,
    group: &Arc<GroupTable>,
    kind: Option<(GroupKind, usize)>,
) -> Result<SetCoalgebra, RunError> {
    match spec {
        ActionSpec::Named(name) => match name.as_str() {
            "regular" => Ok(SetCoalgebra::regular(Arc::clone(group))),
            "natural" => match kind {
                Some((kind, n)) => {
                    natural_action(kind, n).map_err(|e| RunError::Usage(e.to_string()))
                }
                None => Ok(SetCoalgebra::regular(Arc::clone(group))),
            },
            other => Err(RunError::Usage(format!(
                "unknown action '{other}' (expected natural, regular, or an explicit table)"
            ))),
        },
        ActionSpec::Table(rows) => SetCoalgebra::from_rows(Arc::clone(group), rows)
            .map_err(|e| RunError::Usage(format!("action table rejected: {e}"))),
    }
}

/// A heap-allocated target function.
pub type Target = Box<dyn Fn(&DenseVector) -> DenseVector>;

/// Builtin target catalog.
///
/// - `swap_poly`: `(x, y) -> (xy + x, xy + y)`, equivariant under the
///   coordinate swap on both sides;
/// - `perm_meanshift`: `x_i -> x_i^2 + mean(x)`, equivariant under any
///   coordinate permutation;
/// - `symmetrized:<name>`: any builtin pushed through the symmetrization
///   operator for the configured representations, hence equivariant for
///   every configured group.
pub fn resolve_target(
    spec: &str,
    alpha: &ActionCoalgebra,
    gamma: &ReynoldsAlgebra,
) -> Result<Target, RunError> {
    if let Some(inner) = spec.strip_prefix("symmetrized:") {
        let raw = resolve_target(inner, alpha, gamma)?;
        let wrapped = symmetrize(move |x: &DenseVector| raw(x), alpha, gamma)
            .map_err(|e| RunError::Usage(format!("cannot symmetrize target: {e}")))?;
        return Ok(Box::new(wrapped));
    }
    let dim_in = alpha.rep().dim();
    let dim_out = gamma.rep().dim();
    match spec {
        "swap_poly" => {
            if dim_in != 2 || dim_out != 2 {
                return Err(RunError::Usage(format!(
                    "target swap_poly needs 2-dimensional representations, got {dim_in} -> {dim_out}"
                )));
            }
            Ok(Box::new(|v: &DenseVector| {
                let (x, y) = (v.entry(0), v.entry(1));
                DenseVector::new(vec![x * y + x, x * y + y])
            }))
        }
        "perm_meanshift" => {
            if dim_in != dim_out {
                return Err(RunError::Usage(format!(
                    "target perm_meanshift needs equal dimensions, got {dim_in} -> {dim_out}"
                )));
            }
            Ok(Box::new(|v: &DenseVector| {
                let n = v.dim();
                let mean = v.iter().sum::<f64>() / n as f64;
                DenseVector::from_fn(n, |i| v.entry(i) * v.entry(i) + mean)
            }))
        }
        other => Err(RunError::Usage(format!("unknown target '{other}'"))),
    }
}
