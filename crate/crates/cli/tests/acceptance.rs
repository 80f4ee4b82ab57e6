//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantity. Run with `cargo test --test acceptance`
//! (`-- --nocapture` shows the lines for passing tests too).

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equivar_cli::{compute_uat_rows, sub_seed, ExperimentConfig, GroupSpec, TEST_STREAM};
use equivar_core::{
    check_compatibility_identity, check_embedding_equivariance, comodule_law_residual,
    comonad_law_residual, equivariance_residual, fit_random_features, left_inverse_residual,
    natural_action, permutation_rep, sample_box, sup_distance, symmetrize, symmetrize_sample,
    to_vector_net, Activation, ActionCoalgebra, BlockVector, CompactSample, DenseMatrix,
    DenseVector, GroupKind, GroupTable, LinearRep, ReynoldsAlgebra, SetCoalgebra, ShallowNet,
};

/// Built-in groups up to a given order, with names.
fn builtin_groups_up_to(max_order: usize) -> Vec<(String, GroupKind, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.push((format!("Z{n}"), GroupKind::Cyclic, n));
    }
    for n in 1..=max_order / 2 {
        out.push((format!("D{n}"), GroupKind::Dihedral, n));
    }
    let mut fact = 1usize;
    for n in 1..=5 {
        fact *= n;
        if fact > max_order {
            break;
        }
        out.push((format!("S{n}"), GroupKind::Symmetric, n));
    }
    out
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
            BlockVector::new(Arc::clone(group), blocks).unwrap()
        })
        .collect()
}

fn random_vectors(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<DenseVector> {
    (0..count)
        .map(|_| DenseVector::from_fn(dim, |_| rng.gen_range(-1.0..1.0)))
        .collect()
}

fn random_net(input: usize, output: usize, rng: &mut ChaCha8Rng) -> ShallowNet {
    let width = rng.gen_range(4..=32);
    let p = DenseMatrix::from_fn(width, input, |_, _| rng.gen_range(-1.0..1.0));
    let bias = DenseVector::from_fn(width, |_| rng.gen_range(-1.0..1.0));
    let q = DenseMatrix::from_fn(output, width, |_, _| rng.gen_range(-1.0..1.0));
    ShallowNet::new(p, bias, q, Activation::Tanh).unwrap()
}

/// All subgroups of a small group, by exhaustive closure check.
fn subgroups(group: &GroupTable) -> Vec<Vec<usize>> {
    let m = group.order();
    assert!(m <= 16, "subgroup enumeration is for small groups");
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask & 1 == 0 {
            continue; // must contain the identity
        }
        let members: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let closed = members.iter().all(|&a| {
            mask & (1 << group.inv(a)) != 0
                && members.iter().all(|&b| mask & (1 << group.mul(a, b)) != 0)
        });
        if closed {
            out.push(members);
        }
    }
    out
}

/// The action of the group on the left cosets of a subgroup.
fn coset_action(group: &Arc<GroupTable>, subgroup: &[usize]) -> SetCoalgebra {
    let m = group.order();
    let mut coset_of = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for a in 0..m {
        if coset_of[a] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(a);
        for &h in subgroup {
            coset_of[group.mul(a, h)] = idx;
        }
    }
    let rows: Vec<Vec<usize>> = (0..reps.len())
        .map(|c| {
            group
                .elements()
                .map(|g| coset_of[group.mul(g, reps[c])])
                .collect()
        })
        .collect();
    SetCoalgebra::from_rows(Arc::clone(group), &rows).unwrap()
}

/// A random group action: a disjoint union of coset actions on a randomly
/// relabeled carrier. Every finite action decomposes this way, so the
/// family is structurally representative.
fn random_action(group: &Arc<GroupTable>, max_carrier: usize, rng: &mut ChaCha8Rng) -> SetCoalgebra {
    let subs = subgroups(group);
    let m = group.order();
    let target = rng.gen_range(1..=max_carrier);
    let mut rows: Vec<Vec<usize>> = Vec::new();
    while rows.len() < target {
        let remaining = target - rows.len();
        let feasible: Vec<&Vec<usize>> =
            subs.iter().filter(|h| m / h.len() <= remaining).collect();
        let h = feasible[rng.gen_range(0..feasible.len())];
        let block = coset_action(group, h);
        let offset = rows.len();
        for a in 0..block.carrier_size() {
            rows.push(
                group
                    .elements()
                    .map(|g| offset + block.entry(a, g))
                    .collect(),
            );
        }
    }
    let n = rows.len();
    let mut sigma: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        sigma.swap(i, j);
    }
    let mut relabeled = vec![vec![0usize; m]; n];
    for a in 0..n {
        for (gi, &image) in rows[a].iter().enumerate() {
            relabeled[sigma[a]][gi] = sigma[image];
        }
    }
    SetCoalgebra::from_rows(Arc::clone(group), &relabeled).unwrap()
}

fn spec_config() -> ExperimentConfig {
    ExperimentConfig {
        group: GroupSpec::Kind {
            kind: "cyclic".to_string(),
            n: 2,
        },
        rep_in: "permutation".to_string(),
        rep_out: "permutation".to_string(),
        target: "swap_poly".to_string(),
        bounds: vec![[-1.0, 1.0], [-1.0, 1.0]],
        train_count: 2000,
        test_count: 500,
        widths: vec![16, 64, 256],
        activation: "tanh".to_string(),
        ridge_lambda: 1e-8,
        seed: 42,
        action: equivar_cli::ActionSpec::Named("natural".to_string()),
    }
}

#[test]
fn criterion_1_comonad_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for (name, kind, n) in builtin_groups_up_to(8) {
        let group = equivar_core::build_group(kind, n).unwrap().into_shared();
        for dim in 1..=5 {
            let samples = random_block_vectors(&group, dim, 20, &mut rng);
            let residual = comonad_law_residual(&samples);
            assert!(
                residual <= 1e-12,
                "comonad residual {residual:e} for {name} at dim {dim}"
            );
            worst = worst.max(residual);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 1 (comonad laws, builtins <= order 8, dims 1-5): PASS, worst residual {worst:e}, {elapsed:?}"
    );
}

#[test]
fn criterion_2_comodule_and_left_inverse_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for (name, kind, n) in builtin_groups_up_to(8) {
        let natural = natural_action(kind, n).unwrap();
        let reps = vec![
            ("permutation", permutation_rep(&natural).unwrap()),
            (
                "regular",
                LinearRep::regular(Arc::clone(natural.group())),
            ),
        ];
        for (rep_name, rep) in reps {
            let alpha = ActionCoalgebra::new(rep.clone()).unwrap();
            let gamma = ReynoldsAlgebra::new(rep.clone()).unwrap();
            let vecs = random_vectors(rep.dim(), 20, &mut rng);
            let blocks = random_block_vectors(rep.group(), rep.dim(), 20, &mut rng);
            let comodule = comodule_law_residual(&alpha, &vecs);
            let left_inv = left_inverse_residual(&alpha, &gamma, &vecs, &blocks).unwrap();
            assert!(
                comodule <= 1e-12 && left_inv <= 1e-12,
                "{name}/{rep_name}: comodule {comodule:e}, left inverse {left_inv:e}"
            );
            worst = worst.max(comodule).max(left_inv);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 2 (comodule + left-inverse laws, permutation and regular reps): PASS, worst residual {worst:e}, {elapsed:?}"
    );
}

#[test]
fn criterion_3_symmetrized_maps_are_equivariant() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let groups = [
        ("Z2", GroupKind::Cyclic, 2),
        ("Z4", GroupKind::Cyclic, 4),
        ("S3", GroupKind::Symmetric, 3),
        ("D4", GroupKind::Dihedral, 4),
    ];
    let mut worst_margin = f64::NEG_INFINITY;
    for (name, kind, n) in groups {
        let rep = permutation_rep(&natural_action(kind, n).unwrap()).unwrap();
        let alpha = ActionCoalgebra::new(rep.clone()).unwrap();
        let gamma = ReynoldsAlgebra::new(rep.clone()).unwrap();
        for net_idx in 0..25 {
            let net = random_net(rep.dim(), rep.dim(), &mut rng);
            let phi = symmetrize(
                move |x: &DenseVector| net.eval(x).unwrap(),
                &alpha,
                &gamma,
            )
            .unwrap();
            let points =
                CompactSample::new(rep.dim(), random_vectors(rep.dim(), 50, &mut rng)).unwrap();
            let sym_points = symmetrize_sample(&points, &rep).unwrap();
            let mut scale = 0.0f64;
            for x in sym_points.points() {
                scale = scale.max(phi(x).norm());
            }
            let residual = equivariance_residual(&phi, &rep, &rep, &points).unwrap();
            let bound = 1e-9 * (1.0 + scale);
            assert!(
                residual <= bound,
                "{name} net {net_idx}: residual {residual:e} above {bound:e}"
            );
            worst_margin = worst_margin.max(residual / bound);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 3 (equivariance of 100 symmetrized nets): PASS, worst residual/bound {worst_margin:.3e}, {elapsed:?}"
    );
}

#[test]
fn criterion_4_symmetrization_fixes_its_image() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let groups = builtin_groups_up_to(8);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let (_, kind, n) = groups[trial % groups.len()];
        let rep = permutation_rep(&natural_action(kind, n).unwrap()).unwrap();
        let alpha = ActionCoalgebra::new(rep.clone()).unwrap();
        let gamma = ReynoldsAlgebra::new(rep.clone()).unwrap();
        let net = random_net(rep.dim(), rep.dim(), &mut rng);
        let psi = symmetrize(
            move |x: &DenseVector| net.eval(x).unwrap(),
            &alpha,
            &gamma,
        )
        .unwrap();
        let psi_again = symmetrize(&psi, &alpha, &gamma).unwrap();
        let points = random_vectors(rep.dim(), 20, &mut rng);
        let mut scale = 0.0f64;
        for x in &points {
            scale = scale.max(psi(x).norm());
        }
        let gap = sup_distance(&psi, &psi_again, &points).unwrap();
        let relative = gap / (1.0 + scale);
        assert!(relative <= 1e-9, "trial {trial}: relative gap {relative:e}");
        worst = worst.max(relative);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 4 (fixed points of symmetrization, 50 nets): PASS, worst relative gap {worst:e}, {elapsed:?}"
    );
}

#[test]
fn criterion_5_factorization_matches_group_average_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let groups = builtin_groups_up_to(8);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let (name, kind, n) = &groups[trial % groups.len()];
        let rep = permutation_rep(&natural_action(*kind, *n).unwrap()).unwrap();
        let alpha = ActionCoalgebra::new(rep.clone()).unwrap();
        let gamma = ReynoldsAlgebra::new(rep.clone()).unwrap();
        let net = random_net(rep.dim(), rep.dim(), &mut rng);
        let vnet = to_vector_net(&net, &alpha, &gamma).unwrap();
        let oracle = symmetrize(
            |x: &DenseVector| net.eval(x).unwrap(),
            &alpha,
            &gamma,
        )
        .unwrap();
        for _ in 0..50 {
            let x = DenseVector::from_fn(rep.dim(), |_| rng.gen_range(-1.0..1.0));
            let direct = oracle(&x);
            let factored = vnet.eval(&x).unwrap();
            let scale = 1.0 + direct.max_abs();
            let gap = direct.sub(&factored).max_abs() / scale;
            assert!(gap <= 1e-12, "{name} trial {trial}: relative gap {gap:e}");
            worst = worst.max(gap);
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 5 (vector-net factorization vs averaging oracle, 50 nets): PASS, worst relative gap {worst:e}, {elapsed:?}"
    );
}

#[test]
fn criterion_6_uat_convergence_at_desk_scale() {
    let start = Instant::now();
    let config = spec_config();
    let rows = compute_uat_rows(&config).unwrap();
    assert_eq!(rows.len(), 3);

    // Rebuild each width's factored net (fitting is deterministic) to
    // compute the residual scale 1 + max ||l(x)|| over the symmetrized
    // held-out sample.
    let setup = equivar_cli::resolve_setup(&config).unwrap();
    let target = equivar_cli::resolve_target(&config.target, &setup.alpha, &setup.gamma).unwrap();
    let bounds: Vec<(f64, f64)> = config.bounds.iter().map(|b| (b[0], b[1])).collect();
    let train = sample_box(&bounds, config.train_count, sub_seed(config.seed, equivar_cli::TRAIN_STREAM)).unwrap();
    let test = sample_box(&bounds, config.test_count, sub_seed(config.seed, TEST_STREAM)).unwrap();
    let test_sym = symmetrize_sample(&test, setup.alpha.rep()).unwrap();

    for row in &rows {
        for value in [
            row.train_err_k,
            row.f_err_khat,
            row.l_err_khat,
            row.equiv_residual,
            row.transfer_ratio,
        ] {
            assert!(value.is_finite() && value >= 0.0, "row field {value}");
        }
        let net = fit_random_features(
            &target,
            &train,
            row.width,
            Activation::Tanh,
            config.ridge_lambda,
            row.seed,
        )
        .unwrap();
        let vnet = to_vector_net(&net, &setup.alpha, &setup.gamma).unwrap();
        let mut scale = 0.0f64;
        for x in test_sym.points() {
            scale = scale.max(vnet.eval(x).unwrap().norm());
        }
        let bound = 1e-9 * (1.0 + scale);
        assert!(
            row.equiv_residual <= bound,
            "width {}: equivariance residual {:e} above {bound:e}",
            row.width,
            row.equiv_residual
        );
    }

    let err_16 = rows[0].l_err_khat;
    let err_256 = rows[2].l_err_khat;
    assert!(
        err_256 <= err_16 / 5.0,
        "width-256 error {err_256} not at most a fifth of width-16 error {err_16}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 6 (convergence, widths 16/64/256): PASS, errors {err_16:.5} -> {:.5} -> {err_256:.5} (ratio {:.1}x), {elapsed:?}",
        rows[1].l_err_khat,
        err_16 / err_256
    );
}

#[test]
fn criterion_7_error_transfer_inequality() {
    let start = Instant::now();
    let rows = compute_uat_rows(&spec_config()).unwrap();
    for row in &rows {
        assert!(
            row.l_err_khat <= row.f_err_khat + 1e-9,
            "width {}: {} > {} + 1e-9",
            row.width,
            row.l_err_khat,
            row.f_err_khat
        );
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 7 (error transfer l_err <= f_err + 1e-9 per row): PASS, {elapsed:?}"
    );
}

#[test]
fn criterion_8_invariant_subset_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut checked = 0usize;
    for (name, kind, n) in builtin_groups_up_to(6) {
        let group = equivar_core::build_group(kind, n).unwrap().into_shared();
        for _ in 0..12 {
            let action = random_action(&group, 5, &mut rng);
            assert_eq!(action.verify_group_action(), Ok(()), "{name}");
            let enumerated = action.invariant_subsets().unwrap();
            let carrier = action.carrier_size();
            let mut brute = Vec::new();
            for mask in 0u32..(1 << carrier) {
                let subset: Vec<usize> =
                    (0..carrier).filter(|&i| mask & (1 << i) != 0).collect();
                if action.verify_invariant_subset(&subset).is_ok() {
                    brute.push(subset);
                }
            }
            brute.sort();
            assert_eq!(enumerated, brute, "{name} carrier {carrier}");
            checked += 1;
        }
    }
    assert!(checked >= 100, "only {checked} actions generated");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 8 (invariant-subset enumeration vs brute force, {checked} actions): PASS, {elapsed:?}"
    );
}

#[test]
fn criterion_9_lifting_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let groups = builtin_groups_up_to(6);
    let mut checked = 0usize;
    while checked < 100 {
        let (name, kind, n) = &groups[checked % groups.len()];
        let group = equivar_core::build_group(*kind, *n).unwrap().into_shared();
        let action = random_action(&group, 6, &mut rng);
        assert_eq!(
            check_embedding_equivariance(&action),
            Ok(()),
            "{name} embedding"
        );
        assert_eq!(
            check_compatibility_identity(&action),
            Ok(()),
            "{name} compatibility"
        );
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 9 (lifting squares on {checked} random actions): PASS, {elapsed:?}"
    );
}
