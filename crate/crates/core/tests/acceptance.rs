//! Acceptance suite. Runs every criterion, prints one PASS/FAIL/SKIP line per
//! criterion and exits non-zero if any failed.
//!
//! Criterion 8 needs the real project table: point `RFNN_UCP_DATASET` at the
//! CSV (and `RFNN_UCP_TARGET` at its effort column if it is not `effort`).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rfnn::data::synthetic::ucp_projects;
use rfnn::data::{load_dataset, Normalizer};
use rfnn::evaluation::{rmse, run_experiment, ExperimentConfig};
use rfnn::fuzzification::{membership, FuzzificationGrid, MembershipFamily};
use rfnn::logic::{s_norm_probabilistic_sum, t_norm_product, AndNeuron};
use rfnn::model::{fit_output_weights, train, HiddenLayer, TrainConfig, TrainedModel};
use rfnn::selection::{bolasso_select, bootstrap_supports, lasso_path, BolassoConfig, Penalty, SelectionResult};
use rfnn::ucp::{compute_tfactor, compute_ucp, FactorRatings};

enum Status {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(cond: bool, detail: String) -> Status {
    if cond {
        Status::Pass(detail)
    } else {
        Status::Fail(detail)
    }
}

fn main() {
    let criteria: Vec<(&str, fn() -> Status)> = vec![
        ("1 membership partition of unity and half-crossing", c1_membership),
        ("2 t-norm / s-norm axioms", c2_norm_axioms),
        ("3 lasso path vs coordinate-descent oracle", c3_lasso_oracle),
        ("4 bolasso consensus properties", c4_bolasso),
        ("5 pseudoinverse output weights", c5_pseudoinverse),
        ("6 leaky output with alpha = 1 is the linear read-out", c6_linear_readout),
        ("7 synthetic recovery end to end", c7_synthetic_recovery),
        ("8 reference dataset accuracy bands", c8_reference_dataset),
        ("9 use case point arithmetic", c9_ucp),
        ("10 byte-identical train and experiment outputs", c10_determinism),
    ];

    let mut failed = 0;
    for (name, f) in criteria {
        let status = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Status::Fail(format!("panicked: {msg}"))
        });
        match status {
            Status::Pass(d) => println!("PASS  criterion {name}: {d}"),
            Status::Skip(d) => println!("SKIP  criterion {name}: {d}"),
            Status::Fail(d) => {
                failed += 1;
                println!("FAIL  criterion {name}: {d}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn c1_membership() -> Status {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut worst_unity, mut worst_half) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(2..=5);
        let ranges: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let lo = rng.gen_range(-10.0..10.0);
                (lo, lo + rng.gen_range(0.1..20.0))
            })
            .collect();

        let tri = FuzzificationGrid::from_ranges(&ranges, m, MembershipFamily::Triangular).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = ranges.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
            let mu = tri.fuzzify(&x).unwrap();
            for j in 0..n {
                worst_unity = worst_unity.max((mu.row(j).sum() - 1.0).abs());
            }
        }

        let gau = FuzzificationGrid::from_ranges(&ranges, m, MembershipFamily::Gaussian).unwrap();
        for part in &gau.per_feature {
            for pair in part.functions.windows(2) {
                let mid = 0.5 * (pair[0].center() + pair[1].center());
                worst_half = worst_half
                    .max((membership(&pair[0], mid) - 0.5).abs())
                    .max((membership(&pair[1], mid) - 0.5).abs());
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    check(
        worst_unity <= 1e-9 && worst_half <= 1e-9 && secs < 5.0,
        format!("max |Σμ−1| = {worst_unity:.2e}, max |μ(mid)−0.5| = {worst_half:.2e}, {secs:.2} s"),
    )
}

fn c2_norm_axioms() -> Status {
    let lattice: Vec<f64> = (0..10).map(|i| i as f64 / 9.0).collect();
    let t = |a, b| t_norm_product(a, b).unwrap();
    let s = |a, b| s_norm_probabilistic_sum(a, b).unwrap();
    let mut worst = 0.0f64;
    let mut monotone = true;
    for (ia, &a) in lattice.iter().enumerate() {
        worst = worst.max((t(1.0, a) - a).abs()).max((s(0.0, a) - a).abs());
        for &b in &lattice {
            worst = worst.max((t(a, b) - t(b, a)).abs()).max((s(a, b) - s(b, a)).abs());
            if let Some(&a2) = lattice.get(ia + 1) {
                monotone &= t(a2, b) >= t(a, b) - 1e-12 && s(a2, b) >= s(a, b) - 1e-12;
            }
            for &c in &lattice {
                worst = worst
                    .max((t(a, t(b, c)) - t(t(a, b), c)).abs())
                    .max((s(a, s(b, c)) - s(s(a, b), c)).abs());
            }
        }
    }
    check(
        worst <= 1e-12 && monotone,
        format!("1000 lattice triples, max axiom violation {worst:.2e}, monotone = {monotone}"),
    )
}

/// Column-standardized copy of `z` (population std) and centered `y`.
fn standardize(z: &DMatrix<f64>, y: &[f64]) -> (DMatrix<f64>, Vec<f64>, DVector<f64>) {
    let k = z.nrows() as f64;
    let mut x = z.clone();
    let mut scales = Vec::new();
    for j in 0..z.ncols() {
        let mean = z.column(j).sum() / k;
        let sd = (z.column(j).iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k).sqrt();
        x.column_mut(j).iter_mut().for_each(|v| *v = (*v - mean) / sd);
        scales.push(sd);
    }
    let ym = y.iter().sum::<f64>() / k;
    (x, scales, DVector::from_iterator(y.len(), y.iter().map(|v| v - ym)))
}

/// Cyclic coordinate descent for (1/2)‖y − Xβ‖² + λ‖β‖₁.
fn coordinate_descent(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64, tol: f64) -> Vec<f64> {
    let p = x.ncols();
    let mut beta = vec![0.0; p];
    let mut resid = y.clone();
    let norms: Vec<f64> = (0..p).map(|j| x.column(j).norm_squared()).collect();
    for _ in 0..1_000_000 {
        let mut max_change = 0.0f64;
        for j in 0..p {
            let rho = x.column(j).dot(&resid) + norms[j] * beta[j];
            let new = rho.signum() * (rho.abs() - lambda).max(0.0) / norms[j];
            let delta = new - beta[j];
            if delta != 0.0 {
                resid.axpy(-delta, &x.column(j), 1.0);
                beta[j] = new;
                max_change = max_change.max(delta.abs());
            }
        }
        if max_change < tol {
            break;
        }
    }
    beta
}

fn c3_lasso_oracle() -> Status {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mut worst_cd, mut worst_ols, mut worst_zero, mut worst_lmax) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let z = DMatrix::from_fn(20, 8, |_, _| rng.gen_range(-1.0..1.0));
        let truth: Vec<f64> = (0..8).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..20)
            .map(|i| 0.7 + (0..8).map(|j| z[(i, j)] * truth[j]).sum::<f64>() + rng.gen_range(-0.5..0.5))
            .collect();

        let path = lasso_path(&z, &y).unwrap();
        let (x, scales, yc) = standardize(&z, &y);
        let lambda_max = (0..8).map(|j| x.column(j).dot(&yc).abs()).fold(0.0, f64::max);
        for i in 1..=20 {
            let lambda = lambda_max * i as f64 / 21.0;
            let oracle = coordinate_descent(&x, &yc, lambda, 1e-10);
            let ours = path.coefficients_at(lambda);
            for j in 0..8 {
                worst_cd = worst_cd.max((ours[j] * scales[j] - oracle[j]).abs());
            }
        }
        worst_lmax = worst_lmax.max((path.lambda_max() - lambda_max).abs() / lambda_max);
        worst_zero = worst_zero.max(path.coefficients_at(path.lambda_max()).iter().fold(0.0f64, |a, b| a.max(b.abs())));

        // OLS with intercept through the normal equations.
        let design = DMatrix::from_fn(20, 9, |i, j| if j == 0 { 1.0 } else { z[(i, j - 1)] });
        let rhs = design.transpose() * DVector::from_column_slice(&y);
        let ols = (design.transpose() * &design).lu().solve(&rhs).unwrap();
        let ours = path.coefficients_at(0.0);
        for j in 0..8 {
            worst_ols = worst_ols.max((ours[j] - ols[j + 1]).abs());
        }
        worst_ols = worst_ols.max((path.intercept_at(0.0) - ols[0]).abs());
    }
    let secs = started.elapsed().as_secs_f64();
    check(
        worst_cd <= 1e-4 && worst_zero == 0.0 && worst_lmax <= 1e-12 && worst_ols <= 1e-6 && secs < 30.0,
        format!(
            "50 problems × 20 penalties: max |β−β_cd| = {worst_cd:.2e}, relative λ_max error {worst_lmax:.1e}, max |β(λ_max)| = {worst_zero:.1e}, \
             max |β(0)−β_ols| = {worst_ols:.2e}, {secs:.2} s"
        ),
    )
}

fn c4_bolasso() -> Status {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let z = DMatrix::from_fn(40, 12, |_, _| rng.gen_range(0.0..1.0));
    let y: Vec<f64> = (0..40)
        .map(|i| 2.0 * z[(i, 1)] - 1.5 * z[(i, 4)] + z[(i, 7)] + rng.gen_range(-0.2..0.2))
        .collect();
    let lambda_max = lasso_path(&z, &y).unwrap().lambda_max();
    let base = BolassoConfig {
        penalty: Penalty::Fixed(0.05 * lambda_max),
        seed: 17,
        ..BolassoConfig::default()
    };

    let mut previous: Option<Vec<usize>> = None;
    let mut monotone = true;
    for step in 1..=10 {
        let consensus = step as f64 / 10.0;
        let sel = bolasso_select(&z, &y, &BolassoConfig { consensus, ..base }).unwrap();
        if let Some(prev) = &previous {
            monotone &= sel.selected.iter().all(|j| prev.contains(j));
        }
        previous = Some(sel.selected);
    }

    let (_, supports) = bootstrap_supports(&z, &y, &base).unwrap();
    let intersection: Vec<usize> = (0..12).filter(|j| supports.iter().all(|s| s.contains(j))).collect();
    let strict = bolasso_select(&z, &y, &BolassoConfig { consensus: 1.0, ..base }).unwrap();
    let literal = !intersection.is_empty() && strict.selected == intersection && !strict.fallback;

    let cv = BolassoConfig { penalty: Penalty::CrossValidated, ..base };
    let deterministic = bolasso_select(&z, &y, &cv).unwrap() == bolasso_select(&z, &y, &cv).unwrap();

    check(
        monotone && literal && deterministic,
        format!(
            "monotone = {monotone}, consensus 1.0 = intersection {intersection:?}: {literal}, deterministic = {deterministic}"
        ),
    )
}

fn c5_pseudoinverse() -> Status {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut worst_orth, mut worst_norm) = (0.0f64, 0.0f64);
    for case in 0..40 {
        let rank = 2 + case % 4;
        let a = DMatrix::from_fn(10, rank, |_, _| rng.gen_range(-1.0..1.0));
        let b = DMatrix::from_fn(rank, 6, |_, _| rng.gen_range(-1.0..1.0));
        let zm = a * b;
        let y = DVector::from_fn(10, |_, _| rng.gen_range(-3.0..3.0));
        let v = DVector::from_vec(fit_output_weights(&zm, y.as_slice()).unwrap());

        let grad = zm.transpose() * (&zm * &v - &y);
        worst_orth = worst_orth.max(grad.norm() / (zm.transpose() * &y).norm());

        // Ridge solutions converge to the minimum-norm solution as δ → 0;
        // Richardson extrapolation removes the O(δ) term.
        let ridge = |delta: f64| {
            let g = zm.transpose() * &zm + DMatrix::identity(6, 6) * delta;
            g.cholesky().unwrap().solve(&(zm.transpose() * &y))
        };
        let delta = 1e-6;
        let oracle = ridge(delta) * 2.0 - ridge(2.0 * delta);
        worst_norm = worst_norm.max((&v - oracle).amax());
    }
    check(
        worst_orth <= 1e-8 && worst_norm < 1e-6,
        format!("40 rank-deficient 10×6 cases: max ‖Zᵀr‖/‖Zᵀy‖ = {worst_orth:.2e}, max |v − v_ridge→0| = {worst_norm:.2e}"),
    )
}

fn random_model(rng: &mut ChaCha8Rng) -> TrainedModel {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(2..=4);
    let family = if rng.gen_bool(0.5) { MembershipFamily::Gaussian } else { MembershipFamily::Triangular };
    let ranges: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let lo = rng.gen_range(-3.0..0.0);
            (lo, lo + rng.gen_range(0.5..4.0))
        })
        .collect();
    let l = rng.gen_range(0..=6);
    let neurons: Vec<AndNeuron> = (0..l)
        .map(|_| {
            AndNeuron::new(
                (0..n).map(|_| rng.gen_range(0..m)).collect(),
                (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect(),
            )
            .unwrap()
        })
        .collect();
    TrainedModel {
        feature_names: (0..n).map(|j| format!("f{j}")).collect(),
        target_name: "effort".into(),
        grid: FuzzificationGrid::from_ranges(&ranges, m, family).unwrap(),
        output_weights: (0..=l).map(|_| rng.gen_range(-5.0..5.0)).collect(),
        neurons,
        normalizer: Normalizer {
            means: (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect(),
            std_devs: (0..n).map(|_| rng.gen_range(0.5..5.0)).collect(),
            constant: vec![false; n],
        },
        config: TrainConfig { alpha: 1.0, m, family, ..TrainConfig::default() },
        selection: SelectionResult {
            selected: (0..l).collect(),
            frequencies: vec![1.0; l],
            penalty_used: 0.0,
            fallback: false,
        },
        candidate_count: l,
    }
}

/// Membership computed from the grid definition alone.
fn explicit_membership(family: MembershipFamily, lo: f64, hi: f64, m: usize, k: usize, x: f64) -> f64 {
    let d = (hi - lo) / (m - 1) as f64;
    let c = lo + k as f64 * d;
    match family {
        MembershipFamily::Gaussian => {
            let sigma = d / (2.0 * (2.0 * 2f64.ln()).sqrt());
            (-(x - c).powi(2) / (2.0 * sigma * sigma)).exp()
        }
        MembershipFamily::Triangular => {
            if (k == 0 && x <= c) || (k == m - 1 && x >= c) {
                1.0
            } else {
                (1.0 - (x - c).abs() / d).max(0.0)
            }
        }
    }
}

fn c6_linear_readout() -> Status {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let model = random_model(&mut rng);
        let n = model.feature_names.len();
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-20.0..20.0)).collect();
        let x: Vec<f64> = (0..n)
            .map(|j| (raw[j] - model.normalizer.means[j]) / model.normalizer.std_devs[j])
            .collect();
        let mut explicit = model.output_weights[0];
        for (l, neuron) in model.neurons.iter().enumerate() {
            let mut z = 1.0;
            for j in 0..n {
                let part = &model.grid.per_feature[j];
                let (lo, hi) = (part.min, part.max);
                let a = explicit_membership(model.grid.family, lo, hi, model.grid.m, neuron.mf_choice[j], x[j]);
                let w = neuron.weights[j];
                z *= w + a - w * a;
            }
            explicit += z * model.output_weights[l + 1];
        }
        worst = worst.max((model.predict(&raw).unwrap() - explicit).abs());
    }
    check(worst <= 1e-12, format!("1000 random models, max |predict − Σ z·v| = {worst:.2e}"))
}

fn c7_synthetic_recovery() -> Status {
    let data = ucp_projects(60, 11);
    let config = TrainConfig { seed: 5, ..TrainConfig::default() };
    let hidden = HiddenLayer::build(&data, &config).unwrap();
    let design = hidden.design(&data.rows).unwrap();

    let mut by_spread: Vec<usize> = (0..design.ncols()).collect();
    let spread = |j: usize| design.column(j).max() - design.column(j).min();
    by_spread.sort_by(|&a, &b| spread(b).total_cmp(&spread(a)));
    let planted = [by_spread[0], by_spread[1], by_spread[2]];
    let coefs = [300.0, 500.0, 800.0];

    let mut synthetic = data.clone();
    synthetic.targets = (0..data.len())
        .map(|i| 1000.0 + planted.iter().zip(coefs).map(|(&j, c)| c * design[(i, j)]).sum::<f64>())
        .collect();

    let model = train(&synthetic, &config).unwrap();
    let found = planted
        .iter()
        .all(|&j| model.selection.selected.contains(&j) && model.selection.frequencies[j] == 1.0);
    let fit = rmse(&synthetic.targets, &model.predict_rows(&synthetic.rows).unwrap()).unwrap();
    check(
        found && fit < 1e-6,
        format!(
            "planted neurons {planted:?} selected with frequency 1.0: {found}; L_s = {}, train RMSE = {fit:.2e}",
            model.n_selected()
        ),
    )
}

fn c8_reference_dataset() -> Status {
    let Ok(path) = std::env::var("RFNN_UCP_DATASET") else {
        return Status::Skip("RFNN_UCP_DATASET not set; no reference dataset supplied".into());
    };
    let target = std::env::var("RFNN_UCP_TARGET").unwrap_or_else(|_| "effort".into());
    let data = load_dataset(&path, &target).unwrap();
    let started = Instant::now();
    let run = |family| {
        let config = ExperimentConfig {
            train_config: TrainConfig { family, ..TrainConfig::default() },
            ..ExperimentConfig::default()
        };
        run_experiment(&data, &config).unwrap().aggregates
    };
    let tri = run(MembershipFamily::Triangular);
    let gau = run(MembershipFamily::Gaussian);
    let secs = started.elapsed().as_secs_f64();
    let ok = (72.0..=290.0).contains(&tri.rmse_test.mean)
        && (5.0..=50.0).contains(&tri.selected.mean)
        && (100.0..=410.0).contains(&gau.rmse_test.mean)
        && secs < 60.0;
    check(
        ok,
        format!(
            "triangular test RMSE {:.2} ({:.2}), L_s {:.2}; gaussian test RMSE {:.2} ({:.2}); {secs:.1} s",
            tri.rmse_test.mean, tri.rmse_test.std, tri.selected.mean, gau.rmse_test.mean, gau.rmse_test.std
        ),
    )
}

fn c9_ucp() -> Status {
    let tfactor = compute_tfactor(&FactorRatings::technical_example()).unwrap();
    let neutral = compute_ucp(12.0, 85.0, 1.0, 1.0).unwrap();
    let empty = compute_ucp(0.0, 0.0, 0.9, 0.8).unwrap();
    check(
        tfactor == 30.0 && neutral.ucp == neutral.uucp && neutral.uucp == 97.0 && empty.ucp == 0.0,
        format!("TFactor = {tfactor}, neutral UCP = {}, empty UCP = {}", neutral.ucp, empty.ucp),
    )
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_rfnn")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn write_csv(path: &Path) {
    let data = ucp_projects(40, 23);
    let mut w = csv::Writer::from_path(path).unwrap();
    let mut header = data.feature_names.clone();
    header.push(data.target_name.clone());
    w.write_record(&header).unwrap();
    for (row, t) in data.rows.iter().zip(&data.targets) {
        w.write_record(row.iter().chain([t]).map(|v| v.to_string())).unwrap();
    }
    w.flush().unwrap();
}

fn c10_determinism() -> Status {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("projects.csv");
    write_csv(&csv);
    let csv = csv.to_str().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let (m1, m2, r1, r2) = (p("m1.json"), p("m2.json"), p("r1.json"), p("r2.json"));
    let a = run_cli(&["train", "--data", csv, "--out", &m1, "--seed", "7", "--deterministic"]);
    let b = run_cli(&["train", "--data", csv, "--out", &m2, "--seed", "7", "--deterministic"]);
    let same_model = a.0 == 0 && b.0 == 0 && std::fs::read(&m1).unwrap() == std::fs::read(&m2).unwrap();
    let train_stdout = String::from_utf8_lossy(&a.1).replace(&m1, "") == String::from_utf8_lossy(&b.1).replace(&m2, "");

    let exp = |out: &str| run_cli(&["experiment", "--data", csv, "--reps", "3", "--seed", "11", "--out", out, "--deterministic"]);
    let (c, d) = (exp(&r1), exp(&r2));
    let same_report = c.0 == 0 && d.0 == 0 && std::fs::read(&r1).unwrap() == std::fs::read(&r2).unwrap() && c.1 == d.1;

    check(
        same_model && train_stdout && same_report,
        format!("model files identical: {same_model}, train stdout identical: {train_stdout}, experiment report and stdout identical: {same_report}"),
    )
}
