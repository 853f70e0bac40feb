//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use regvqe::harness::{load_runs, SweepOptions, RUNS_FILE};
use regvqe::optimizers::{minimize_cg, minimize_lbfgs, run_two_stage, split_reference, FnProblem};
use regvqe::pauli::{generate_rfim, RfimSpec};
use regvqe::statevector::expectation;
use regvqe::stats::{lambda_opt_window, summarize, threshold_grid, SweepSummary};
use regvqe::{
    data, AnsatzSpec, ExperimentConfig, Objective, OptimizerConfig, PipelineConfig, RunRecord, RunStatus, Schedule,
    StateVector,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok { Ok(detail) } else { Err(detail) }
}

fn c1_simulator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = 1 + k % 6;
        let state = StateVector::random(n, &mut rng).map_err(|e| e.to_string())?;
        let h = random_hamiltonian(n, 1 + rng.random_range(0..12), &mut rng);
        let got = expectation(&state, &h).map_err(|e| e.to_string())?;
        worst = worst.max((got - dense_expectation(&state, &h).re).abs());
    }
    check(worst < 1e-10, format!("100 instances, max |err| = {worst:.3e} (tol 1e-10)"))
}

fn c2_gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=4);
        let spec = AnsatzSpec::two_local(n, rng.random_range(0..=3));
        let h = random_hamiltonian(n, 6, &mut rng);
        let mut obj = Objective::new(Arc::new(h), spec).map_err(|e| e.to_string())?;
        let theta = random_theta(spec.param_count(), &mut rng);
        let ps = obj.parameter_shift_gradient(&theta).map_err(|e| e.to_string())?;
        let fd = obj.finite_difference_gradient(&theta, 1e-5).map_err(|e| e.to_string())?;
        worst = ps.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    check(worst < 1e-6, format!("20 instances, max inf-norm = {worst:.3e} (tol 1e-6)"))
}

fn c3_schedule() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..50 {
        let lambda0 = rng.random_range(0.0..2.0);
        let t_a = 2 * rng.random_range(1..100usize);
        let s = Schedule::cosine(lambda0, t_a);
        let at = |t: i64| s.lambda_at(t).map_err(|e| e.to_string());
        if at(0)? != lambda0 || at(t_a as i64)? != 0.0 || (at(t_a as i64 / 2)? - lambda0 / 2.0).abs() > 1e-15 * lambda0 {
            return Err(format!("endpoint mismatch at lambda0={lambda0}, T_A={t_a}"));
        }
        let vals: Vec<f64> = (0..=2 * t_a as i64).map(at).collect::<Result<_, _>>()?;
        if vals.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("not monotone at lambda0={lambda0}, T_A={t_a}"));
        }
    }
    Ok("50 schedules, endpoints and midpoint exact, monotone".into())
}

fn c4_param_counts() -> Outcome {
    let got = [
        AnsatzSpec::two_local(4, 4).param_count(),
        AnsatzSpec::two_local(8, 4).param_count(),
        AnsatzSpec::ry_layer(12).param_count(),
    ];
    check(got == [40, 80, 12], format!("TwoLocal(4,4)={}, TwoLocal(8,4)={}, RyLayer(12)={}", got[0], got[1], got[2]))
}

fn c5_lambda_scale() -> Outcome {
    let scale = |h: regvqe::WeightedPauliSum, p| regvqe::stats::lambda_scale(&h, p).map_err(|e| e.to_string());
    let h2 = scale(data::h2(), 40)?;
    let lih = scale(data::lih(), 80)?;
    let rfim = scale(generate_rfim(&RfimSpec::calibrated(12, 7)).map_err(|e| e.to_string())?, 12)?;
    let ok = (h2 - 0.072).abs() <= 1e-3 && (lih - 0.089).abs() <= 1e-3 && (rfim - 1.27).abs() <= 0.13;
    check(ok, format!("H2 {h2:.5} (0.072±0.001), LiH {lih:.5} (0.089±0.001), RFIM {rfim:.4} (1.27±0.13)"))
}

struct DeskSweep {
    summary: SweepSummary,
    records: Vec<RunRecord>,
    store_w1: String,
    store_w8: String,
    secs_w1: f64,
    secs_w8: f64,
}

fn desk_sweep(dir: &Path) -> Result<DeskSweep, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/h2_desk.toml");
    let exp = ExperimentConfig::load(&path).map_err(|e| e.to_string())?;
    let base = exp.sweep_config(4).map_err(|e| e.to_string())?;
    let mut stores = Vec::new();
    let mut secs = Vec::new();
    for workers in [1usize, 8] {
        let cfg = regvqe::SweepConfig { workers, ..base.clone() };
        let out = dir.join(format!("w{workers}"));
        let t = Instant::now();
        regvqe::run_sweep(&cfg, &out, &SweepOptions::default()).map_err(|e| e.to_string())?;
        secs.push(t.elapsed().as_secs_f64());
        stores.push(fs::read_to_string(out.join(RUNS_FILE)).map_err(|e| e.to_string())?);
    }
    let records = load_runs(&dir.join("w1").join(RUNS_FILE)).map_err(|e| e.to_string())?;
    let summary = summarize(&records, &threshold_grid()).map_err(|e| e.to_string())?;
    Ok(DeskSweep {
        summary,
        records,
        store_w1: stores[0].clone(),
        store_w8: stores[1].clone(),
        secs_w1: secs[0],
        secs_w8: secs[1],
    })
}

/// λ in [0.05, 0.20] with the highest rate at 1.5e-3 Ha; the smallest such λ on ties.
fn best_window_lambda(s: &SweepSummary) -> Option<usize> {
    let ti = s.threshold_index(1.5e-3)?;
    let mut best: Option<usize> = None;
    for (li, l) in s.lambdas.iter().enumerate() {
        if (0.05..=0.20).contains(l) && best.is_none_or(|b| s.row(li, ti).successes > s.row(b, ti).successes) {
            best = Some(li);
        }
    }
    best
}

fn c6_window(d: &DeskSweep) -> Outcome {
    let s = &d.summary;
    let ti = s.threshold_index(1.5e-3).ok_or("threshold 1.5e-3 missing")?;
    let zero = s.lambdas.iter().position(|l| *l == 0.0).ok_or("lambda=0 missing")?;
    let best = best_window_lambda(s).ok_or("no grid lambda in [0.05, 0.20]")?;
    let (r0, rb) = (s.row(zero, ti), s.row(best, ti));
    let a = rb.rate > r0.rate && rb.wilson_lo > r0.wilson_hi;

    let loose = 0;
    let window = lambda_opt_window(s, s.thresholds[loose]).map_err(|e| e.to_string())?;
    let last = s.row(s.lambdas.len() - 1, loose);
    let b = last.rate < window.max_rate;
    check(
        a && b,
        format!(
            "(a) {}: lambda=0 {}/{} [{:.3},{:.3}] vs lambda={} {}/{} [{:.3},{:.3}]; \
             (b) {}: rate at lambda={} is {:.3}, window max {:.3}; {:.1}s on 1 worker",
            if a { "ok" } else { "fail" },
            r0.successes,
            r0.n,
            r0.wilson_lo,
            r0.wilson_hi,
            s.lambdas[best],
            rb.successes,
            rb.n,
            rb.wilson_lo,
            rb.wilson_hi,
            if b { "ok" } else { "fail" },
            s.lambdas[s.lambdas.len() - 1],
            last.rate,
            window.max_rate,
            d.secs_w1,
        ),
    )
}

fn c7_variance(d: &DeskSweep) -> Outcome {
    let s = &d.summary;
    let zero = s.lambdas.iter().position(|l| *l == 0.0).ok_or("lambda=0 missing")?;
    let best = best_window_lambda(s).ok_or("no grid lambda in [0.05, 0.20]")?;
    let (iqr0, iqrb) = (s.row(zero, 0).iqr_energy, s.row(best, 0).iqr_energy);
    let failed = d.records.iter().filter(|r| r.status == RunStatus::Failed).count();
    check(
        iqrb <= 0.8 * iqr0,
        format!(
            "IQR(E) lambda=0 {iqr0:.3e}, lambda={} {iqrb:.3e}, ratio {:.3} (bar 0.8); {failed} failed runs",
            s.lambdas[best],
            iqrb / iqr0
        ),
    )
}

fn c8_degeneracy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let pipeline = PipelineConfig::cg(0.0, 15, 10, 1e-2, 10_000);
    for k in 0..10 {
        let n = rng.random_range(2..=4);
        let spec = AnsatzSpec::two_local(n, rng.random_range(1..=3));
        let h = Arc::new(random_hamiltonian(n, 8, &mut rng));
        let theta0 = random_theta(spec.param_count(), &mut rng);
        let obj = || Objective::new(h.clone(), spec).map_err(|e| e.to_string());
        let reg = run_two_stage(&pipeline, &mut obj()?, &theta0).map_err(|e| e.to_string())?;
        let plain = split_reference(&pipeline, &mut obj()?, &theta0).map_err(|e| e.to_string())?;
        if reg != plain {
            return Err(format!("instance {k} differs"));
        }
    }
    Ok("10 instances bit-identical".into())
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

fn rosenbrock_grad(x: &[f64], g: &mut [f64]) {
    g.fill(0.0);
    for i in 0..x.len() - 1 {
        let a = x[i + 1] - x[i] * x[i];
        g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
        g[i + 1] += 200.0 * a;
    }
}

fn c9_optimizers() -> Outcome {
    let err = |e: regvqe::Error| e.to_string();
    let cg_cfg = OptimizerConfig::cg(200, 1e-10);
    let cg = minimize_cg(&mut FnProblem::new(rosenbrock, rosenbrock_grad), &[-1.2, 1.0], &cg_cfg, None).map_err(err)?;
    let x0: Vec<f64> = (0..10).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect();
    let lb_cfg = OptimizerConfig::lbfgs(300, 1e-10);
    let lb = minimize_lbfgs(&mut FnProblem::new(rosenbrock, rosenbrock_grad), &x0, &lb_cfg, None).map_err(err)?;

    let h = Arc::new(regvqe::WeightedPauliSum::from_labels(1, &[(1.0, "Z")]).map_err(err)?);
    let cosine = || Objective::new(h.clone(), AnsatzSpec::ry_layer(1));
    let cos_cg = minimize_cg(&mut cosine().map_err(err)?, &[0.1], &OptimizerConfig::cg(100, 1e-8), None).map_err(err)?;
    let cos_lb =
        minimize_lbfgs(&mut cosine().map_err(err)?, &[0.1], &OptimizerConfig::lbfgs(100, 1e-8), None).map_err(err)?;

    let (f_cg, f_lb) = (rosenbrock(&cg.best_theta), rosenbrock(&lb.best_theta));
    let ok = f_cg < 1e-4
        && f_lb < 1e-6
        && (cos_cg.best_value + 1.0).abs() <= 1e-6
        && (cos_lb.best_value + 1.0).abs() <= 1e-6;
    check(
        ok,
        format!(
            "CG 2-d f={f_cg:.2e} in {} it; L-BFGS 10-d f={f_lb:.2e} in {} it; cosine CG {:.9} L-BFGS {:.9} (theta {:.4}, pi {:.4})",
            cg.iterations_used, lb.iterations_used, cos_cg.best_value, cos_lb.best_value, cos_cg.best_theta[0], PI
        ),
    )
}

fn c10_reproducible(d: &DeskSweep) -> Outcome {
    check(
        d.store_w1 == d.store_w8,
        format!(
            "{} records; workers=1 {:.1}s, workers=8 {:.1}s; runs.csv {}",
            d.records.len(),
            d.secs_w1,
            d.secs_w8,
            if d.store_w1 == d.store_w8 { "identical" } else { "differs" }
        ),
    )
}

fn c11_thresholds() -> Outcome {
    let grid = threshold_grid();
    if grid != [1.5e-1, 1.5e-2, 1.5e-3, 1.5e-4, 1.5e-5, 1.5e-6, 1.5e-7] {
        return Err(format!("grid {grid:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for set in 0..1000 {
        let n = rng.random_range(1..60);
        let records: Vec<RunRecord> = (0..n)
            .map(|i| {
                let failed = rng.random_bool(0.1);
                let delta_e = if failed { f64::NAN } else { 10f64.powf(rng.random_range(-9.0..0.5)) };
                RunRecord {
                    lambda0: [0.0, 0.05, 0.1][rng.random_range(0..3)],
                    seed: i,
                    final_energy: delta_e - 1.0,
                    final_norm: 1.0,
                    evals_total: 1,
                    status: if failed { RunStatus::Failed } else { RunStatus::Converged },
                    delta_e,
                    trajectory_ref: None,
                    hamiltonian_hash: String::new(),
                }
            })
            .collect();
        let s = summarize(&records, &grid).map_err(|e| e.to_string())?;
        for li in 0..s.lambdas.len() {
            if (1..grid.len()).any(|t| s.row(li, t).successes > s.row(li, t - 1).successes) {
                return Err(format!("record set {set}: rate rises as threshold tightens"));
            }
        }
    }
    Ok("seven thresholds; monotone on 1000 random record sets".into())
}

fn main() {
    let mut failures = 0;
    let mut report = |id: &str, name: &str, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {id} {name}: {detail}");
    };
    report("1", "simulator vs dense oracle", c1_simulator());
    report("2", "parameter shift vs finite differences", c2_gradients());
    report("3", "cosine schedule", c3_schedule());
    report("4", "parameter counts", c4_param_counts());
    report("5", "lambda scale", c5_lambda_scale());

    let dir = tempfile::tempdir().expect("temp dir");
    match desk_sweep(dir.path()) {
        Ok(d) => {
            report("6", "H2 desk-scale stabilization window", c6_window(&d));
            report("7", "variance contraction", c7_variance(&d));
            report("10", "workers=1 vs workers=8 reproducibility", c10_reproducible(&d));
        }
        Err(e) => {
            for (id, name) in [("6", "H2 desk-scale stabilization window"), ("7", "variance contraction"), ("10", "reproducibility")] {
                report(id, name, Err(format!("sweep failed: {e}")));
            }
        }
    }

    report("8", "two-stage degeneracy at lambda0=0", c8_degeneracy());
    report("9", "optimizer sanity", c9_optimizers());
    report("11", "threshold grid and monotonicity", c11_thresholds());

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
