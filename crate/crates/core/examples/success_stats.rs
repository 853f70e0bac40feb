//! Success rates, Wilson intervals, and λ_opt windows from a run store.
//!
//! Reads the bundled test fixture unless a `runs.csv` path is given.

use std::path::PathBuf;

use regvqe::harness::load_runs;
use regvqe::stats::{lambda_opt_window, median_iqr, window_reports};
use regvqe::{summarize, threshold_grid, wilson_interval};

fn main() -> regvqe::Result<()> {
    let (lo, hi) = wilson_interval(17, 200, regvqe::stats::Z95)?;
    println!("17/200: Wilson 95% [{lo:.4}, {hi:.4}]");
    let (median, iqr) = median_iqr([1.0, 2.0, 3.0, 4.0, 10.0]);
    println!("median {median}, IQR {iqr}");

    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/stats/runs.csv")
    });
    let records = load_runs(&path)?;
    let summary = summarize(&records, &threshold_grid())?;
    let ti = summary.threshold_index(1.5e-3).expect("grid threshold");
    for (li, l) in summary.lambdas.iter().enumerate() {
        let r = summary.row(li, ti);
        println!(
            "lambda0={l:<6} {:>3}/{:<3} rate {:.3} [{:.3}, {:.3}] median E {:.6}",
            r.successes, r.n, r.rate, r.wilson_lo, r.wilson_hi, r.median_energy
        );
    }
    match lambda_opt_window(&summary, 1.5e-3) {
        Ok(w) => println!("window at 1.5e-3: [{}, {}], max rate {:.3}", w.lambda_lo, w.lambda_hi, w.max_rate),
        Err(e) => println!("window at 1.5e-3: {e}"),
    }
    let defined = window_reports(&summary).iter().filter(|r| r.window.is_some()).count();
    println!("{defined} of {} thresholds have a defined window", summary.thresholds.len());
    Ok(())
}
