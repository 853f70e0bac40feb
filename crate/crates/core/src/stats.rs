//! Success rates, Wilson intervals, quantiles, and the λ_opt window.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{RunRecord, RunStatus};
use crate::num_fmt::g17;
use crate::pauli::{abs_coefficient_sum, WeightedPauliSum};

/// `z` for a two-sided 95% interval.
pub const Z95: f64 = 1.959964;

pub const SUMMARY_HEADER: &str = "lambda0,n,thr,successes,rate,wilson_lo,wilson_hi,median_E,iqr_E,median_norm,iqr_norm";

/// Success thresholds in Ha, loosest first.
pub fn threshold_grid() -> Vec<f64> {
    vec![1.5e-1, 1.5e-2, 1.5e-3, 1.5e-4, 1.5e-5, 1.5e-6, 1.5e-7]
}

/// Wilson score interval for `successes` out of `n`, clamped to `[0, 1]`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::NoRecords);
    }
    if successes > n {
        return Err(Error::Config(format!("{successes} successes out of {n} trials")));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Config(format!("z must be positive, got {z}")));
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = (center - half).clamp(0.0, 1.0).min(p);
    let hi = (center + half).clamp(0.0, 1.0).max(p);
    Ok((lo, hi))
}

/// Linear-interpolation quantile of sorted data (type 7).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let h = (n - 1) as f64 * q;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}

/// `(median, Q3 − Q1)` of the finite values.
pub fn median_iqr(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&v, 0.75) - quantile_sorted(&v, 0.25);
    (quantile_sorted(&v, 0.5), iqr)
}

pub fn is_success(r: &RunRecord, threshold: f64) -> bool {
    r.status != RunStatus::Failed && r.delta_e <= threshold
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub lambda0: f64,
    pub n: u64,
    pub threshold: f64,
    pub successes: u64,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub median_energy: f64,
    pub iqr_energy: f64,
    pub median_norm: f64,
    pub iqr_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub hamiltonian_hash: String,
    pub lambdas: Vec<f64>,
    pub thresholds: Vec<f64>,
    /// λ-major, threshold-minor.
    pub rows: Vec<SummaryRow>,
}

impl SweepSummary {
    pub fn row(&self, lambda_index: usize, threshold_index: usize) -> &SummaryRow {
        &self.rows[lambda_index * self.thresholds.len() + threshold_index]
    }

    /// Success rate per λ at one threshold.
    pub fn rates(&self, threshold_index: usize) -> Vec<f64> {
        (0..self.lambdas.len()).map(|li| self.row(li, threshold_index).rate).collect()
    }

    pub fn threshold_index(&self, threshold: f64) -> Option<usize> {
        self.thresholds.iter().position(|t| *t == threshold)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{SUMMARY_HEADER}\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                g17(r.lambda0),
                r.n,
                g17(r.threshold),
                r.successes,
                g17(r.rate),
                g17(r.wilson_lo),
                g17(r.wilson_hi),
                g17(r.median_energy),
                g17(r.iqr_energy),
                g17(r.median_norm),
                g17(r.iqr_norm)
            )
            .expect("string write");
        }
        out
    }

    /// `lambda0,rate,wilson_lo,wilson_hi` at one threshold.
    pub fn plot_csv(&self, threshold_index: usize) -> String {
        let mut out = String::from("lambda0,rate,wilson_lo,wilson_hi\n");
        for li in 0..self.lambdas.len() {
            let r = self.row(li, threshold_index);
            writeln!(out, "{},{},{},{}", g17(r.lambda0), g17(r.rate), g17(r.wilson_lo), g17(r.wilson_hi))
                .expect("string write");
        }
        out
    }
}

/// Groups records by λ0 and aggregates each group.
pub fn summarize(records: &[RunRecord], thresholds: &[f64]) -> Result<SweepSummary> {
    let first = records.first().ok_or(Error::NoRecords)?;
    if let Some(other) = records.iter().find(|r| r.hamiltonian_hash != first.hamiltonian_hash) {
        return Err(Error::MixedHamiltonians(first.hamiltonian_hash.clone(), other.hamiltonian_hash.clone()));
    }
    let mut groups: BTreeMap<u64, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        // λ0 >= 0, so the bit pattern orders like the value
        groups.entry(r.lambda0.to_bits()).or_default().push(r);
    }
    let mut rows = Vec::with_capacity(groups.len() * thresholds.len());
    let mut lambdas = Vec::with_capacity(groups.len());
    for (bits, group) in &groups {
        let lambda0 = f64::from_bits(*bits);
        lambdas.push(lambda0);
        let n = group.len() as u64;
        let ok = group.iter().filter(|r| r.status != RunStatus::Failed);
        let (median_energy, iqr_energy) = median_iqr(ok.clone().map(|r| r.final_energy));
        let (median_norm, iqr_norm) = median_iqr(ok.map(|r| r.final_norm));
        for &threshold in thresholds {
            let successes = group.iter().filter(|r| is_success(r, threshold)).count() as u64;
            let (wilson_lo, wilson_hi) = wilson_interval(successes, n, Z95)?;
            rows.push(SummaryRow {
                lambda0,
                n,
                threshold,
                successes,
                rate: successes as f64 / n as f64,
                wilson_lo,
                wilson_hi,
                median_energy,
                iqr_energy,
                median_norm,
                iqr_norm,
            });
        }
    }
    Ok(SweepSummary {
        hamiltonian_hash: first.hamiltonian_hash.clone(),
        lambdas,
        thresholds: thresholds.to_vec(),
        rows,
    })
}

/// Contiguous grid interval around the best success rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaWindow {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub index_lo: usize,
    pub index_hi: usize,
    pub max_rate: f64,
    /// Every maximal run of qualifying λ that contains an argmax, as `(lo, hi)`.
    pub candidates: Vec<(f64, f64)>,
}

/// The maximal contiguous run of grid points with rate `>= 0.9·max` that
/// contains the smallest argmax.
pub fn lambda_opt_window_from_rates(lambdas: &[f64], rates: &[f64]) -> Result<LambdaWindow> {
    if lambdas.len() != rates.len() {
        return Err(Error::Config(format!("{} lambdas but {} rates", lambdas.len(), rates.len())));
    }
    if lambdas.len() < 2 {
        return Err(Error::Config("a window needs at least two lambda values".into()));
    }
    let max_rate = rates.iter().copied().fold(0.0, f64::max);
    if !(max_rate > 0.0) {
        return Err(Error::ZeroSuccess);
    }
    let cutoff = 0.9 * max_rate;
    let mut runs = Vec::new();
    let mut i = 0;
    while i < rates.len() {
        if rates[i] >= cutoff {
            let start = i;
            while i + 1 < rates.len() && rates[i + 1] >= cutoff {
                i += 1;
            }
            if rates[start..=i].contains(&max_rate) {
                runs.push((start, i));
            }
        }
        i += 1;
    }
    let (index_lo, index_hi) = runs[0];
    Ok(LambdaWindow {
        lambda_lo: lambdas[index_lo],
        lambda_hi: lambdas[index_hi],
        index_lo,
        index_hi,
        max_rate,
        candidates: runs.iter().map(|&(a, b)| (lambdas[a], lambdas[b])).collect(),
    })
}

pub fn lambda_opt_window(summary: &SweepSummary, threshold: f64) -> Result<LambdaWindow> {
    let ti = summary
        .threshold_index(threshold)
        .ok_or_else(|| Error::Config(format!("threshold {threshold} not in summary")))?;
    lambda_opt_window_from_rates(&summary.lambdas, &summary.rates(ti))
}

/// `Σ|c_i| / P`.
pub fn lambda_scale(h: &WeightedPauliSum, params: usize) -> Result<f64> {
    if params == 0 {
        return Err(Error::Config("parameter count must be positive".into()));
    }
    Ok(abs_coefficient_sum(h) / params as f64)
}

/// Window report entry for one threshold.
#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub threshold: f64,
    #[serde(flatten)]
    pub window: Option<LambdaWindow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn window_reports(summary: &SweepSummary) -> Vec<WindowReport> {
    summary
        .thresholds
        .iter()
        .map(|&threshold| match lambda_opt_window(summary, threshold) {
            Ok(w) => WindowReport { threshold, window: Some(w), error: None },
            Err(e) => WindowReport { threshold, window: None, error: Some(e.to_string()) },
        })
        .collect()
}
