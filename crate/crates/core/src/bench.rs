//! Stage timings of the recovery pipeline across matrix sizes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{ensure_arg, Result};
use crate::exterior::compound;
use crate::numerics::TolerancePolicy;
use crate::recovery::inverse_compound;
use crate::testkit::random_rank_r;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub reps: usize,
    /// Median over repetitions of the summed stage times.
    pub total_ms: f64,
    /// Median per stage.
    pub stages: BTreeMap<String, f64>,
    pub max_residual: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Sizes 6, 8, ..., `max_n` (starting at `k + 1` when that is larger).
pub fn bench_sizes(max_n: usize, k: usize) -> Vec<usize> {
    let start = 6.max(k + 1);
    let start = start + (start % 2);
    (start..=max_n).step_by(2).collect()
}

/// Recovers `C_k(A)` for full-rank square `A` at every size, `reps` times each.
pub fn run_bench(max_n: usize, k: usize, reps: usize, policy: &TolerancePolicy) -> Result<Vec<BenchRow>> {
    ensure_arg!(k >= 1 && reps >= 1, "need k >= 1 and reps >= 1");
    let sizes = bench_sizes(max_n, k);
    ensure_arg!(!sizes.is_empty(), "no sizes between {} and {max_n}", 6.max(k + 1));
    let mut rows = Vec::with_capacity(sizes.len());
    for n in sizes {
        let mut totals = Vec::with_capacity(reps);
        let mut per_stage: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        let mut max_residual: f64 = 0.0;
        for rep in 0..reps {
            let a = random_rank_r(n, n, n, policy.rng_seed.wrapping_add((n * 1000 + rep) as u64), None)?;
            let m = compound(&a, k)?;
            let rec = inverse_compound(&m, n, n, k, policy)?;
            totals.push(rec.report.stage_timings.values().sum());
            for (stage, ms) in rec.report.stage_timings {
                per_stage.entry(stage).or_default().push(ms);
            }
            max_residual = max_residual.max(rec.report.reconstruction_residual);
        }
        rows.push(BenchRow {
            n,
            k,
            reps,
            total_ms: median(totals),
            stages: per_stage.into_iter().map(|(s, v)| (s, median(v))).collect(),
            max_residual,
        });
    }
    Ok(rows)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// CSV with columns `n,k,reps,total_ms,max_residual,<stages...>`.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let stages: Vec<&String> = rows.first().map(|r| r.stages.keys().collect()).unwrap_or_default();
    let mut out = String::from("n,k,reps,total_ms,max_residual");
    for s in &stages {
        out.push(',');
        out.push_str(s);
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{:.4},{:.3e}", r.n, r.k, r.reps, r.total_ms, r.max_residual));
        for s in &stages {
            out.push_str(&format!(",{:.4}", r.stages.get(*s).copied().unwrap_or(0.0)));
        }
        out.push('\n');
    }
    out
}
