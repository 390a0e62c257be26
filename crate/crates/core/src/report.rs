//! Fixed-format CSV rendering. Columns and ordering are part of the
//! artifact's interface: numeric cells use six decimals, absent ratios
//! print as `NA`, and rows are sorted by (algo, seed) with aggregate rows
//! (seed column `mean`) last.

use crate::harness::{BenchResult, ConvergenceSeries, RunResult};
use crate::metrics::{MetricsRecord, Summary};

pub const RUN_CSV_HEADER: &str = "algo,seed,objective,profit,cost,pc_ratio,satisfied_count,\
utilisation,objective_per_allocation,profit_per_allocation,cost_per_allocation,\
objective_per_utilisation";

pub const CONVERGENCE_CSV_HEADER: &str = "algo,seed,iteration,best_fitness";

fn fmt_f64(x: f64) -> String {
    // Normalizes -0.0 so equal values always print identically.
    format!("{:.6}", if x == 0.0 { 0.0 } else { x })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "NA".to_string())
}

fn record_row(r: &MetricsRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.algo.name(),
        r.seed,
        fmt_f64(r.objective),
        fmt_f64(r.profit),
        fmt_f64(r.cost),
        fmt_opt(r.pc_ratio),
        fmt_f64(r.satisfied_count),
        fmt_f64(r.utilisation),
        fmt_opt(r.objective_per_allocation),
        fmt_opt(r.profit_per_allocation),
        fmt_opt(r.cost_per_allocation),
        fmt_opt(r.objective_per_utilisation),
    )
}

fn summary_row(s: &Summary) -> String {
    format!(
        "{},mean,{},{},{},{},{},{},{},{},{},{}",
        s.algo.name(),
        fmt_f64(s.objective),
        fmt_f64(s.profit),
        fmt_f64(s.cost),
        fmt_opt(s.pc_ratio),
        fmt_f64(s.satisfied_count),
        fmt_f64(s.utilisation),
        fmt_opt(s.objective_per_allocation),
        fmt_opt(s.profit_per_allocation),
        fmt_opt(s.cost_per_allocation),
        fmt_opt(s.objective_per_utilisation),
    )
}

/// Per-repeat rows followed by the aggregate row.
pub fn run_csv(result: &RunResult) -> String {
    let mut records: Vec<&MetricsRecord> = result.records.iter().collect();
    records.sort_by_key(|r| (r.algo.name(), r.seed));
    let mut out = String::from(RUN_CSV_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&record_row(record));
        out.push('\n');
    }
    out.push_str(&summary_row(&result.summary));
    out.push('\n');
    out
}

/// One aggregate row per algorithm: the comparison table shape.
pub fn bench_csv(bench: &BenchResult) -> String {
    let mut summaries: Vec<&Summary> = bench.results.iter().map(|r| &r.summary).collect();
    summaries.sort_by_key(|s| s.algo.name());
    let mut out = String::from(RUN_CSV_HEADER);
    out.push('\n');
    for summary in summaries {
        out.push_str(&summary_row(summary));
        out.push('\n');
    }
    out
}

/// Per-iteration best fitness of every metaheuristic repeat. Iteration 0 is
/// the post-initialisation population best.
pub fn convergence_csv(series: &[ConvergenceSeries]) -> String {
    let mut sorted: Vec<&ConvergenceSeries> = series.iter().collect();
    sorted.sort_by_key(|s| (s.algo.name(), s.seed));
    let mut out = String::from(CONVERGENCE_CSV_HEADER);
    out.push('\n');
    for s in sorted {
        for (iteration, &best) in s.best_fitness.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                s.algo.name(),
                s.seed,
                iteration,
                fmt_f64(best)
            ));
        }
    }
    out
}
