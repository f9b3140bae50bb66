//! Sweep tables: one CSV row per run.

use serde::{Deserialize, Serialize};

use crate::analysis::MetricsReport;
use crate::error::Result;
use crate::network::Method;

/// One grid point of a sweep. `metrics` is `None` when the run failed;
/// `status` then holds the error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: Method,
    pub n: usize,
    pub lambda: f64,
    pub seed: u64,
    pub status: String,
    pub metrics: Option<MetricsReport>,
}

impl SweepRow {
    pub fn ok(metrics: MetricsReport) -> Self {
        Self {
            method: metrics.method,
            n: metrics.n,
            lambda: metrics.lambda,
            seed: metrics.seed,
            status: "ok".into(),
            metrics: Some(metrics),
        }
    }
}

pub const SWEEP_HEADER: [&str; 10] = [
    "method", "n", "sqrt_n", "lambda", "seed", "outcome", "energy", "spreading", "entropy", "status",
];

/// Rows sorted by `(method, n, seed)`.
pub fn write_sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (a.method, a.n, a.seed).cmp(&(b.method, b.n, b.seed)));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for r in sorted {
        let opt = |f: fn(&MetricsReport) -> Option<f64>| {
            r.metrics.as_ref().and_then(f).map(|v| v.to_string()).unwrap_or_default()
        };
        w.write_record([
            r.method.as_str().to_string(),
            r.n.to_string(),
            (r.n as f64).sqrt().to_string(),
            r.lambda.to_string(),
            r.seed.to_string(),
            opt(|m| Some(m.outcome)),
            opt(|m| Some(m.energy)),
            opt(|m| Some(m.spreading)),
            opt(|m| m.entropy),
            r.status.clone(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}
