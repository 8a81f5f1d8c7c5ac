use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::EstimateReport;
use crate::perm::Partition;

/// Flat rendering shared by the JSON, JSONL and CSV outputs. Means and
/// window ends are strings so exact rationals survive as `p/q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub alpha: String,
    pub beta: String,
    pub n: usize,
    pub method: String,
    pub trials: u64,
    pub mean: String,
    pub mean_float: f64,
    pub stderr: f64,
    pub window_low: String,
    pub window_high: String,
    pub verdict: String,
}

fn parts(p: &Partition) -> String {
    let v: Vec<String> = p.parts().iter().map(|x| x.to_string()).collect();
    v.join(",")
}

impl From<&EstimateReport> for ReportRow {
    fn from(r: &EstimateReport) -> Self {
        ReportRow {
            alpha: parts(&r.alpha),
            beta: parts(&r.beta),
            n: r.n,
            method: r.method.to_string(),
            trials: r.trials,
            mean: r.mean.to_string(),
            mean_float: r.mean.to_f64(),
            stderr: r.stderr,
            window_low: r.window.low.to_string(),
            window_high: r.window.high.to_string(),
            verdict: r.verdict.to_string(),
        }
    }
}

fn rows(reports: &[EstimateReport]) -> Vec<ReportRow> {
    reports.iter().map(ReportRow::from).collect()
}

/// A single object for one report, an array otherwise.
pub fn reports_to_json(reports: &[EstimateReport]) -> String {
    let rows = rows(reports);
    let mut s = if rows.len() == 1 {
        serde_json::to_string_pretty(&rows[0])
    } else {
        serde_json::to_string_pretty(&rows)
    }
    .expect("plain rows");
    s.push('\n');
    s
}

pub fn reports_to_jsonl(reports: &[EstimateReport]) -> String {
    let mut out = String::new();
    for row in rows(reports) {
        out.push_str(&serde_json::to_string(&row).expect("plain row"));
        out.push('\n');
    }
    out
}

pub fn reports_to_csv(reports: &[EstimateReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if reports.is_empty() {
        w.write_record([
            "alpha",
            "beta",
            "n",
            "method",
            "trials",
            "mean",
            "mean_float",
            "stderr",
            "window_low",
            "window_high",
            "verdict",
        ])
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    for row in rows(reports) {
        w.serialize(row)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
