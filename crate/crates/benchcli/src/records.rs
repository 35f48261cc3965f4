//! Result rows, their CSV form, and per-planner summaries.
//!
//! The CSV codec is deliberately round-trip exact: floats are printed
//! with the shortest representation that parses back to the identical
//! bits, absent metrics are empty cells, and `parse_csv(emit_csv(rows))
//! == rows` holds for every row the harness can produce. None of the
//! emitted fields can contain a comma, so no quoting layer is needed.

use sbo_core::metrics::RunRecord;
use sbo_core::planners::SolutionStatus;
use thiserror::Error;

pub const CSV_HEADER: &str = "planner,problem_id,repeat,status,raw_length_m,normalized_length,\
                              smoothness_rad,wall_time_s,iterations,samples,seed";

/// One benchmark run as written to the results file: the metric record
/// plus the planner effort counters and the seed that reproduces it.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub planner: String,
    pub problem_id: u32,
    pub repeat: u32,
    pub status: SolutionStatus,
    pub raw_length: Option<f64>,
    pub normalized_length: Option<f64>,
    pub smoothness: Option<f64>,
    pub wall_time: f64,
    pub iterations: u64,
    pub samples: u64,
    pub seed: u64,
}

impl BenchRecord {
    /// The metrics-module view of this row, for its consistency checks.
    pub fn run_record(&self) -> RunRecord {
        RunRecord {
            planner: self.planner.clone(),
            problem_id: self.problem_id,
            repeat: self.repeat,
            status: self.status,
            raw_length: self.raw_length,
            normalized_length: self.normalized_length,
            smoothness: self.smoothness,
            wall_time: self.wall_time,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RecordError {
    #[error("ground-truth length must be positive, got {0}")]
    NonPositiveGroundTruth(f64),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("unexpected header: {0}")]
    WrongHeader(String),
}

/// Scales a path length so the ground-truth plan for the same problem
/// scores 100.
pub fn normalize_length(raw: f64, ground_truth: f64) -> Result<f64, RecordError> {
    if !(ground_truth > 0.0) {
        return Err(RecordError::NonPositiveGroundTruth(ground_truth));
    }
    Ok(100.0 * raw / ground_truth)
}

fn status_str(status: SolutionStatus) -> &'static str {
    match status {
        SolutionStatus::Exact => "Exact",
        SolutionStatus::Approximate => "Approximate",
        SolutionStatus::Failure => "Failure",
    }
}

fn status_from_str(text: &str) -> Option<SolutionStatus> {
    match text {
        "Exact" => Some(SolutionStatus::Exact),
        "Approximate" => Some(SolutionStatus::Approximate),
        "Failure" => Some(SolutionStatus::Failure),
        _ => None,
    }
}

fn opt_f64(value: Option<f64>) -> String {
    // `{}` on f64 is the shortest digit string that round-trips.
    value.map(|v| format!("{v}")).unwrap_or_default()
}

pub fn emit_csv(records: &[BenchRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.planner,
            r.problem_id,
            r.repeat,
            status_str(r.status),
            opt_f64(r.raw_length),
            opt_f64(r.normalized_length),
            opt_f64(r.smoothness),
            r.wall_time,
            r.iterations,
            r.samples,
            r.seed,
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>, RecordError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(RecordError::MissingHeader)?;
    if header != CSV_HEADER {
        return Err(RecordError::WrongHeader(header.to_string()));
    }
    let mut records = Vec::new();
    for (index, line) in lines {
        if line.is_empty() {
            continue;
        }
        let malformed = |message: String| RecordError::Malformed {
            line: index + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(malformed(format!("expected 11 fields, got {}", fields.len())));
        }
        let parse_num = |field: &str, name: &str| -> Result<f64, RecordError> {
            field
                .parse::<f64>()
                .map_err(|e| malformed(format!("{name}: {e}")))
        };
        let parse_opt = |field: &str, name: &str| -> Result<Option<f64>, RecordError> {
            if field.is_empty() {
                Ok(None)
            } else {
                parse_num(field, name).map(Some)
            }
        };
        records.push(BenchRecord {
            planner: fields[0].to_string(),
            problem_id: fields[1]
                .parse()
                .map_err(|e| malformed(format!("problem_id: {e}")))?,
            repeat: fields[2]
                .parse()
                .map_err(|e| malformed(format!("repeat: {e}")))?,
            status: status_from_str(fields[3])
                .ok_or_else(|| malformed(format!("unknown status \"{}\"", fields[3])))?,
            raw_length: parse_opt(fields[4], "raw_length_m")?,
            normalized_length: parse_opt(fields[5], "normalized_length")?,
            smoothness: parse_opt(fields[6], "smoothness_rad")?,
            wall_time: parse_num(fields[7], "wall_time_s")?,
            iterations: fields[8]
                .parse()
                .map_err(|e| malformed(format!("iterations: {e}")))?,
            samples: fields[9]
                .parse()
                .map_err(|e| malformed(format!("samples: {e}")))?,
            seed: fields[10]
                .parse()
                .map_err(|e| malformed(format!("seed: {e}")))?,
        });
    }
    Ok(records)
}

/// Per-planner aggregate over a set of rows.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannerSummary {
    pub planner: String,
    pub runs: usize,
    pub exact: usize,
    pub median_normalized: Option<f64>,
    pub median_smoothness: Option<f64>,
}

impl PlannerSummary {
    pub fn exact_rate(&self) -> f64 {
        self.exact as f64 / self.runs as f64
    }
}

/// Aggregates rows per planner, in order of first appearance. Medians
/// are taken over the rows that carry the metric (runs that returned a
/// path); a planner with no such rows reports `None`.
pub fn summarize(records: &[BenchRecord]) -> Vec<PlannerSummary> {
    let mut order: Vec<&str> = Vec::new();
    for r in records {
        if !order.contains(&r.planner.as_str()) {
            order.push(&r.planner);
        }
    }
    order
        .into_iter()
        .map(|name| {
            let rows: Vec<&BenchRecord> =
                records.iter().filter(|r| r.planner == name).collect();
            let exact = rows
                .iter()
                .filter(|r| r.status == SolutionStatus::Exact)
                .count();
            let mut normalized: Vec<f64> =
                rows.iter().filter_map(|r| r.normalized_length).collect();
            let mut smoothness: Vec<f64> = rows.iter().filter_map(|r| r.smoothness).collect();
            PlannerSummary {
                planner: name.to_string(),
                runs: rows.len(),
                exact,
                median_normalized: median(&mut normalized),
                median_smoothness: median(&mut smoothness),
            }
        })
        .collect()
}

/// Median with the usual midpoint average on even counts. Sorts in
/// place; `None` on empty input.
pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("metric values are never NaN"));
    let n = values.len();
    if n % 2 == 1 {
        Some(values[n / 2])
    } else {
        Some(0.5 * (values[n / 2 - 1] + values[n / 2]))
    }
}

/// Renders the human-readable summary block appended to benchmark
/// output. States the measurement convention so logged numbers are
/// interpretable on their own.
pub fn render_summary(records: &[BenchRecord], interpolation_parameter: usize) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# lengths and smoothness measured on paths resampled to {interpolation_parameter} states\n"
    ));
    out.push_str(&format!(
        "{:<14} {:>5} {:>11} {:>12} {:>12}\n",
        "planner", "runs", "exact-rate", "med-norm", "med-smooth"
    ));
    for s in summarize(records) {
        let fmt_opt = |v: Option<f64>| match v {
            Some(v) => format!("{v:.2}"),
            None => "-".to_string(),
        };
        out.push_str(&format!(
            "{:<14} {:>5} {:>10.1}% {:>12} {:>12}\n",
            s.planner,
            s.runs,
            100.0 * s.exact_rate(),
            fmt_opt(s.median_normalized),
            fmt_opt(s.median_smoothness),
        ));
    }
    out
}
