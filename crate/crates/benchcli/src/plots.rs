//! Plot rendering: standalone SVG files summarizing a results table.
//!
//! Three figures per campaign: solution-status bars, normalized-length
//! box plots against the 100-point reference, and smoothness box plots.
//! Every bar and box carries its numbers as `data-` attributes so the
//! figures stay verifiable against the CSV they were drawn from.

use std::fs;
use std::path::{Path as StdPath, PathBuf};

use sbo_core::planners::SolutionStatus;
use thiserror::Error;

use crate::records::BenchRecord;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("no records to plot")]
    Empty,
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Five-number summary plus outliers, as drawn in a box plot. Whiskers
/// reach the most extreme data points within 1.5·IQR of the box.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub lo_whisker: f64,
    pub hi_whisker: f64,
    pub outliers: Vec<f64>,
}

/// Linear-interpolation quantile (the common spreadsheet convention) on
/// an ascending slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn box_stats(values: &[f64]) -> Option<BoxStats> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("metric values are never NaN"));
    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;
    let lo_whisker = sorted
        .iter()
        .copied()
        .find(|v| *v >= lo_fence)
        .unwrap_or(q1);
    let hi_whisker = sorted
        .iter()
        .rev()
        .copied()
        .find(|v| *v <= hi_fence)
        .unwrap_or(q3);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|v| *v < lo_fence || *v > hi_fence)
        .collect();
    Some(BoxStats {
        q1,
        median,
        q3,
        lo_whisker,
        hi_whisker,
        outliers,
    })
}

// Canvas geometry shared by all three figures.
const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 460.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 64.0;

const EXACT_COLOR: &str = "#43a047";
const APPROX_COLOR: &str = "#fb8c00";
const FAILURE_COLOR: &str = "#e53935";
const BOX_FILL: &str = "#90caf9";
const BOX_STROKE: &str = "#1565c0";

struct Frame {
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x_slot(&self, index: usize, count: usize) -> (f64, f64) {
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let slot = plot_w / count as f64;
        (MARGIN_LEFT + index as f64 * slot, slot)
    }

    fn y(&self, value: f64) -> f64 {
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let t = if self.y_max > self.y_min {
            (value - self.y_min) / (self.y_max - self.y_min)
        } else {
            0.5
        };
        HEIGHT - MARGIN_BOTTOM - t * plot_h
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{x}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{title}</text>\n",
        x = WIDTH / 2.0
    )
}

fn axis_and_ticks(frame: &Frame, unit: &str) -> String {
    let mut out = String::new();
    let x0 = MARGIN_LEFT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    out.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{MARGIN_TOP}\" x2=\"{x0}\" y2=\"{y0}\" stroke=\"#444\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"#444\"/>\n",
        x1 = WIDTH - MARGIN_RIGHT
    ));
    let ticks = 5;
    for i in 0..=ticks {
        let value = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / ticks as f64;
        let y = frame.y(value);
        out.push_str(&format!(
            "<line x1=\"{x2}\" y1=\"{y}\" x2=\"{x0}\" y2=\"{y}\" stroke=\"#444\"/>\n\
             <text x=\"{x3}\" y=\"{ty}\" text-anchor=\"end\" font-size=\"11\">{value:.1}</text>\n",
            x2 = x0 - 4.0,
            x3 = x0 - 7.0,
            ty = y + 4.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"16\" y=\"{y}\" font-size=\"12\" transform=\"rotate(-90 16 {y})\" \
         text-anchor=\"middle\">{unit}</text>\n",
        y = (MARGIN_TOP + y0) / 2.0
    ));
    out
}

fn x_label(out: &mut String, name: &str, x: f64, slot: f64) {
    out.push_str(&format!(
        "<text x=\"{cx}\" y=\"{y}\" text-anchor=\"middle\" font-size=\"11\">{name}</text>\n",
        cx = x + slot / 2.0,
        y = HEIGHT - MARGIN_BOTTOM + 18.0
    ));
}

fn planner_order(records: &[BenchRecord]) -> Vec<String> {
    let mut order: Vec<String> = Vec::new();
    for r in records {
        if !order.iter().any(|p| *p == r.planner) {
            order.push(r.planner.clone());
        }
    }
    order
}

fn render_status_figure(records: &[BenchRecord]) -> String {
    let planners = planner_order(records);
    let frame = Frame {
        y_min: 0.0,
        y_max: 100.0,
    };
    let mut out = svg_open("Solution status per planner");
    out.push_str(&axis_and_ticks(&frame, "share of runs, %"));
    for (i, name) in planners.iter().enumerate() {
        let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.planner == *name).collect();
        let count = |status: SolutionStatus| rows.iter().filter(|r| r.status == status).count();
        let exact = count(SolutionStatus::Exact);
        let approximate = count(SolutionStatus::Approximate);
        let failure = count(SolutionStatus::Failure);
        let total = rows.len() as f64;

        let (x, slot) = frame.x_slot(i, planners.len());
        let bar_w = slot * 0.6;
        let bar_x = x + (slot - bar_w) / 2.0;
        out.push_str(&format!(
            "<g class=\"bar\" data-planner=\"{name}\" data-exact=\"{exact}\" \
             data-approximate=\"{approximate}\" data-failure=\"{failure}\">\n"
        ));
        let mut cumulative = 0.0;
        for (value, color) in [
            (exact, EXACT_COLOR),
            (approximate, APPROX_COLOR),
            (failure, FAILURE_COLOR),
        ] {
            let share = 100.0 * value as f64 / total;
            if share > 0.0 {
                let y_top = frame.y(cumulative + share);
                let height = frame.y(cumulative) - y_top;
                out.push_str(&format!(
                    "<rect x=\"{bar_x:.1}\" y=\"{y_top:.1}\" width=\"{bar_w:.1}\" \
                     height=\"{height:.1}\" fill=\"{color}\"/>\n"
                ));
            }
            cumulative += share;
        }
        out.push_str("</g>\n");
        x_label(&mut out, name, x, slot);
    }
    let legend = [
        ("Exact", EXACT_COLOR),
        ("Approximate", APPROX_COLOR),
        ("Failure", FAILURE_COLOR),
    ];
    for (i, (label, color)) in legend.iter().enumerate() {
        let x = MARGIN_LEFT + 140.0 * i as f64;
        let y = HEIGHT - 22.0;
        out.push_str(&format!(
            "<rect x=\"{x}\" y=\"{ry}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n\
             <text x=\"{tx}\" y=\"{y}\" font-size=\"11\">{label}</text>\n",
            ry = y - 10.0,
            tx = x + 16.0
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn render_box_figure(
    records: &[BenchRecord],
    title: &str,
    unit: &str,
    value_of: impl Fn(&BenchRecord) -> Option<f64>,
    reference: Option<f64>,
) -> String {
    let planners = planner_order(records);
    let per_planner: Vec<(String, Option<BoxStats>)> = planners
        .iter()
        .map(|name| {
            let values: Vec<f64> = records
                .iter()
                .filter(|r| r.planner == *name)
                .filter_map(&value_of)
                .collect();
            (name.clone(), box_stats(&values))
        })
        .collect();

    // Scale to cover every drawn feature: whiskers, outliers, and the
    // reference line when present.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (_, stats) in per_planner.iter() {
        if let Some(s) = stats {
            lo = lo.min(s.lo_whisker).min(
                s.outliers
                    .first()
                    .copied()
                    .unwrap_or(f64::INFINITY),
            );
            hi = hi.max(s.hi_whisker).max(
                s.outliers
                    .last()
                    .copied()
                    .unwrap_or(f64::NEG_INFINITY),
            );
        }
    }
    if let Some(r) = reference {
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    let pad = ((hi - lo) * 0.08).max(1e-9);
    let frame = Frame {
        y_min: lo - pad,
        y_max: hi + pad,
    };

    let mut out = svg_open(title);
    out.push_str(&axis_and_ticks(&frame, unit));
    if let Some(r) = reference {
        let y = frame.y(r);
        out.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y:.1}\" x2=\"{x1}\" y2=\"{y:.1}\" stroke=\"#757575\" \
             stroke-dasharray=\"6 4\" class=\"reference\" data-value=\"{r}\"/>\n\
             <text x=\"{x1}\" y=\"{ty:.1}\" text-anchor=\"end\" font-size=\"10\" \
             fill=\"#757575\">{r}</text>\n",
            x0 = MARGIN_LEFT,
            x1 = WIDTH - MARGIN_RIGHT,
            ty = y - 4.0
        ));
    }

    for (i, (name, stats)) in per_planner.iter().enumerate() {
        let (x, slot) = frame.x_slot(i, per_planner.len());
        x_label(&mut out, name, x, slot);
        let Some(s) = stats else {
            out.push_str(&format!(
                "<text x=\"{cx}\" y=\"{cy}\" text-anchor=\"middle\" font-size=\"10\" \
                 fill=\"#999\">no data</text>\n",
                cx = x + slot / 2.0,
                cy = (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0
            ));
            continue;
        };
        let box_w = slot * 0.5;
        let box_x = x + (slot - box_w) / 2.0;
        let cx = x + slot / 2.0;
        let outlier_list = s
            .outliers
            .iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "<g class=\"box\" data-planner=\"{name}\" data-q1=\"{q1}\" data-median=\"{median}\" \
             data-q3=\"{q3}\" data-lo=\"{lo}\" data-hi=\"{hi}\" data-outliers=\"{outlier_list}\">\n",
            q1 = s.q1,
            median = s.median,
            q3 = s.q3,
            lo = s.lo_whisker,
            hi = s.hi_whisker,
        ));
        let (yq1, ymed, yq3) = (frame.y(s.q1), frame.y(s.median), frame.y(s.q3));
        let (ylo, yhi) = (frame.y(s.lo_whisker), frame.y(s.hi_whisker));
        // Whisker stems and caps, then the box, then the median bar.
        out.push_str(&format!(
            "<line x1=\"{cx:.1}\" y1=\"{ylo:.1}\" x2=\"{cx:.1}\" y2=\"{yq1:.1}\" stroke=\"{BOX_STROKE}\"/>\n\
             <line x1=\"{cx:.1}\" y1=\"{yhi:.1}\" x2=\"{cx:.1}\" y2=\"{yq3:.1}\" stroke=\"{BOX_STROKE}\"/>\n\
             <line x1=\"{wx0:.1}\" y1=\"{ylo:.1}\" x2=\"{wx1:.1}\" y2=\"{ylo:.1}\" stroke=\"{BOX_STROKE}\"/>\n\
             <line x1=\"{wx0:.1}\" y1=\"{yhi:.1}\" x2=\"{wx1:.1}\" y2=\"{yhi:.1}\" stroke=\"{BOX_STROKE}\"/>\n\
             <rect x=\"{box_x:.1}\" y=\"{yq3:.1}\" width=\"{box_w:.1}\" height=\"{bh:.1}\" \
             fill=\"{BOX_FILL}\" stroke=\"{BOX_STROKE}\"/>\n\
             <line x1=\"{box_x:.1}\" y1=\"{ymed:.1}\" x2=\"{bx1:.1}\" y2=\"{ymed:.1}\" \
             stroke=\"{BOX_STROKE}\" stroke-width=\"2\"/>\n",
            wx0 = cx - box_w * 0.25,
            wx1 = cx + box_w * 0.25,
            bh = (yq1 - yq3).max(0.0),
            bx1 = box_x + box_w,
        ));
        for v in &s.outliers {
            out.push_str(&format!(
                "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"2.5\" fill=\"none\" \
                 stroke=\"{BOX_STROKE}\"/>\n",
                cy = frame.y(*v)
            ));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Writes the three figures for a results table into `out_dir`, named
/// `{stem}_status.svg`, `{stem}_lengths.svg`, `{stem}_smoothness.svg`.
pub fn emit_plots(
    records: &[BenchRecord],
    out_dir: &StdPath,
    stem: &str,
) -> Result<Vec<PathBuf>, PlotError> {
    if records.is_empty() {
        return Err(PlotError::Empty);
    }
    let figures = [
        ("status", render_status_figure(records)),
        (
            "lengths",
            render_box_figure(
                records,
                "Normalized path length per planner",
                "normalized length (reference = 100)",
                |r| r.normalized_length,
                Some(100.0),
            ),
        ),
        (
            "smoothness",
            render_box_figure(
                records,
                "Path smoothness per planner",
                "smoothness, rad",
                |r| r.smoothness,
                None,
            ),
        ),
    ];
    let mut paths = Vec::new();
    for (suffix, svg) in figures {
        let path = out_dir.join(format!("{stem}_{suffix}.svg"));
        fs::write(&path, svg).map_err(|source| PlotError::Io {
            path: path.clone(),
            source,
        })?;
        paths.push(path);
    }
    Ok(paths)
}
