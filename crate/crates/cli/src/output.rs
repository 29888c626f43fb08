//! Deterministic serialization of run results.
//!
//! CSV numbers carry 17 significant digits with '.' as the decimal separator
//! and '\n' line endings, so identical inputs produce byte-identical files.

use serde::Serialize;
use sim_core::QGrid;

use crate::scenario::{Engine, Scenario};

/// 17 significant digits, locale-independent.
pub fn fmt_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Time series as `gamma1_t,value` rows.
pub fn time_series_csv(gamma1_t: &[f64], values: &[f64]) -> String {
    debug_assert_eq!(gamma1_t.len(), values.len());
    let mut out = String::from("gamma1_t,value\n");
    for (t, v) in gamma1_t.iter().zip(values) {
        out.push_str(&fmt_value(*t));
        out.push(',');
        out.push_str(&fmt_value(*v));
        out.push('\n');
    }
    out
}

/// Concurrence surface as `gamma1_t,theta2,concurrence` rows, time-major.
pub fn surface_csv(gamma1_t: &[f64], thetas: &[f64], values: &[Vec<f64>]) -> String {
    debug_assert_eq!(gamma1_t.len(), values.len());
    let mut out = String::from("gamma1_t,theta2,concurrence\n");
    for (t, row) in gamma1_t.iter().zip(values) {
        debug_assert_eq!(thetas.len(), row.len());
        for (theta, c) in thetas.iter().zip(row) {
            out.push_str(&fmt_value(*t));
            out.push(',');
            out.push_str(&fmt_value(*theta));
            out.push(',');
            out.push_str(&fmt_value(*c));
            out.push('\n');
        }
    }
    out
}

#[derive(Serialize)]
struct QGridFile<'a> {
    x_axis: &'a [f64],
    y_axis: &'a [f64],
    /// Rows follow y_axis; each row follows x_axis.
    values: Vec<&'a [f64]>,
}

/// Q grid as JSON `{x_axis, y_axis, values}` with row-major values.
pub fn q_grid_json(grid: &QGrid) -> String {
    let rows = grid.values.chunks(grid.x_axis.len()).collect();
    let file = QGridFile {
        x_axis: &grid.x_axis,
        y_axis: &grid.y_axis,
        values: rows,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("grid serialization cannot fail");
    text.push('\n');
    text
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub library_version: &'a str,
    pub engine: Engine,
    pub wall_time_ms: f64,
    /// Fully resolved scenario; parseable back via the JSON input path.
    pub scenario: &'a Scenario,
    /// Output files written alongside this manifest.
    pub files: Vec<String>,
}

pub fn manifest_json(manifest: &Manifest) -> String {
    let mut text =
        serde_json::to_string_pretty(manifest).expect("manifest serialization cannot fail");
    text.push('\n');
    text
}
