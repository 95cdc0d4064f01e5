//! Deterministic CSV rendering of sweep results and crossover curves.
//!
//! Every float is printed with six significant digits in scientific
//! notation so repeated runs produce byte-identical files.

use crate::energy::{FrequencyPoint, ParallelismPoint, ScenarioReport, JOULES_PER_UNIT};

/// Column order of the sweep CSV.
pub const CSV_HEADER: &str =
    "scheme,rows,cols,word_width,p,speedup,energy_decrease_pct,edp_decrease_pct,rbl_J,wl_J,sense_J,periph_J";

/// Column order of the frequency-crossover curve CSV (per-op totals,
/// idle leakage billed to the charged-resting op).
pub const FREQUENCY_CURVE_HEADER: &str = "frequency_hz,precharged_rest_J,discharged_rest_J";

/// Column order of the parallelism-crossover curve CSV (per-op bitline
/// energy, the component the break-even compares).
pub const PARALLELISM_CURVE_HEADER: &str = "parallelism,current_bitline_J,precharged_bitline_J";

/// Six significant digits, scientific notation.
pub fn format_sci(value: f64) -> String {
    format!("{value:.5e}")
}

fn csv_row(report: &ScenarioReport) -> String {
    let energy = &report.op_energy;
    let joules = |units: f64| format_sci(units * JOULES_PER_UNIT);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        report.scheme.label(),
        report.rows,
        report.cols,
        report.word_width,
        format_sci(report.parallelism),
        format_sci(report.speedup),
        format_sci(report.energy_decrease * 100.0),
        format_sci(report.edp_decrease * 100.0),
        joules(energy.bitline),
        joules(energy.wordline),
        joules(energy.sensing()),
        joules(energy.compute),
    )
}

/// Renders the full CSV document, header first, one row per scenario.
pub fn sweep_csv(reports: &[ScenarioReport]) -> String {
    let mut out = String::with_capacity(64 * (reports.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for report in reports {
        out.push_str(&csv_row(report));
        out.push('\n');
    }
    out
}

/// Renders the frequency-crossover curve, one row per sampled rate.
pub fn frequency_curve_csv(points: &[FrequencyPoint]) -> String {
    let mut out = String::with_capacity(48 * (points.len() + 1));
    out.push_str(FREQUENCY_CURVE_HEADER);
    out.push('\n');
    for point in points {
        out.push_str(&format!(
            "{},{},{}\n",
            format_sci(point.hz),
            format_sci(point.precharged_rest * JOULES_PER_UNIT),
            format_sci(point.discharged_rest * JOULES_PER_UNIT)
        ));
    }
    out
}

/// Renders the parallelism-crossover curve, one row per sampled fraction.
pub fn parallelism_curve_csv(points: &[ParallelismPoint]) -> String {
    let mut out = String::with_capacity(48 * (points.len() + 1));
    out.push_str(PARALLELISM_CURVE_HEADER);
    out.push('\n');
    for point in points {
        out.push_str(&format!(
            "{},{},{}\n",
            format_sci(point.parallelism),
            format_sci(point.current_bitline * JOULES_PER_UNIT),
            format_sci(point.precharged_bitline * JOULES_PER_UNIT)
        ));
    }
    out
}
