//! CSV and SVG emitters. Output is deterministic: same rows, same bytes.
//! Numbers in CSV files carry 17 significant digits, enough to round-trip
//! any double exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::sweep::{ClassicalRow, SweepRow, TiltRow, CLASSICAL_BOUND, QUANTUM_BOUND};
use crate::HarnessError;

/// 17 significant digits: exact round-trip for f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    debug_assert!(!rows.is_empty());
    let mut out = String::from(
        "retardation_waves,env_min_minus,env_max_minus,env_min_plus,env_max_plus,classical_bound,quantum_bound\n",
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt(row.retardation),
            fmt(row.env_min_minus),
            fmt(row.env_max_minus),
            fmt(row.env_min_plus),
            fmt(row.env_max_plus),
            fmt(CLASSICAL_BOUND),
            fmt(QUANTUM_BOUND),
        );
    }
    out
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<(), HarnessError> {
    write_file(path, csv_string(rows))
}

pub fn tilt_csv_string(rows: &[TiltRow]) -> String {
    debug_assert!(!rows.is_empty());
    let mut out = String::from("delta_radians,k_minus,k_plus\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt(row.delta),
            fmt(row.k_minus),
            fmt(row.k_plus)
        );
    }
    out
}

pub fn emit_tilt_csv(rows: &[TiltRow], path: &Path) -> Result<(), HarnessError> {
    write_file(path, tilt_csv_string(rows))
}

pub fn classical_csv_string(rows: &[ClassicalRow]) -> String {
    debug_assert!(!rows.is_empty());
    let mut out = String::from("p,k12,k23,k13,k_minus,k_plus\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt(row.p),
            fmt(row.k12),
            fmt(row.k23),
            fmt(row.k13),
            fmt(row.k_minus),
            fmt(row.k_plus)
        );
    }
    out
}

pub fn emit_classical_csv(rows: &[ClassicalRow], path: &Path) -> Result<(), HarnessError> {
    write_file(path, classical_csv_string(rows))
}

// Plot geometry shared by both panels.
const PANEL_WIDTH: f64 = 760.0;
const PANEL_HEIGHT: f64 = 420.0;
const PLOT_LEFT: f64 = 70.0;
const PLOT_RIGHT: f64 = 720.0;
const PLOT_TOP: f64 = 34.0;
const PLOT_BOTTOM: f64 = 378.0;
const Y_LO: f64 = -1.7;
const Y_HI: f64 = 3.3;

struct PanelScale {
    r_min: f64,
    r_span: f64,
}

impl PanelScale {
    fn new(rows: &[SweepRow]) -> Self {
        let r_min = rows.first().map(|r| r.retardation).unwrap_or(0.0);
        let r_max = rows.last().map(|r| r.retardation).unwrap_or(0.0);
        Self {
            r_min,
            r_span: (r_max - r_min).max(1e-9),
        }
    }

    fn x(&self, r: f64) -> f64 {
        PLOT_LEFT + (r - self.r_min) / self.r_span * (PLOT_RIGHT - PLOT_LEFT)
    }

    fn y(&self, v: f64) -> f64 {
        PLOT_BOTTOM - (v - Y_LO) / (Y_HI - Y_LO) * (PLOT_BOTTOM - PLOT_TOP)
    }
}

/// Standalone SVG with one panel per inequality. Each panel holds exactly
/// two polyline series (envelope minimum and maximum) over the dashed
/// classical limit at −1 and the quantum bound at −1.5.
pub fn svg_string(rows: &[SweepRow]) -> String {
    debug_assert!(!rows.is_empty());
    let scale = PanelScale::new(rows);
    let mut svg = String::new();
    let total_height = 2.0 * PANEL_HEIGHT;
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_WIDTH}" height="{total_height}" viewBox="0 0 {PANEL_WIDTH} {total_height}">"##
    );
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="{PANEL_WIDTH}" height="{total_height}" fill="#ffffff"/>"##
    );
    write_panel(
        &mut svg,
        rows,
        &scale,
        "panel-minus",
        "K- envelope",
        0.0,
        |r| (r.env_min_minus, r.env_max_minus),
    );
    write_panel(
        &mut svg,
        rows,
        &scale,
        "panel-plus",
        "K+ envelope",
        PANEL_HEIGHT,
        |r| (r.env_min_plus, r.env_max_plus),
    );
    svg.push_str("</svg>\n");
    svg
}

fn write_panel(
    svg: &mut String,
    rows: &[SweepRow],
    scale: &PanelScale,
    id: &str,
    title: &str,
    y_offset: f64,
    series: impl Fn(&SweepRow) -> (f64, f64),
) {
    let _ = writeln!(svg, r##"<g id="{id}" transform="translate(0,{y_offset})">"#);
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="22" font-family="sans-serif" font-size="16" fill="#000000">{title}</text>"##,
        PLOT_LEFT
    );

    // Axes.
    let _ = writeln!(
        svg,
        r##"<line x1="{PLOT_LEFT:.2}" y1="{PLOT_TOP:.2}" x2="{PLOT_LEFT:.2}" y2="{PLOT_BOTTOM:.2}" stroke="#000000" stroke-width="1"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{PLOT_LEFT:.2}" y1="{PLOT_BOTTOM:.2}" x2="{PLOT_RIGHT:.2}" y2="{PLOT_BOTTOM:.2}" stroke="#000000" stroke-width="1"/>"##
    );

    // Y ticks and labels.
    for v in [-1.5, -1.0, 0.0, 1.0, 2.0, 3.0] {
        let y = scale.y(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{PLOT_LEFT:.2}" y2="{y:.2}" stroke="#000000" stroke-width="1"/>"##,
            PLOT_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end" fill="#000000">{v}</text>"##,
            PLOT_LEFT - 9.0,
            y + 4.0
        );
    }

    // X ticks and labels.
    for i in 0..=5 {
        let r = scale.r_min + scale.r_span * i as f64 / 5.0;
        let x = scale.x(r);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{PLOT_BOTTOM:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000000" stroke-width="1"/>"##,
            PLOT_BOTTOM + 5.0
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" fill="#000000">{r:.1}</text>"##,
            PLOT_BOTTOM + 20.0
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" fill="#000000">retardation (waves)</text>"##,
        0.5 * (PLOT_LEFT + PLOT_RIGHT),
        PLOT_BOTTOM + 38.0
    );

    // Bounds: dashed classical limit at −1, dotted quantum floor at −1.5.
    let y_classical = scale.y(CLASSICAL_BOUND);
    let _ = writeln!(
        svg,
        r##"<line x1="{PLOT_LEFT:.2}" y1="{y_classical:.2}" x2="{PLOT_RIGHT:.2}" y2="{y_classical:.2}" stroke="#555555" stroke-width="1" stroke-dasharray="7 4"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="#555555">classical limit -1</text>"##,
        PLOT_RIGHT - 120.0,
        y_classical - 5.0
    );
    let y_quantum = scale.y(QUANTUM_BOUND);
    let _ = writeln!(
        svg,
        r##"<line x1="{PLOT_LEFT:.2}" y1="{y_quantum:.2}" x2="{PLOT_RIGHT:.2}" y2="{y_quantum:.2}" stroke="#999999" stroke-width="1" stroke-dasharray="2 4"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="#999999">quantum bound -1.5</text>"##,
        PLOT_RIGHT - 130.0,
        y_quantum + 14.0
    );

    // The two envelope series.
    let mut min_points = String::new();
    let mut max_points = String::new();
    for row in rows {
        let (lo, hi) = series(row);
        let x = scale.x(row.retardation);
        let _ = write!(min_points, "{x:.2},{:.2} ", scale.y(lo));
        let _ = write!(max_points, "{x:.2},{:.2} ", scale.y(hi));
    }
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{}"/>"##,
        min_points.trim_end()
    );
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#d62728" stroke-width="1.5" points="{}"/>"##,
        max_points.trim_end()
    );

    // Legend.
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{PLOT_TOP:.2}" font-family="sans-serif" font-size="12" fill="#1f77b4">envelope min</text>"##,
        PLOT_RIGHT - 220.0
    );
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{PLOT_TOP:.2}" font-family="sans-serif" font-size="12" fill="#d62728">envelope max</text>"##,
        PLOT_RIGHT - 110.0
    );
    svg.push_str("</g>\n");
}

pub fn emit_svg(rows: &[SweepRow], path: &Path) -> Result<(), HarnessError> {
    write_file(path, svg_string(rows))
}

fn write_file(path: &Path, content: String) -> Result<(), HarnessError> {
    std::fs::write(path, content).map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{PartialConfig, SweepConfig};
    use crate::sweep::run_envelope_sweep;

    fn rows() -> Vec<SweepRow> {
        let cfg: SweepConfig = PartialConfig {
            r_max: Some(4.0),
            r_step: Some(1.0),
            tilt_samples: Some(720),
            ..Default::default()
        }
        .into_config()
        .unwrap();
        run_envelope_sweep(&cfg)
    }

    #[test]
    fn csv_header_and_first_row() {
        let rows = rows();
        let csv = csv_string(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "retardation_waves,env_min_minus,env_max_minus,env_min_plus,env_max_plus,classical_bound,quantum_bound"
        );
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(first[0], 0.0);
        assert!((first[1] + 1.5).abs() <= 1e-9);
        assert!((first[2] - 3.0).abs() <= 1e-9);
        assert_eq!(first[5], -1.0);
        assert_eq!(first[6], -1.5);
    }

    #[test]
    fn csv_numbers_round_trip_exactly() {
        let rows = rows();
        let csv = csv_string(&rows);
        for (line, row) in csv.lines().skip(1).zip(rows.iter()) {
            let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            assert_eq!(vals[0], row.retardation);
            assert_eq!(vals[1], row.env_min_minus);
            assert_eq!(vals[2], row.env_max_minus);
            assert_eq!(vals[3], row.env_min_plus);
            assert_eq!(vals[4], row.env_max_plus);
        }
    }

    #[test]
    fn output_is_deterministic() {
        let rows = rows();
        assert_eq!(csv_string(&rows), csv_string(&rows));
        assert_eq!(svg_string(&rows), svg_string(&rows));
    }

    #[test]
    fn svg_parses_and_has_two_polylines_per_panel() {
        let svg = svg_string(&rows());
        let doc = roxmltree::Document::parse(&svg).expect("well-formed XML");
        for panel in ["panel-minus", "panel-plus"] {
            let group = doc
                .descendants()
                .find(|n| n.attribute("id") == Some(panel))
                .expect("panel present");
            let polylines = group
                .descendants()
                .filter(|n| n.has_tag_name("polyline"))
                .count();
            assert_eq!(polylines, 2, "panel {panel}");
        }
        // Exactly two series per panel, nothing else drawn as a polyline.
        let total = doc
            .descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .count();
        assert_eq!(total, 4);
    }

    #[test]
    fn svg_single_row_does_not_degenerate() {
        let row = rows()[0];
        let svg = svg_string(&[row]);
        assert!(roxmltree::Document::parse(&svg).is_ok());
    }
}
