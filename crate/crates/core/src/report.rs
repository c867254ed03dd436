//! Serialization of scan reports: JSON (full report), CSV (one row per
//! cell) and PGM P2 heatmaps with a plain-text sidecar describing the grid
//! geometry. Reports are byte-stable: cells are stored in row-major order
//! and all derived artifacts iterate that order.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::regions::{CellStatus, ScanReport};

/// Pixel levels of the heatmap: failures black, passes white, everything
/// not decided (band, indeterminate, untested) mid-gray.
pub const PGM_FAIL: u8 = 0;
pub const PGM_BAND: u8 = 128;
pub const PGM_PASS: u8 = 255;

/// Output format selector shared by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pgm,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "pgm" => Some(Format::Pgm),
            _ => None,
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pgm => "pgm",
        }
    }
}

pub fn to_json(report: &ScanReport) -> serde_json::Result<String> {
    serde_json::to_string_pretty(report)
}

fn status_name(status: CellStatus) -> &'static str {
    match status {
        CellStatus::Pass => "pass",
        CellStatus::Fail => "fail",
        CellStatus::Indeterminate => "indeterminate",
        CellStatus::Skipped => "skipped",
    }
}

/// CSV with the columns `alpha,beta,verdict,margin`; skipped cells leave
/// the margin empty.
pub fn to_csv(report: &ScanReport) -> String {
    let mut out = String::from("alpha,beta,verdict,margin\n");
    for cell in &report.cells {
        match cell.margin {
            Some(m) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{:.9e}",
                    cell.alpha,
                    cell.beta,
                    status_name(cell.status),
                    m
                );
            }
            None => {
                let _ = writeln!(out, "{},{},{},", cell.alpha, cell.beta, status_name(cell.status));
            }
        }
    }
    out
}

/// ASCII PGM (P2) heatmap of the grid, row 0 at `beta_max`.
pub fn to_pgm(report: &ScanReport) -> String {
    let cols = report.grid.cols();
    let rows = report.grid.rows();
    let mut out = String::new();
    let _ = writeln!(out, "P2");
    let _ = writeln!(out, "# {} {:?}", report.theorem, report.direction);
    let _ = writeln!(out, "{cols} {rows}");
    let _ = writeln!(out, "255");
    for row in 0..rows {
        let mut line = String::new();
        for col in 0..cols {
            let cell = &report.cells[row * cols + col];
            let level = match cell.status {
                CellStatus::Pass => PGM_PASS,
                CellStatus::Fail => PGM_FAIL,
                CellStatus::Indeterminate | CellStatus::Skipped => PGM_BAND,
            };
            if col > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{level}");
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

/// Sidecar text recording the grid geometry of a PGM heatmap.
pub fn pgm_sidecar(report: &ScanReport) -> String {
    let g = &report.grid;
    let mut out = String::new();
    let _ = writeln!(out, "theorem = {}", report.theorem);
    let _ = writeln!(out, "direction = {:?}", report.direction);
    let _ = writeln!(out, "alpha_min = {}", g.alpha_min);
    let _ = writeln!(out, "alpha_max = {}", g.alpha_max);
    let _ = writeln!(out, "beta_min = {}", g.beta_min);
    let _ = writeln!(out, "beta_max = {}", g.beta_max);
    let _ = writeln!(out, "step = {}", g.step);
    let _ = writeln!(out, "columns = {}", g.cols());
    let _ = writeln!(out, "rows = {}", g.rows());
    let _ = writeln!(out, "row0_beta = {}", g.beta_max);
    let _ = writeln!(out, "col0_alpha = {}", g.alpha_min);
    let _ = writeln!(out, "levels = 0:fail 128:band/indeterminate 255:pass");
    out
}

/// Writes the report in the requested format; PGM also writes the
/// `<path>.txt` sidecar.
pub fn write_report(report: &ScanReport, format: Format, path: &Path) -> io::Result<()> {
    match format {
        Format::Json => {
            let text = to_json(report).map_err(io::Error::other)?;
            std::fs::write(path, text)
        }
        Format::Csv => std::fs::write(path, to_csv(report)),
        Format::Pgm => {
            std::fs::write(path, to_pgm(report))?;
            let sidecar = path.with_extension(format!(
                "{}.txt",
                path.extension().and_then(|e| e.to_str()).unwrap_or("pgm")
            ));
            std::fs::write(sidecar, pgm_sidecar(report))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::SamplingProfile;
    use crate::regions::{
        scan, GridSpec, RegionVariant, TheoremId, TheoremInstance,
    };

    fn small_report() -> ScanReport {
        let inst = TheoremInstance::new(TheoremId::KofKK, None, None).unwrap();
        let grid = GridSpec {
            alpha_min: 0.0,
            alpha_max: 2.0,
            beta_min: 0.0,
            beta_max: 1.0,
            step: 0.5,
            boundary_exemption: 0.5,
        };
        let prof = SamplingProfile {
            radii: vec![0.3, 0.7],
            sharp_radii: vec![],
            angular_samples: 256,
            ..SamplingProfile::default()
        };
        let battery = inst.default_battery().unwrap();
        scan(&inst, &battery, &grid, &prof, RegionVariant::Stated).unwrap()
    }

    #[test]
    fn csv_has_one_row_per_cell() {
        let report = small_report();
        let csv = to_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "alpha,beta,verdict,margin");
        assert_eq!(lines.len(), 1 + report.grid.cell_count());
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
    }

    #[test]
    fn pgm_shape_and_levels() {
        let report = small_report();
        let pgm = to_pgm(&report);
        let mut lines = pgm.lines();
        assert_eq!(lines.next(), Some("P2"));
        let _comment = lines.next().unwrap();
        assert_eq!(lines.next(), Some("5 3"));
        assert_eq!(lines.next(), Some("255"));
        let pixel_rows: Vec<&str> = lines.collect();
        assert_eq!(pixel_rows.len(), 3);
        for row in &pixel_rows {
            let values: Vec<u32> = row.split(' ').map(|v| v.parse().unwrap()).collect();
            assert_eq!(values.len(), 5);
            assert!(values.iter().all(|&v| v == 0 || v == 128 || v == 255));
        }
    }

    #[test]
    fn json_round_trips_to_value() {
        let report = small_report();
        let json = to_json(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["theorem"], "K.KK");
        assert_eq!(value["cells"].as_array().unwrap().len(), report.grid.cell_count());
    }

    #[test]
    fn writes_pgm_with_sidecar() {
        let report = small_report();
        let dir = std::env::temp_dir().join("hornich-report-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("heat.pgm");
        write_report(&report, Format::Pgm, &path).unwrap();
        assert!(path.exists());
        let sidecar = dir.join("heat.pgm.txt");
        let text = std::fs::read_to_string(sidecar).unwrap();
        assert!(text.contains("row0_beta = 1"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn identical_runs_are_byte_identical() {
        let a = small_report();
        let b = small_report();
        assert_eq!(to_csv(&a), to_csv(&b));
        assert_eq!(to_pgm(&a), to_pgm(&b));
    }
}
