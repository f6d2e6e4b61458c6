//! Tables and phase diagrams regenerated from computed results.
//!
//! [`report_tables`] looks in a results directory for `bounds.csv` (rows of
//! [`MeasurementBoundReport`]), `timing.csv` (rows of
//! [`TimingRow`](crate::experiments::TimingRow)) and phase-sweep outputs
//! (`summary.csv`, at the top level or one directory down). It writes
//! `table_v.csv`, `table_i.csv`, `table_phase.csv` and `phase.svg` for
//! whichever inputs it finds.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::bounds::MeasurementBoundReport;
use crate::experiments::{ThetaSummary, SUMMARY_HEADER, TIMING_HEADER, WIDTHS_HEADER};
use crate::{Error, Result};

pub const TABLE_V_HEADER: &str = "n,k,q_devore,m_devore,q_array,m_array,m_gaussian,m_moore,m_universal";
pub const TABLE_I_HEADER: &str = "n,k,family,m,mean_seconds,gaussian_over_family,successes,trials";
pub const TABLE_PHASE_HEADER: &str = "series,n,theta,m,width,phi50,mean_width,c1";

fn read_records(path: &Path, header: &str) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    let found = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != header {
        return Err(Error::Parse { path: path.to_path_buf(), line: 1, msg: format!("expected header '{header}'") });
    }
    Ok(reader.records().collect::<std::result::Result<_, _>>()?)
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, record: &csv::StringRecord, name: &str, header: &str) -> Result<T> {
    let idx = header.split(',').position(|h| h == name).expect("known column");
    record[idx].parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("column {name}: cannot parse '{}'", &record[idx]),
    })
}

fn opt_field(path: &Path, line: usize, record: &csv::StringRecord, name: &str, header: &str) -> Result<Option<f64>> {
    let idx = header.split(',').position(|h| h == name).expect("known column");
    if &record[idx] == "NA" {
        return Ok(None);
    }
    field(path, line, record, name, header).map(Some)
}

/// Reads a sweep's `summary.csv`.
pub fn read_summary_csv(path: &Path) -> Result<(usize, Vec<ThetaSummary>)> {
    let records = read_records(path, SUMMARY_HEADER)?;
    let h = SUMMARY_HEADER;
    let mut n = 0;
    let mut rows = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let line = i + 2;
        n = field(path, line, r, "n", h)?;
        rows.push(ThetaSummary {
            m: field(path, line, r, "m", h)?,
            theta: field(path, line, r, "theta", h)?,
            phi95: opt_field(path, line, r, "phi95", h)?,
            phi50: opt_field(path, line, r, "phi50", h)?,
            phi5: opt_field(path, line, r, "phi5", h)?,
            width: opt_field(path, line, r, "width", h)?,
        });
    }
    Ok((n, rows))
}

/// Reads `widths.csv`: mean width and `C_1`.
pub fn read_widths_csv(path: &Path) -> Result<(Option<f64>, Option<f64>)> {
    let records = read_records(path, WIDTHS_HEADER)?;
    let r = records.first().ok_or_else(|| Error::Parse { path: path.to_path_buf(), line: 2, msg: "no data row".into() })?;
    Ok((opt_field(path, 2, r, "mean_width", WIDTHS_HEADER)?, opt_field(path, 2, r, "c1", WIDTHS_HEADER)?))
}

/// One named set of phase-transition points.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub rows: Vec<ThetaSummary>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn sx(theta: f64) -> f64 {
    MARGIN + theta.clamp(0.0, 1.0) * (SIZE - 2.0 * MARGIN)
}

fn sy(phi: f64) -> f64 {
    SIZE - MARGIN - phi.clamp(0.0, 1.0) * (SIZE - 2.0 * MARGIN)
}

fn points(rows: &[&ThetaSummary], pick: impl Fn(&ThetaSummary) -> Option<f64>) -> Vec<(f64, f64)> {
    rows.iter().filter_map(|r| pick(r).map(|p| (sx(r.theta), sy(p)))).collect()
}

fn path_of(pts: &[(f64, f64)]) -> String {
    pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

/// Phase diagram: theta across, phi up, one colour per series, with the
/// 95%/5% band shaded and the 50% curve solid.
pub fn plot_phase(series: &[PlotSeries]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let (lo, hi) = (MARGIN, SIZE - MARGIN);
    let _ = writeln!(svg, r#"<rect x="{lo}" y="{lo}" width="{}" height="{}" fill="none" stroke="black"/>"#, hi - lo, hi - lo);
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let (x, y) = (sx(v), sy(v));
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{hi}" x2="{x:.2}" y2="{:.2}" stroke="#000" />"##, hi + 5.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{v:.1}</text>"#, hi + 18.0);
        let _ = writeln!(svg, r##"<line x1="{:.2}" y1="{y:.2}" x2="{lo}" y2="{y:.2}" stroke="#000" />"##, lo - 5.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#, lo - 8.0, y + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">theta = m/n</text>"#, SIZE / 2.0, SIZE - 14.0);
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">phi = k/m</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    for (s, item) in series.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let mut rows: Vec<&ThetaSummary> = item.rows.iter().collect();
        rows.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        let band: Vec<&ThetaSummary> = rows.iter().copied().filter(|r| r.phi95.is_some() && r.phi5.is_some()).collect();
        if band.len() >= 2 {
            let mut outline = points(&band, |r| r.phi5);
            outline.extend(points(&band, |r| r.phi95).into_iter().rev());
            let _ = writeln!(svg, r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#, path_of(&outline));
        }
        for (pick, dash) in [
            (&(|r: &ThetaSummary| r.phi95) as &dyn Fn(&ThetaSummary) -> Option<f64>, r#" stroke-dasharray="4 3""#),
            (&|r: &ThetaSummary| r.phi50, ""),
            (&|r: &ThetaSummary| r.phi5, r#" stroke-dasharray="4 3""#),
        ] {
            let pts = points(&rows, pick);
            if pts.len() >= 2 {
                let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#, path_of(&pts));
            }
            for (x, y) in pts {
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"#);
            }
        }
        let ly = lo + 16.0 + 16.0 * s as f64;
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lo + 10.0, lo + 30.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lo + 36.0, ly + 4.0, escape(&item.label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Reads summary CSVs and writes their phase diagram to `out`.
pub fn plot_phase_files(inputs: &[(String, PathBuf)], out: &Path) -> Result<()> {
    let series = inputs
        .iter()
        .map(|(label, path)| Ok(PlotSeries { label: label.clone(), rows: read_summary_csv(path)?.1 }))
        .collect::<Result<Vec<_>>>()?;
    fs::write(out, plot_phase(&series)).map_err(|e| Error::io(out, e))
}

fn summary_inputs(results: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut found = Vec::new();
    let top = results.join("summary.csv");
    if top.is_file() {
        let label = results.file_name().map_or("results".into(), |s| s.to_string_lossy().into_owned());
        found.push((label, top));
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(results)
        .map_err(|e| Error::io(results, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("summary.csv").is_file())
        .collect();
    dirs.sort();
    for d in dirs {
        let label = d.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        found.push((label, d.join("summary.csv")));
    }
    Ok(found)
}

/// Regenerates every table the inputs in `results` allow; returns the files written.
pub fn report_tables(results: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    if !results.is_dir() {
        return Err(Error::MissingInputs(format!("{} is not a directory", results.display())));
    }
    let mut written = Vec::new();
    let mut write = |name: &str, text: String| -> Result<()> {
        fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        let path = out.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };

    let bounds = results.join("bounds.csv");
    if bounds.is_file() {
        let h = MeasurementBoundReport::CSV_HEADER;
        let mut text = format!("{TABLE_V_HEADER}\n");
        for (i, r) in read_records(&bounds, h)?.iter().enumerate() {
            let cols: Vec<String> = TABLE_V_HEADER
                .split(',')
                .map(|name| field::<String>(&bounds, i + 2, r, name, h))
                .collect::<Result<_>>()?;
            text.push_str(&cols.join(","));
            text.push('\n');
        }
        write("table_v.csv", text)?;
    }

    let timing = results.join("timing.csv");
    if timing.is_file() {
        let h = TIMING_HEADER;
        let mut text = format!("{TABLE_I_HEADER}\n");
        for (i, r) in read_records(&timing, h)?.iter().enumerate() {
            let cols: Vec<String> = TABLE_I_HEADER
                .split(',')
                .map(|name| field::<String>(&timing, i + 2, r, name, h))
                .collect::<Result<_>>()?;
            text.push_str(&cols.join(","));
            text.push('\n');
        }
        write("table_i.csv", text)?;
    }

    let summaries = summary_inputs(results)?;
    if !summaries.is_empty() {
        let mut text = format!("{TABLE_PHASE_HEADER}\n");
        let mut series = Vec::new();
        for (label, path) in &summaries {
            let (n, rows) = read_summary_csv(path)?;
            let widths = path.with_file_name("widths.csv");
            let (mean_width, c1) = if widths.is_file() { read_widths_csv(&widths)? } else { (None, None) };
            let na = |v: Option<f64>| v.map_or("NA".to_string(), |v| v.to_string());
            for r in &rows {
                let _ = writeln!(text, "{label},{n},{},{},{},{},{},{}", r.theta, r.m, na(r.width), na(r.phi50), na(mean_width), na(c1));
            }
            series.push(PlotSeries { label: label.clone(), rows });
        }
        write("table_phase.csv", text)?;
        write("phase.svg", plot_phase(&series))?;
    }

    if written.is_empty() {
        return Err(Error::MissingInputs(format!(
            "no bounds.csv, timing.csv or summary.csv under {}",
            results.display()
        )));
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(theta: f64, p: [f64; 3]) -> ThetaSummary {
        ThetaSummary {
            m: (theta * 100.0) as usize,
            theta,
            phi95: Some(p[0]),
            phi50: Some(p[1]),
            phi5: Some(p[2]),
            width: Some(p[2] - p[0]),
        }
    }

    #[test]
    fn single_point_plot() {
        let svg = plot_phase(&[PlotSeries { label: "a".into(), rows: vec![row(0.5, [0.3, 0.4, 0.5])] }]);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(!svg.contains("<polyline"));
    }

    #[test]
    fn deterministic_plot() {
        let s = vec![PlotSeries { label: "x<y".into(), rows: vec![row(0.2, [0.2, 0.24, 0.3]), row(0.9, [0.8, 0.9, 0.95])] }];
        assert_eq!(plot_phase(&s), plot_phase(&s));
        assert!(plot_phase(&s).contains("x&lt;y"));
    }

    #[test]
    fn empty_results_are_missing_inputs() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(report_tables(dir.path(), dir.path()), Err(Error::MissingInputs(_))));
    }
}
