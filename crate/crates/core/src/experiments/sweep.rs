use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::Path;

use super::summary::summarize_phase;
use super::{generate_sparse_signal, matrix_for, KGrid, PhaseConfig, PhaseSummary};
use crate::matrices::Matrix;
use crate::rng::mix_seed;
use crate::solver::{evaluate_recovery, Decoder, SolverConfig, Status};
use crate::{Error, Result};

pub const CELLS_HEADER: &str = "n,m,k,theta,phi,trials,successes,success_rate,mean_solver_ms,flags";
pub const SUMMARY_HEADER: &str = "n,theta,m,phi95,phi50,phi5,width";
pub const WIDTHS_HEADER: &str = "n,mean_width,c1,num_theta";

/// Sweeps of `m <= AUTO_FULL_LIMIT` try every `k` under [`KGrid::Auto`].
const AUTO_FULL_LIMIT: usize = 200;
/// A run of this many all-failure cells ends the sweep over `k`.
const ZERO_RUN: usize = 3;

/// Trial counts for one `(m, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCell {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    /// Wall-clock; the only column that differs between identical runs.
    pub mean_solver_ms: f64,
    /// `;`-separated counts of unusual solver outcomes, empty when none.
    pub flags: String,
}

impl PhaseCell {
    pub fn new(n: usize, m: usize, k: usize, trials: usize, successes: usize, mean_solver_ms: f64, flags: String) -> Self {
        PhaseCell { n, m, k, trials, successes, mean_solver_ms, flags }
    }

    pub fn theta(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn phi(&self) -> f64 {
        self.k as f64 / self.m as f64
    }

    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.3},{}",
            self.n,
            self.m,
            self.k,
            self.theta(),
            self.phi(),
            self.trials,
            self.successes,
            self.success_rate(),
            self.mean_solver_ms,
            self.flags
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub n: usize,
    pub cells: Vec<PhaseCell>,
}

impl PhaseGrid {
    /// Distinct `m` in order of first appearance.
    pub fn m_values(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.m) {
                out.push(c.m);
            }
        }
        out
    }

    pub fn cell(&self, m: usize, k: usize) -> Option<&PhaseCell> {
        self.cells.iter().find(|c| c.m == m && c.k == k)
    }
}

/// Reads the complete rows of a `cells.csv`. A trailing partial line, left
/// by an interrupted run, is ignored.
pub fn load_cells(path: &Path) -> Result<Vec<PhaseCell>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let complete = match text.rfind('\n') {
        Some(end) => &text[..=end],
        None => "",
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(complete.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>().join(",") != CELLS_HEADER {
        return Err(Error::Parse { path: path.to_path_buf(), line: 1, msg: "unexpected header".into() });
    }
    let mut cells = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let bad = |msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
        let int = |j: usize| record[j].parse::<usize>().map_err(|e| bad(format!("column {j}: {e}")));
        let ms = record[8].parse::<f64>().map_err(|e| bad(format!("column 8: {e}")))?;
        cells.push(PhaseCell::new(int(0)?, int(1)?, int(2)?, int(5)?, int(6)?, ms, record[9].to_string()));
    }
    Ok(cells)
}

fn geometric_points(m: usize, count: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (0..count)
        .map(|i| ((m as f64).ln() * i as f64 / (count - 1) as f64).exp().round() as usize)
        .map(|k| k.clamp(1, m))
        .collect();
    ks.dedup();
    ks
}

/// Up to `count` evenly spaced integers strictly between `lo` and `hi`.
fn refinement_points(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if hi <= lo + 1 {
        return Vec::new();
    }
    let gap = hi - lo - 1;
    if gap <= count {
        return (lo + 1..hi).collect();
    }
    let mut ks: Vec<usize> = (1..=count)
        .map(|i| lo + (i as f64 * (hi - lo) as f64 / (count + 1) as f64).round() as usize)
        .collect();
    ks.dedup();
    ks
}

struct CellRunner<'a> {
    config: &'a PhaseConfig,
    solver: SolverConfig,
    existing: HashMap<(usize, usize), PhaseCell>,
    out: File,
    cells: Vec<PhaseCell>,
}

impl CellRunner<'_> {
    fn run<'m>(&mut self, m: usize, k: usize, decoder: &mut Option<Decoder<'m>>, matrix: &'m Matrix) -> Result<f64> {
        if let Some(cell) = self.existing.get(&(m, k)) {
            let cell = cell.clone();
            let rate = cell.success_rate();
            self.cells.push(cell);
            return Ok(rate);
        }
        let cfg = self.config;
        if decoder.is_none() {
            *decoder = Some(Decoder::new(matrix.as_operator(), &self.solver)?);
        }
        let decoder = decoder.as_ref().expect("decoder was just built");
        let op = decoder.operator();
        let mut successes = 0;
        let mut total_ms = 0.0;
        let mut counts: Vec<(&str, usize)> = Vec::new();
        let mut y = vec![0.0; m];
        for trial in 0..cfg.trials {
            let seed = mix_seed(&[cfg.base_seed, m as u64, k as u64, trial as u64]);
            let x = generate_sparse_signal(cfg.n, k, cfg.signal_model, seed)?;
            op.apply(&x, &mut y);
            let norm1: f64 = x.iter().map(|v| v.abs()).sum();
            let norm2: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            // Any feasible point this far below ||x||_1 puts every l1
            // minimizer more than the threshold away from x.
            let cutoff = norm1 - 2.0 * cfg.success_threshold * (cfg.n as f64).sqrt() * norm2;
            let outcome = decoder.solve_with_cutoff(&y, 0.0, &self.solver, Some(cutoff));
            let flag = match outcome {
                Ok(r) => {
                    total_ms += r.wall_time * 1e3;
                    if r.status == Status::Converged && evaluate_recovery(&r.x_hat, &x, cfg.success_threshold)?.1 {
                        successes += 1;
                    }
                    match r.status {
                        Status::MaxIterations => Some("max_iterations"),
                        Status::Infeasible => Some("infeasible"),
                        Status::Converged | Status::CutOff => None,
                    }
                }
                Err(_) => Some("solver_error"),
            };
            if let Some(name) = flag {
                match counts.iter_mut().find(|(n, _)| *n == name) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((name, 1)),
                }
            }
        }
        let flags = counts.iter().map(|(n, c)| format!("{n}={c}")).collect::<Vec<_>>().join(";");
        let cell = PhaseCell::new(cfg.n, m, k, cfg.trials, successes, total_ms / cfg.trials as f64, flags);
        writeln!(self.out, "{}", cell.csv_line()).map_err(|e| Error::io("cells.csv", e))?;
        self.out.flush().map_err(|e| Error::io("cells.csv", e))?;
        let rate = cell.success_rate();
        self.cells.push(cell);
        Ok(rate)
    }
}

/// Runs the sweep described by `config`, writing `cells.csv`, `summary.csv`
/// and `widths.csv` under `out_dir`.
///
/// Cells already present in `out_dir/cells.csv` are reused, so an
/// interrupted sweep resumes where it stopped.
pub fn run_phase_sweep(config: &PhaseConfig, out_dir: &Path) -> Result<(PhaseGrid, PhaseSummary)> {
    let m_values = config.resolved_m_values()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let cells_path = out_dir.join("cells.csv");
    let mut existing = HashMap::new();
    let mut prior = Vec::new();
    if cells_path.exists() {
        for cell in load_cells(&cells_path)? {
            if cell.n != config.n || cell.trials != config.trials {
                return Err(Error::InvalidParameter(format!(
                    "{} holds a different sweep (n = {}, trials = {})",
                    cells_path.display(),
                    cell.n,
                    cell.trials
                )));
            }
            prior.push(cell.csv_line());
            existing.insert((cell.m, cell.k), cell);
        }
    }
    // Rewrite the complete rows so a torn final line disappears.
    let mut text = format!("{CELLS_HEADER}\n");
    for line in &prior {
        text.push_str(line);
        text.push('\n');
    }
    fs::write(&cells_path, text).map_err(|e| Error::io(&cells_path, e))?;
    let out = OpenOptions::new().append(true).open(&cells_path).map_err(|e| Error::io(&cells_path, e))?;
    let mut runner = CellRunner { config, solver: SolverConfig::default(), existing, out, cells: Vec::new() };

    for &m in &m_values {
        let matrix = matrix_for(config.family, config.n, m, config.matrix_seed)?;
        let mut decoder: Option<Decoder> = None;
        let full = config.k_grid == KGrid::Auto && m <= AUTO_FULL_LIMIT;
        let (coarse, refine) = match config.k_grid {
            KGrid::Auto => (16, 24),
            KGrid::Coarse => (12, 8),
        };
        let candidates: Vec<usize> = if full { (1..=m).collect() } else { geometric_points(m, coarse) };
        let mut zero_run = 0;
        let mut last_high = None;
        let mut first_low = None;
        for &k in &candidates {
            let rate = runner.run(m, k, &mut decoder, &matrix)?;
            if rate >= 0.95 {
                last_high = Some(k);
            }
            if rate <= 0.05 && first_low.is_none() {
                first_low = Some(k);
            }
            zero_run = if rate == 0.0 { zero_run + 1 } else { 0 };
            if zero_run == ZERO_RUN {
                break;
            }
        }
        if !full {
            let lo = last_high.unwrap_or(0);
            let hi = first_low.filter(|&h| h > lo).unwrap_or(m + 1);
            for k in refinement_points(lo, hi, refine) {
                if !candidates.contains(&k) {
                    runner.run(m, k, &mut decoder, &matrix)?;
                }
            }
        }
    }

    let grid = PhaseGrid { n: config.n, cells: runner.cells };
    let summary = summarize_phase(&grid)?;
    write_summary(&summary, out_dir)?;
    Ok((grid, summary))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn write_summary(summary: &PhaseSummary, out_dir: &Path) -> Result<()> {
    let mut text = format!("{SUMMARY_HEADER}\n");
    for r in &summary.rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            summary.n,
            r.theta,
            r.m,
            opt(r.phi95),
            opt(r.phi50),
            opt(r.phi5),
            opt(r.width)
        ));
    }
    let path = out_dir.join("summary.csv");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    let count = summary.rows.iter().filter(|r| r.width.is_some()).count();
    let widths = format!("{WIDTHS_HEADER}\n{},{},{},{}\n", summary.n, opt(summary.mean_width), opt(summary.c1), count);
    let path = out_dir.join("widths.csv");
    fs::write(&path, widths).map_err(|e| Error::io(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = geometric_points(496, 16);
        assert_eq!((g[0], *g.last().unwrap()), (1, 496));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(refinement_points(5, 9, 24), vec![6, 7, 8]);
        let r = refinement_points(139, 210, 24);
        assert!(r.len() <= 24 && r[0] > 139 && *r.last().unwrap() < 210);
        assert!(refinement_points(4, 5, 3).is_empty());
    }
}
