mod common;

use std::fs;

use binary_cs::experiments::{load_cells, run_phase_sweep, KGrid, PhaseConfig, CELLS_HEADER};
use binary_cs::matrices::Family;
use common::cells_without_timing;

fn config() -> PhaseConfig {
    let mut c = PhaseConfig::new(Family::DeVore, 120);
    c.m_values = vec![49];
    c.k_grid = KGrid::Coarse;
    c.trials = 6;
    c
}

#[test]
fn rerun_is_identical_apart_from_timing() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_phase_sweep(&config(), a.path()).unwrap();
    run_phase_sweep(&config(), b.path()).unwrap();
    assert_eq!(cells_without_timing(&a.path().join("cells.csv")), cells_without_timing(&b.path().join("cells.csv")));
    for name in ["summary.csv", "widths.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn interrupted_sweep_resumes_to_the_same_result() {
    let full = tempfile::tempdir().unwrap();
    run_phase_sweep(&config(), full.path()).unwrap();
    let text = fs::read_to_string(full.path().join("cells.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 6);

    // Keep the header and four cells, then a half-written fifth line.
    let partial = tempfile::tempdir().unwrap();
    let torn = &lines[5][..lines[5].len() / 2];
    fs::write(partial.path().join("cells.csv"), format!("{}\n{torn}", lines[..5].join("\n"))).unwrap();
    assert_eq!(load_cells(&partial.path().join("cells.csv")).unwrap().len(), 4);

    let (grid, _) = run_phase_sweep(&config(), partial.path()).unwrap();
    assert_eq!(grid.cells.len(), lines.len() - 1);
    assert_eq!(
        cells_without_timing(&full.path().join("cells.csv")),
        cells_without_timing(&partial.path().join("cells.csv"))
    );
    // Reused cells keep their recorded timing.
    let resumed = fs::read_to_string(partial.path().join("cells.csv")).unwrap();
    assert!(resumed.starts_with(&lines[..5].join("\n")));
    assert_eq!(
        fs::read(full.path().join("summary.csv")).unwrap(),
        fs::read(partial.path().join("summary.csv")).unwrap()
    );
}

#[test]
fn resume_refuses_a_different_sweep() {
    let dir = tempfile::tempdir().unwrap();
    run_phase_sweep(&config(), dir.path()).unwrap();
    let mut other = config();
    other.trials = 7;
    assert!(run_phase_sweep(&other, dir.path()).is_err());
}

#[test]
fn header_only_file_starts_from_scratch() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cells.csv"), format!("{CELLS_HEADER}\n")).unwrap();
    let (grid, summary) = run_phase_sweep(&config(), dir.path()).unwrap();
    assert!(!grid.cells.is_empty());
    assert_eq!(summary.rows.len(), 1);
}
