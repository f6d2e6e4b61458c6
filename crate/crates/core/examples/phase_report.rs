// Sweeps two families, then regenerates the tables and the phase diagram.

use std::fs;

use binary_cs::bounds::{measurement_bounds, BoundParams, MeasurementBoundReport};
use binary_cs::experiments::{run_phase_sweep, KGrid, PhaseConfig};
use binary_cs::matrices::Family;
use binary_cs::report::report_tables;
use binary_cs::Error;

pub fn run_example() -> binary_cs::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let results = dir.path();
    for (family, m) in [(Family::DeVore, 49), (Family::Gaussian, 49)] {
        let mut config = PhaseConfig::new(family, 100);
        config.m_values = vec![m];
        config.k_grid = KGrid::Coarse;
        config.trials = 8;
        run_phase_sweep(&config, &results.join(family.name()))?;
    }
    let mut bounds = format!("{}\n", MeasurementBoundReport::CSV_HEADER);
    for k in [5, 10, 15, 20] {
        bounds.push_str(&measurement_bounds(900, k, BoundParams::default())?.csv_row());
        bounds.push('\n');
    }
    let path = results.join("bounds.csv");
    fs::write(&path, bounds).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;

    for file in report_tables(results, &results.join("report"))? {
        let text = fs::read_to_string(&file).unwrap_or_default();
        println!("{} ({} bytes)", file.display(), text.len());
    }
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
