// A small phase-transition sweep for the DeVore family.

use binary_cs::experiments::{run_phase_sweep, KGrid, PhaseConfig};
use binary_cs::matrices::Family;

pub fn run_example() -> binary_cs::Result<()> {
    let mut config = PhaseConfig::new(Family::DeVore, 120);
    config.m_values = vec![49];
    config.k_grid = KGrid::Coarse;
    config.trials = 10;
    let dir = tempfile::tempdir().map_err(|e| binary_cs::Error::InvalidParameter(e.to_string()))?;
    let (grid, summary) = run_phase_sweep(&config, dir.path())?;
    for cell in &grid.cells {
        println!("k={:>3} phi={:.3} rate={:.2}", cell.k, cell.phi(), cell.success_rate());
    }
    for row in &summary.rows {
        println!("theta={:.3} phi50={:?} width={:?}", row.theta, row.phi50, row.width);
    }
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
