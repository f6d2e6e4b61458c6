// Measurement counts of the deterministic families against the Gaussian
// sample bound and the universal lower bound.

use binary_cs::bounds::{measurement_bounds, BoundParams, MeasurementBoundReport};

pub fn run_example() -> binary_cs::Result<()> {
    println!("{}", MeasurementBoundReport::CSV_HEADER);
    for n in [900, 10_000, 100_000] {
        for k in [5, 20] {
            println!("{}", measurement_bounds(n, k, BoundParams::default())?.csv_row());
        }
    }
    // A tighter RIP constant needs more Gaussian rows.
    let strict = BoundParams { delta: 0.2, ..BoundParams::default() };
    println!("delta=0.2: m_G = {}", measurement_bounds(10_000, 20, strict)?.m_gaussian);
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
