// Solve times on certified binary and Gaussian matrices of equal order.

use binary_cs::experiments::{timing_comparison, TIMING_HEADER};
use binary_cs::matrices::Family;

pub fn run_example() -> binary_cs::Result<()> {
    let rows = timing_comparison(900, 3, &[Family::ArrayCode, Family::DeVore, Family::Gaussian], 3, 1)?;
    println!("{TIMING_HEADER}");
    for r in rows {
        println!("{}", r.csv_line());
    }
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
