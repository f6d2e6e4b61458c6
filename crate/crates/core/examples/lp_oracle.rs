// Checks the splitting solver against the simplex oracle on random instances.

use binary_cs::experiments::{generate_sparse_signal, SignalModel};
use binary_cs::matrices::construct_array_matrix;
use binary_cs::solver::{lp_oracle, Decoder, RecoveryInstance, SolverConfig};

pub fn run_example() -> binary_cs::Result<()> {
    let h = construct_array_matrix(7, 4)?;
    let config = SolverConfig::default();
    let decoder = Decoder::new(&h, &config)?;
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let x = generate_sparse_signal(h.cols(), 6, SignalModel::BoundedUniform, seed)?;
        let y = h.matvec(&x);
        let admm = decoder.solve(&y, 0.0, &config)?;
        let lp = lp_oracle(&RecoveryInstance::new(&h, y, 0.0)?)?;
        let gap = (admm.l1_objective - lp.l1_objective).abs() / lp.l1_objective.max(1.0);
        println!("seed {seed}: splitting {:.8}, simplex {:.8} ({} pivots)", admm.l1_objective, lp.l1_objective, lp.iterations);
        worst = worst.max(gap);
    }
    println!("largest relative gap {worst:.2e}");
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
