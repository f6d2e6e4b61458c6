// Recovers a sparse signal from exact and from noisy binary measurements.

use binary_cs::linalg::norm2;
use binary_cs::matrices::construct_array_matrix;
use binary_cs::solver::{basis_pursuit, evaluate_recovery, RecoveryInstance, SolverConfig};

pub fn run_example() -> binary_cs::Result<()> {
    let h = construct_array_matrix(31, 5)?;
    let mut x = vec![0.0; h.cols()];
    for (i, v) in [(10, 1.0), (200, -1.0), (517, 1.0), (900, -1.0)] {
        x[i] = v;
    }
    let y = h.matvec(&x);
    let config = SolverConfig::default();

    let exact = basis_pursuit(&RecoveryInstance::new(&h, y.clone(), 0.0)?.with_truth(x.clone())?, &config)?;
    let (err, ok) = evaluate_recovery(&exact.x_hat, &x, config.success_threshold)?;
    println!("exact: {} after {} iterations, relative error {err:.2e}, success {ok}", exact.status, exact.iterations);

    let mut noisy = y;
    noisy[0] += 0.05;
    noisy[7] -= 0.05;
    let eps = 0.1;
    let r = basis_pursuit(&RecoveryInstance::new(&h, noisy, eps)?, &config)?;
    let diff: Vec<f64> = r.x_hat.iter().zip(&x).map(|(a, b)| a - b).collect();
    println!("noisy: {} with residual {:.3} <= {eps}, error {:.3}", r.status, r.residual_norm, norm2(&diff));
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
