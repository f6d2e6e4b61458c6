// Samples the null space of H(7,4) and checks the per-coordinate bound.

use binary_cs::analysis::verify_nullspace_bound;
use binary_cs::matrices::construct_array_matrix;

pub fn run_example() -> binary_cs::Result<()> {
    let h = construct_array_matrix(7, 4)?;
    let r = verify_nullspace_bound(&h, 200, 7)?;
    println!("nullity {}, d_L {}, lambda {}", r.nullity, r.d_l, r.lambda);
    println!("max |v_i| 2 d_L / (lambda ||v||_1) = {:.6} (passed: {})", r.max_ratio, r.passed);
    if let (Some(cp), Some(ratio)) = (r.c_prime, r.max_c_prime_ratio) {
        println!("max |v_i| C' / ||v||_1 = {ratio:.6} with C' = {cp}");
    }
    assert!(r.passed);
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
