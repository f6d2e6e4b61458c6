// Structural analysis of an array-code matrix and the guarantees it implies.

use binary_cs::analysis::analyze;
use binary_cs::bounds::{c_prime, max_k_rip, max_k_rnsp, rnsp_beta, rnsp_certificate, rnsp_girth_certificate};
use binary_cs::matrices::construct_array_matrix;

pub fn run_example() -> binary_cs::Result<()> {
    let h = construct_array_matrix(11, 5)?;
    let a = analyze(&h)?;
    println!("{} x {}, girth {}, rank {}", a.rows, a.cols, a.girth, a.rank);
    println!("d_L = {:?}, lambda = {}, mu = {:.4}, sigma_min = {:.4}", a.left_degree(), a.lambda, a.mu, a.sigma_min);

    let d_l = a.left_degree().expect("array codes are left-regular");
    println!("coherence guarantee: k <= {}", max_k_rip(a.mu));
    println!("null-space guarantee: k <= {}", max_k_rnsp(d_l, a.lambda));

    let cert = rnsp_certificate(&a, 2)?;
    println!("order 2: rho = {:.4}, tau = {:.4}, C = {:.4}, D = {:.4}", cert.rho, cert.tau, cert.cap_c, cert.cap_d);

    let g = a.girth.finite().expect("finite girth");
    let beta = rnsp_beta(d_l, a.lambda, a.cols, a.sigma_min, 1.0);
    let gc = rnsp_girth_certificate(d_l, g, 4, beta)?;
    println!("C' = {}, order 4 from girth: rho = {:.4}, tau = {:.4}", c_prime(g, d_l as u64)?, gc.rho, gc.tau);
    Ok(())
}

fn main() -> binary_cs::Result<()> {
    run_example()
}
