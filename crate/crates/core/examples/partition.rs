//! Partitions into distinct parts ≥ m: exact counts, the tilted-model
//! identity at several tilts, and the saddle-point estimate.

use lattice_llt::partition::{ext_to_f64, q_estimate, q_exact, q_via_identity, solve_sigma};

fn main() -> lattice_llt::Result<()> {
    let (m, n) = (1, 40);
    println!("q_{m}({n}) = {}", q_exact(m, n)?);
    let saddle = solve_sigma(m, n)?;
    println!("saddle σ = {:.10}, variance {:.4}", saddle.sigma, saddle.variance);
    for sigma in [0.0, 0.1, -0.1, saddle.sigma] {
        println!("  σ = {sigma:>+.6}: identity gives {:.12}", ext_to_f64(&q_via_identity(m, n, sigma)?));
    }

    println!("{:>5} {:>12} {:>14} {:>10}", "n", "exact", "estimate", "rel.err");
    for n in [50, 100, 200] {
        let e = q_estimate(1, n)?;
        println!("{n:>5} {:>12} {:>14.2} {:>10.4}", e.exact, e.estimate, e.relative_error);
    }
    Ok(())
}
