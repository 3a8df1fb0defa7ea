//! Lattice Gaussian approximant and the sup error Δ along growing sums.

use lattice_llt::gaussian::{llt_density, llt_sup_error, GaussianApprox};
use lattice_llt::WeightedBernoulliModel;

fn main() -> lattice_llt::Result<()> {
    let g = GaussianApprox::new(0.0, 25.0, 1)?;
    println!("density at 5 for Σ = 25: {}", llt_density(5, &g));

    println!("{:>5} {:>14} {:>8}", "n", "Δ_n", "argmax");
    for n in [25, 50, 100, 200, 400] {
        let e = llt_sup_error(&WeightedBernoulliModel::fair(vec![1; n])?)?;
        println!("{n:>5} {:>14.6e} {:>8}", e.delta, e.argmax);
    }

    // even weights: span 2 enters the approximant
    let even = llt_sup_error(&WeightedBernoulliModel::fair(vec![2; 100])?)?;
    println!("weights 2×100: span {}, Δ = {:.6e}", even.span, even.delta);

    let skew = llt_sup_error(&WeightedBernoulliModel::consecutive(10, 30, 0.3)?)?;
    println!("weights 10..39, ϑ = 0.3: Δ = {:.6e}", skew.delta);
    Ok(())
}
