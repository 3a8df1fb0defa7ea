//! Point masses recovered from the characteristic function.

use lattice_llt::fourier::inversion_report;
use lattice_llt::{char_fn, invert, QuadratureSpec, WeightedBernoulliModel};

fn main() -> lattice_llt::Result<()> {
    let model = WeightedBernoulliModel::new(vec![1, 3, 4, 7], vec![0.3, 0.5, 0.6, 0.9])?;
    let quad = QuadratureSpec::for_model(&model);
    println!("{} nodes, φ(0.1) = {}", quad.nodes, char_fn(&model, 0.1));
    for n in 0..=15 {
        println!("P{{B = {n:2}}} ≈ {:.12}", invert(&model, n, quad)?);
    }
    let report = inversion_report(&model, None)?;
    println!("max |inversion − convolution| = {:e}", report.output_f64("max_abs_diff").unwrap());

    // one node too few is refused
    let short = QuadratureSpec { nodes: QuadratureSpec::required(&model) - 1 };
    println!("short rule: {}", invert(&model, 3, short).unwrap_err());
    Ok(())
}
