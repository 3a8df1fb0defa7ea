//! Writing a Bernoulli variable through a fair bit, and the conditioning
//! identity for fair weighted sums.

use lattice_llt::reduction::fair_conditioning_sum;
use lattice_llt::{decompose_bernoulli, WeightedBernoulliModel};

fn main() -> lattice_llt::Result<()> {
    for (alpha, tau0) in [(0.2, None), (0.5, None), (0.8, Some(0.25))] {
        let spec = decompose_bernoulli(alpha, tau0)?;
        println!("α = {alpha}: {spec:?}");
        println!("    law on {{0,1,2}} {:?}", spec.reconstructed_law());
    }

    let weights = [1, 2, 2, 5, 3];
    let model = WeightedBernoulliModel::fair(weights.to_vec())?;
    let pmf = lattice_llt::pmf::exact_pmf_rational(&model)?;
    for b in [0, 4, 7] {
        let direct = pmf.mass_at(b);
        let conditioned = fair_conditioning_sum(&weights, 2, b)?;
        println!("b = {b}: direct {direct}, conditioned on the first two {conditioned}");
    }
    Ok(())
}
