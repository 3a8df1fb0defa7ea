//! Exact law of a weighted Bernoulli sum in all three arithmetics.

use lattice_llt::pmf::{exact_pmf_rational, maximal_span};
use lattice_llt::{exact_pmf, ArithmeticMode, WeightedBernoulliModel};

fn main() -> lattice_llt::Result<()> {
    let model = WeightedBernoulliModel::new(vec![2, 4, 6], vec![0.5, 0.25, 0.75])?;
    println!("mean {}  variance {}", model.mean(), model.variance());

    let float = exact_pmf(&model, ArithmeticMode::Float64)?.to_f64();
    for (n, m) in float.iter().filter(|(_, m)| **m > 0.0) {
        println!("P{{B = {n:2}}} = {m}");
    }
    println!("maximal span {}", maximal_span(&float));

    let exact = exact_pmf_rational(&model)?;
    let masses: Vec<String> = exact.masses().iter().map(|m| m.to_string()).collect();
    println!("rational masses {masses:?}, total {}", exact.total());

    let extended = exact_pmf(&model, ArithmeticMode::extended(40)?)?.to_f64();
    let gap = extended
        .iter()
        .map(|(n, m)| (m - float.mass_at(n)).abs())
        .fold(0.0, f64::max);
    println!("max |extended − float64| = {gap:e}");
    Ok(())
}
