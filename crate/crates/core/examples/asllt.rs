//! Log-averaged local limit statistic for coin sums, in expectation and
//! along single seeded paths.

use lattice_llt::asllt::{g_density, log_average_bernoulli, LogAverageMode, TargetSequence};

fn main() -> lattice_llt::Result<()> {
    let kappa = TargetSequence::new(0.5, 0.0)?;
    let g0 = g_density(0.0, 0.5, 1)?;
    println!("g(0) = {g0:.6}");
    for n_max in [100, 1_000, 10_000, 100_000] {
        let v = log_average_bernoulli(LogAverageMode::Expectation, 0.5, |n| kappa.at(n), n_max)?;
        println!("expectation, N = {n_max:>6}: {v:.6}");
    }
    for seed in 1..=5 {
        let mode = LogAverageMode::MonteCarlo { seed };
        let v = log_average_bernoulli(mode, 0.5, |n| kappa.at(n), 100_000)?;
        println!("path seed {seed}, N = 100000: {v:.4}");
    }

    let shifted = TargetSequence::new(0.3, 0.4)?;
    let v = log_average_bernoulli(LogAverageMode::Expectation, 0.3, |n| shifted.at(n), 50_000)?;
    let g = g_density(0.4, (0.3f64 * 0.7).sqrt(), 1)?;
    println!("p = 0.3, δ = 0.4: {v:.5} vs g(δ) = {g:.5}");
    Ok(())
}
