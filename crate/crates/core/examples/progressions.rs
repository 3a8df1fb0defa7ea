//! Fair coin sums in arithmetic progressions: exact values, the theta
//! estimate and the Gaussian lattice sum.

use lattice_llt::progressions::{
    error_scaling_study, gaussian_progression_sum, prob_in_progression, theta, DRange,
};

fn main() -> lattice_llt::Result<()> {
    let n = 200;
    println!("{:>3} {:>22} {:>22} {:>22}", "d", "exact", "Θ(d,n)/d", "Gaussian sum");
    for d in [2, 3, 5, 10, 20, 40] {
        println!(
            "{d:>3} {:>22.17} {:>22.17} {:>22.17}",
            prob_in_progression(n, d)?,
            theta(d, n)?.value / d as f64,
            gaussian_progression_sum(n, d)?
        );
    }
    let t = theta(7, 300)?;
    println!("Θ(7, 300): L = {}, tail ≤ {:e}, imaginary residue {:e}", t.truncation_l, t.tail_bound, t.imag_residue);

    let study = error_scaling_study(DRange::Full, &[64, 128, 256, 512, 1024])?;
    for key in ["e_theta", "normalized", "normalized_spread", "slope"] {
        println!("{key}: {}", study.outputs[key]);
    }
    Ok(())
}
