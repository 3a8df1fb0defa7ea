//! Binomial point masses against the De Moivre–Laplace value and its
//! explicit log-error bound.

use lattice_llt::gaussian::{de_moivre_laplace, de_moivre_sweep, ln_binomial_pmf};

fn main() -> lattice_llt::Result<()> {
    let d = de_moivre_laplace(100, 0.5, 50, 0.5)?;
    let exact = ln_binomial_pmf(100, 0.5, 50).exp();
    println!("n=100 k=50: exact {exact:.7}, approx {:.7}, bound {:.3e}", d.approx, d.log_error_bound);

    let sweep = de_moivre_sweep(&[50, 100, 500, 1000], &[0.2, 0.5, 0.7], &[0.25, 0.5, 0.75])?;
    println!(
        "sweep: {} evaluated, {} outside the admissible range, {} violations",
        sweep.evaluated, sweep.skipped, sweep.violations
    );
    if let Some(w) = &sweep.worst_point {
        println!("worst (n, p, γ, k) = {:?}: |ln ratio| {:.4e} vs bound {:.4e}", w.at, w.lhs, w.rhs);
    }

    // the bound omits the skewness term (q − p)x/(2√(npq)), visible for p ≠ ½
    let (n, p, k) = (1000u64, 0.2, 230u64);
    let d = de_moivre_laplace(n, p, k, 0.75)?;
    let lhs = (ln_binomial_pmf(n, p, k) - d.approx.ln()).abs();
    let q = 1.0 - p;
    let skew = (q - p) * d.x / (2.0 * (n as f64 * p * q).sqrt());
    println!("n={n} p={p} k={k}: |ln ratio| {lhs:.4e}, bound {:.4e}, skew term {skew:.4e}", d.log_error_bound);
    Ok(())
}
