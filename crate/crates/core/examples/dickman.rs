//! Dickman's function and the distribution of Σ j·β_j with P{β_j = 1} = 1/j.

use lattice_llt::dickman::{cdf_check, dickman_rho, llt_check, poisson_cycle_identity, DickmanTable, EULER_GAMMA};

fn main() -> lattice_llt::Result<()> {
    let table = DickmanTable::new(1e-4, 30.0)?;
    for u in [1.0, 2.0, 3.0, 5.0, 10.0] {
        println!("ρ({u}) = {:.10e}", table.rho(u)?);
    }
    println!("1 − ln 2 = {:.10}", 1.0 - 2f64.ln());
    println!("∫₀³⁰ ρ = {:.8}, e^γ = {:.8}", table.total_integral(), EULER_GAMMA.exp());

    for n in [100, 200, 400] {
        let r = llt_check(n, 0.5)?;
        println!(
            "n = {n}: n·P{{D_n = n/2}} = {:.6}, e^(−γ)ρ(½) = {:.6}",
            r.output_f64("computed").unwrap(),
            r.output_f64("reference").unwrap()
        );
    }
    let cdf = cdf_check(200, &[0.5, 1.0, 2.0, 4.0])?;
    print!("{}", cdf.to_csv());

    let cycles = poisson_cycle_identity(60)?;
    println!("Poisson cycle identity at n = 60 passes: {}", cycles.pass);
    println!("ρ(2.5) at a coarser step: {:.8}", dickman_rho(2.5, 1e-3)?);
    Ok(())
}
