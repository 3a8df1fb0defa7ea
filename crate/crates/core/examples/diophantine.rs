//! Counting solutions of x₁+…+x_n = y₁+…+y_n over {0, …, P−1}.

use lattice_llt::diophantine::{
    asymptotic_report, count_solutions, count_solutions_exact, fejer_integral, fixed_p_limit, ValueSet,
};

fn main() -> lattice_llt::Result<()> {
    let two = ValueSet::range(2)?;
    println!("N_2({{0,1}}) = {}", count_solutions_exact(&two, 2)?);

    let five = ValueSet::range(5)?;
    let dp = count_solutions(&five, 12)?;
    println!("P = 5, n = 12: DP p0 {:.15e}, Fejér integral {:.15e}", dp.p0, fejer_integral(5, 12)?);

    let sparse = ValueSet::new(vec![0, 1, 4, 9])?;
    println!("squares {{0,1,4,9}}, n = 6: N = {}", count_solutions_exact(&sparse, 6)?);

    let report = asymptotic_report(3, &[100, 200, 300, 400])?;
    print!("{}", report.to_csv());
    println!("limit at fixed P = 3: {:.6}", fixed_p_limit(3));
    Ok(())
}
