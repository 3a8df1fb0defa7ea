//! Grids for the pointwise, tail and Mills-ratio inequalities, and the
//! empirical constants of the two theorem-level bounds.

use lattice_llt::gaussian::{
    lemma36_sweep, lemma_pointwise_bounds, lemma_tail_bounds, mills_sweep, remark_norm_vs_count,
    symmetric_grid, thm31_rhs, thm32_check, BoundParams, BoundReport,
};
use lattice_llt::WeightedBernoulliModel;

fn show(r: &BoundReport) {
    match r.empirical_constant {
        Some(c) => println!("{:<28} evaluated {:>7}  constant {c:.4}", r.name, r.evaluated),
        None => println!(
            "{:<28} evaluated {:>7}  skipped {:>5}  violations {}",
            r.name, r.evaluated, r.skipped, r.violations
        ),
    }
}

fn main() -> lattice_llt::Result<()> {
    let model = WeightedBernoulliModel::consecutive(1, 20, 0.5)?;
    let pointwise = lemma_pointwise_bounds(&model, &symmetric_grid(1000))?;
    show(&pointwise.modulus);
    show(&pointwise.expansion);
    show(&lemma36_sweep(20, 50, 1000));
    let tails = lemma_tail_bounds(&model, 0.05, 3, 0.9)?;
    show(&tails.outer_integral);
    show(&tails.period_integral);
    show(&mills_sweep(10.0, 1000)?);

    for n in [200u64, 400] {
        let k = (0.3 * n as f64).ceil() as u64;
        let m = WeightedBernoulliModel::consecutive(k, (n - k) as usize, 0.5)?;
        let params = BoundParams::with_delta_from_nu(&m, 0.1, 0.3)?;
        let r = thm31_rhs(&m, &params, n)?;
        println!("consecutive weights, n = {n}: constant {:.4}, δ admissible {}", r.report.empirical_constant.unwrap(), r.delta_admissible);
    }
    for nu in [50u64, 100] {
        let r = thm32_check(&WeightedBernoulliModel::fair((1..=nu).collect())?)?;
        println!("k_j = j, ν = {nu}: constant {:.4}", r.empirical_constant);
    }

    let c = remark_norm_vs_count(10, 2)?;
    println!("cosine-sum norm vs counts: {:.4} (N_q), {:.4} (N_2q)", c.ratio_to_count_q, c.ratio_to_count_2q);
    Ok(())
}
