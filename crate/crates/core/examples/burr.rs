//! Geometric random model P{X = λ_j} = (1 − r)r^j with mean a.

use lattice_llt::asllt::{burr_experiment, select_eta, solve_r, LambdaRule, TargetSequence};

fn main() -> lattice_llt::Result<()> {
    for (rule, a) in [("j+1", 2.0), ("2j+1", 5.0), ("1,2,4,8+3", 6.0)] {
        let rule: LambdaRule = rule.parse()?;
        let model = solve_r(&rule, a)?;
        println!(
            "λ = {rule}, a = {a}: r = {:.12}, σ² = {:.10}, D = {}, η = {}",
            model.r,
            model.sigma2,
            model.span,
            select_eta(model.r)?
        );
    }

    let model = solve_r(&"j+1".parse()?, 2.0)?;
    let targets = TargetSequence::new(2.0, 1.0)?;
    let report = burr_experiment(&model, &targets, 100_000, 7)?;
    print!("{}", report.to_json()?);
    Ok(())
}
