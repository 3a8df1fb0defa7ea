//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). Criteria listed in
//! `KNOWN_FAILURES` are reported as FAIL but do not fail the target; any
//! other failure exits with status 1.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use lattice_llt::asllt::{
    bernoulli_experiment, burr_path, g_density, log_average_bernoulli, solve_r, LambdaRule, LogAverageMode,
    TargetSequence,
};
use lattice_llt::dickman::{llt_check, poisson_cycle_identity, DickmanTable, EULER_GAMMA};
use lattice_llt::diophantine::{
    asymptotic_report, count_solutions, count_solutions_exact, fejer_integral, sqrt_three_over_pi, ValueSet,
};
use lattice_llt::gaussian::{
    de_moivre_sweep, lemma36_sweep, lemma_pointwise_bounds, lemma_tail_bounds, mills_sweep, symmetric_grid,
    thm31_rhs, thm32_check, BoundParams, BoundReport,
};
use lattice_llt::partition::{ext_to_f64, q_exact, q_via_identity, solve_sigma};
use lattice_llt::pmf::{exact_pmf_f64, exact_pmf_rational};
use lattice_llt::progressions::{
    log_log_slope, prob_in_progression, scaling_rows, theta_not_worse, BinomialRows, DRange,
};
use lattice_llt::{FourierInverter, QuadratureSpec, WeightedBernoulliModel};

// tolerances
const INVERSION_TOL: f64 = 1e-10;
const PARTITION_REL_TOL: f64 = 1e-10;
const CYCLE_TOL: f64 = 1e-12;
const RHO2_TOL: f64 = 1e-6;
const RHO_INTEGRAL_TOL: f64 = 1e-4;
const DICKMAN_LLT_TOL: f64 = 0.1;
const FEJER_REL_TOL: f64 = 1e-9;
const DIOPHANTINE_REL_TOL: f64 = 0.1;
const SWEEP_RATIO_MAX: f64 = 3.0;
const FILTER_DP_TOL: f64 = 1e-12;
const THETA_SPREAD_MAX: f64 = 10.0;
const EXPECTATION_REL_TOL: f64 = 0.1;
const MONTE_CARLO_REL_TOL: f64 = 0.25;
const BURR_CLOSED_FORM_TOL: f64 = 1e-10;
const BURR_REL_TOL: f64 = 0.3;
const SEED: u64 = 7;

/// The printed De Moivre bound omits the first-order skewness term and is
/// exceeded at 52 admissible points with p ≠ ½; the fixed-seed Monte Carlo
/// path for fair coins lands at 0.50 against 0.80.
const KNOWN_FAILURES: &[u32] = &[6, 10];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let mut rational_ok = true;
    for _ in 0..50 {
        let len = 1 + (rng.next_u64() % 20) as usize;
        let mut weights = Vec::with_capacity(len);
        let mut total = 0;
        for _ in 0..len {
            let room = 200 - total - (len - weights.len() - 1) as u64;
            let k = 1 + rng.next_u64() % room.min(20);
            total += k;
            weights.push(k);
        }
        let probs: Vec<f64> = (0..len)
            .map(|_| 0.01 + 0.98 * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64))
            .collect();
        let model = WeightedBernoulliModel::new(weights, probs).unwrap();
        let exact = exact_pmf_f64(&model).unwrap();
        let inv = FourierInverter::new(&model, QuadratureSpec::for_model(&model)).unwrap();
        for n in 0..=model.total_weight() as i64 {
            worst = worst.max((inv.mass(n) - exact.mass_at(n)).abs());
        }
        rational_ok &= exact_pmf_rational(&model).unwrap().total() == BigRational::one();
    }
    outcome(
        worst <= INVERSION_TOL && rational_ok,
        format!("max |inversion − convolution| = {worst:e}, rational totals exactly 1: {rational_ok}"),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let (mut cases, mut no_saddle) = (0, 0);
    for m in 1..=3u64 {
        for n in 1..=40u64 {
            let exact = q_exact(m, n).unwrap();
            let exact_f = exact.to_string().parse::<f64>().unwrap();
            let mut sigmas = vec![0.0, 0.1, -0.1];
            match solve_sigma(m, n) {
                Ok(s) => sigmas.push(s.sigma),
                Err(_) => no_saddle += 1,
            }
            for sigma in sigmas {
                let v = ext_to_f64(&q_via_identity(m, n, sigma).unwrap());
                let err = if exact_f == 0.0 { v.abs() } else { (v / exact_f - 1.0).abs() };
                worst = worst.max(err);
                cases += 1;
            }
        }
    }
    outcome(
        worst <= PARTITION_REL_TOL,
        format!("{cases} (m, n, σ) cases, worst relative error {worst:e}, {no_saddle} pairs without a saddle"),
    )
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut coefficients = true;
    for n in 1..=60 {
        let r = poisson_cycle_identity(n).unwrap();
        let p = r.output_f64("probability").unwrap();
        let reference = r.output_f64("reference").unwrap();
        worst = worst.max((p - reference).abs());
        coefficients &= r.check_named("rational_coefficient_is_one").unwrap().pass;
    }
    outcome(
        worst <= CYCLE_TOL && coefficients,
        format!("max |P − e^(−H_n)| = {worst:e}, exact coefficients all 1: {coefficients}"),
    )
}

fn criterion_4() -> Outcome {
    let table = DickmanTable::new(1e-4, 30.0).unwrap();
    let rho2 = (table.rho(2.0).unwrap() - (1.0 - 2f64.ln())).abs();
    let integral = (table.total_integral() - EULER_GAMMA.exp()).abs();
    let errors: Vec<f64> = [100, 200, 400]
        .iter()
        .map(|&n| llt_check(n, 0.5).unwrap().output_f64("error").unwrap())
        .collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    outcome(
        rho2 <= RHO2_TOL && integral <= RHO_INTEGRAL_TOL && errors[2] <= DICKMAN_LLT_TOL && decreasing,
        format!("|ρ(2) − (1 − ln 2)| = {rho2:e}, |∫ρ − e^γ| = {integral:e}, LLT errors {errors:?}"),
    )
}

fn brute_force_count(values: &[u64], n: usize) -> u64 {
    let k = values.len();
    (0..k.pow(2 * n as u32))
        .filter(|&code| {
            let (mut c, mut diff) = (code, 0i64);
            for i in 0..2 * n {
                let v = values[c % k] as i64;
                c /= k;
                diff += if i < n { v } else { -v };
            }
            diff == 0
        })
        .count() as u64
}

fn criterion_5() -> Outcome {
    let brute = brute_force_count(&[0, 1], 2);
    let exact = count_solutions_exact(&ValueSet::range(2).unwrap(), 2).unwrap();
    let small_ok = brute == 6 && exact == BigUint::from(6u32);

    let mut fejer_worst = 0.0f64;
    for p in 2..=8u64 {
        let set = ValueSet::range(p).unwrap();
        for n in 1..=20u64 {
            let dp = count_solutions(&set, n as usize).unwrap().p0;
            fejer_worst = fejer_worst.max((fejer_integral(p, n).unwrap() / dp - 1.0).abs());
        }
    }

    let grid: Vec<usize> = (100..=400).collect();
    let r3 = asymptotic_report(3, &grid).unwrap();
    let reference = sqrt_three_over_pi();
    let dev3 = [r3.output_f64("ratio_min").unwrap(), r3.output_f64("ratio_max").unwrap()]
        .iter()
        .map(|r| (r / reference - 1.0).abs())
        .fold(0.0, f64::max);

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in 2..=6u64 {
        let grid: Vec<usize> = ((p * p) as usize..=400).collect();
        let r = asymptotic_report(p, &grid).unwrap();
        lo = lo.min(r.output_f64("ratio_min").unwrap());
        hi = hi.max(r.output_f64("ratio_max").unwrap());
    }
    outcome(
        small_ok && fejer_worst <= FEJER_REL_TOL && dev3 <= DIOPHANTINE_REL_TOL && lo >= 0.5 && hi <= 1.5,
        format!(
            "N_2(2) = {brute}, DP–Fejér worst {fejer_worst:e}, P = 3 max deviation {:.4}, global ratio range [{lo:.4}, {hi:.4}]",
            dev3
        ),
    )
}

fn criterion_6() -> Outcome {
    let r = de_moivre_sweep(&[50, 100, 500, 1000], &[0.2, 0.5, 0.7], &[0.25, 0.5, 0.75]).unwrap();
    let share = 1.0 - r.violations as f64 / r.evaluated as f64;
    let worst = r
        .worst_point
        .as_ref()
        .map(|w| format!("{:?} lhs {:.4e} bound {:.4e}", w.at, w.lhs, w.rhs))
        .unwrap_or_default();
    outcome(
        r.violations == 0,
        format!(
            "{} admissible points, {} violations ({:.2}% contained), worst (n, p, γ, k) = {worst}",
            r.evaluated,
            r.violations,
            100.0 * share
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut reports: Vec<BoundReport> = Vec::new();
    let models = [
        WeightedBernoulliModel::consecutive(1, 20, 0.5).unwrap(),
        WeightedBernoulliModel::new((1..=12).collect(), (1..=12).map(|j| j as f64 / 13.0).collect()).unwrap(),
        WeightedBernoulliModel::consecutive(5, 40, 0.3).unwrap(),
    ];
    let t_grid = symmetric_grid(1000);
    for model in &models {
        reports.push(lemma_pointwise_bounds(model, &t_grid).unwrap().modulus);
        for tau in [0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5] {
            for q in [1, 2, 3] {
                for c in [0.5, 0.9, 1.0] {
                    let t = lemma_tail_bounds(model, tau, q, c).unwrap();
                    reports.push(t.outer_integral);
                    reports.push(t.period_integral);
                }
            }
        }
    }
    reports.push(lemma36_sweep(20, 50, 1000));
    reports.push(mills_sweep(10.0, 1000).unwrap());
    let violations: usize = reports.iter().map(|r| r.violations).sum();
    let evaluated: usize = reports.iter().map(|r| r.evaluated).sum();
    let skipped: usize = reports.iter().map(|r| r.skipped).sum();
    outcome(
        violations == 0,
        format!("{evaluated} points evaluated, {skipped} outside hypotheses, {violations} violations"),
    )
}

fn ratios(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[1] / w[0]).collect()
}

fn list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
    format!("[{}]", items.join(", "))
}

fn criterion_8() -> Outcome {
    let thm31: Vec<f64> = [200u64, 400, 800]
        .iter()
        .map(|&n| {
            let k = (0.3 * n as f64).ceil() as u64;
            let model = WeightedBernoulliModel::consecutive(k, (n - k) as usize, 0.5).unwrap();
            let params = BoundParams::with_delta_from_nu(&model, 0.1, 0.3).unwrap();
            thm31_rhs(&model, &params, n).unwrap().report.empirical_constant.unwrap()
        })
        .collect();
    let thm32: Vec<f64> = [50u64, 100, 200]
        .iter()
        .map(|&nu| {
            let model = WeightedBernoulliModel::fair((1..=nu).collect()).unwrap();
            thm32_check(&model).unwrap().empirical_constant
        })
        .collect();
    let (r31, r32) = (ratios(&thm31), ratios(&thm32));
    let bounded = r31.iter().chain(&r32).all(|r| r.is_finite() && *r <= SWEEP_RATIO_MAX);
    outcome(
        bounded,
        format!(
            "first theorem constants {} (ratios {}), second {} (ratios {})",
            list(&thm31),
            list(&r31),
            list(&thm32),
            list(&r32)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut filter_worst = 0.0f64;
    let mut rows = BinomialRows::new();
    for n in 1..=2000u64 {
        rows.advance();
        for d in 1..=50 {
            let err = (prob_in_progression(n, d).unwrap() - rows.progression_mass(d)).abs();
            filter_worst = filter_worst.max(err);
        }
    }
    let grid = [64, 128, 256, 512, 1024];
    let (small_d, _) = scaling_rows(DRange::UpTo(10), &grid).unwrap();
    let not_worse = small_d.iter().all(theta_not_worse);
    let (full, _) = scaling_rows(DRange::Full, &grid).unwrap();
    let norm: Vec<f64> = full.iter().map(|r| r.normalized).collect();
    let spread = norm.iter().cloned().fold(0.0, f64::max) / norm.iter().cloned().fold(f64::INFINITY, f64::min);
    let slope = log_log_slope(&full).unwrap_or(f64::NAN);
    let gap = small_d.iter().map(|r| (r.e_theta - r.e_gauss).abs()).fold(0.0, f64::max);
    outcome(
        filter_worst <= FILTER_DP_TOL && not_worse && spread <= THETA_SPREAD_MAX,
        format!(
            "filter–DP worst {filter_worst:e}; e_theta ≤ e_gauss (d ≤ 10): {not_worse}, max |e_theta − e_gauss| {gap:e}; \
             normalized spread over 2 ≤ d ≤ n {spread:.3}, slope {slope:.3}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let expectation = bernoulli_experiment(LogAverageMode::Expectation, 0.5, 0.0, 10_000).unwrap();
    let g0 = g_density(0.0, 0.5, 1).unwrap();
    let e_val = expectation.output_f64("log_average").unwrap();
    let e_ok = (e_val / g0 - 1.0).abs() <= EXPECTATION_REL_TOL;

    let kappa = TargetSequence::new(0.5, 0.0).unwrap();
    let mc = log_average_bernoulli(LogAverageMode::MonteCarlo { seed: SEED }, 0.5, |n| kappa.at(n), 100_000).unwrap();
    let mc_ok = (mc / g0 - 1.0).abs() <= MONTE_CARLO_REL_TOL;

    let rule: LambdaRule = "j+1".parse().unwrap();
    let model = solve_r(&rule, 2.0).unwrap();
    let closed = (model.r - 0.5).abs() <= BURR_CLOSED_FORM_TOL && (model.sigma2 - 2.0).abs() <= BURR_CLOSED_FORM_TOL;
    let run = burr_path(&model, &TargetSequence::new(2.0, 1.0).unwrap(), 100_000, SEED).unwrap();
    let reference = (-0.25f64).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let burr_ok = (run.log_average / reference - 1.0).abs() <= BURR_REL_TOL;
    let n0_ok = run.n0 <= run.n_max;
    outcome(
        e_ok && mc_ok && closed && burr_ok && n0_ok,
        format!(
            "expectation {e_val:.5} vs {g0:.5} ({}); path seed {SEED}: {mc:.4} ({}); \
             r = {}, σ² = {} ({}); Burr log-average {:.4} vs {reference:.5} ({}); violations end at n₀ = {} ({})",
            verdict(e_ok),
            verdict(mc_ok),
            model.r,
            model.sigma2,
            verdict(closed),
            run.log_average,
            verdict(burr_ok),
            run.n0,
            verdict(n0_ok),
        ),
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "out of tolerance"
    }
}

fn criterion_11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_llt");
    let runs: &[&[&str]] = &[
        &["burr", "--lambda", "j+1", "--a", "2", "--delta", "1", "--N", "100000", "--seed", "7"],
        &["asllt", "--mode", "monte-carlo", "--N", "20000", "--seed", "3"],
        &["pmf", "--weights", "1,2,3", "--theta", "0.3,0.5,0.7", "--mode", "exact"],
        &["theta", "--n", "64,128"],
        &["partition", "--m", "1", "--n", "30"],
    ];
    let mut identical = 0;
    for args in runs {
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|_| Command::new(bin).args(*args).output().unwrap().stdout)
            .collect();
        if !outputs[0].is_empty() && outputs[0] == outputs[1] {
            identical += 1;
        }
    }
    outcome(
        identical == runs.len(),
        format!("{identical} of {} repeated runs byte-identical", runs.len()),
    )
}

type Criterion = (u32, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, criterion_1, 60),
        (2, criterion_2, 120),
        (3, criterion_3, 30),
        (4, criterion_4, 180),
        (5, criterion_5, 300),
        (6, criterion_6, 60),
        (7, criterion_7, 180),
        (8, criterion_8, 300),
        (9, criterion_9, 180),
        (10, criterion_10, 300),
        (11, criterion_11, 300),
    ];
    let mut unexpected = Vec::new();
    for (id, run, limit_s) in criteria {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if !within(elapsed, limit_s) {
            result.pass = false;
            result.detail.push_str(&format!("; runtime limit {limit_s}s exceeded"));
        }
        let status = if result.pass { "PASS" } else { "FAIL" };
        let note = if !result.pass && KNOWN_FAILURES.contains(&id) { " (known)" } else { "" };
        println!("criterion {id:>2}: {status}{note} [{:.1}s] {}", elapsed.as_secs_f64(), result.detail);
        if !result.pass && !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
