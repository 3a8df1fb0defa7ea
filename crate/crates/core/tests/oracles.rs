//! Independent closed-form oracles for values computed by quadrature or DP.

use lattice_llt::gaussian::{de_moivre_laplace, llt_density, mills_ratio, GaussianApprox};
use lattice_llt::partition::q_exact;

/// `R(x) = √(π/2) e^{x²/2} erfc(x/√2)`.
fn mills_erfc(x: f64) -> f64 {
    (std::f64::consts::PI / 2.0).sqrt() * (0.5 * x * x).exp() * libm::erfc(x / std::f64::consts::SQRT_2)
}

#[test]
fn mills_ratio_against_erfc() {
    for i in 0..=60 {
        let x = i as f64 / 10.0;
        let (q, e) = (mills_ratio(x), mills_erfc(x));
        assert!((q / e - 1.0).abs() < 1e-10, "x = {x}: {q} vs {e}");
    }
    assert!((mills_ratio(1.0) - 0.65568).abs() < 1e-5);
}

#[test]
fn gaussian_density_values() {
    let unit = GaussianApprox::new(3.0, 1.0, 1).unwrap();
    assert!((llt_density(3, &unit) - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
    let wide = GaussianApprox::new(0.0, 25.0, 1).unwrap();
    let expected = (-0.5f64).exp() / (50.0 * std::f64::consts::PI).sqrt();
    assert!((llt_density(5, &wide) - expected).abs() < 1e-15);
    assert!((llt_density(5, &wide) - 0.048394).abs() < 1e-6);
    assert_eq!(llt_density(7, &unit), llt_density(-1, &unit));
}

#[test]
fn central_binomial_mass() {
    // C(100, 50) / 2^100 from exact integer arithmetic
    let mut c = num_bigint::BigUint::from(1u32);
    for i in 0..50u32 {
        c = c * (100 - i) / (i + 1);
    }
    let exact = c.to_string().parse::<f64>().unwrap() / 2f64.powi(100);
    let d = de_moivre_laplace(100, 0.5, 50, 0.5).unwrap();
    assert!((exact - 0.0795892).abs() < 1e-7);
    assert!((d.approx - 0.0797885).abs() < 1e-7);
    assert!((exact / d.approx).ln().abs() <= d.log_error_bound);
}

#[test]
fn distinct_part_counts_against_generating_function() {
    // Euler: Π(1 + x^j) = Π 1/(1 − x^{2j−1}), counted through odd parts
    let n_max = 60usize;
    let mut odd = vec![0u64; n_max + 1];
    odd[0] = 1;
    for part in (1..=n_max).step_by(2) {
        for s in part..=n_max {
            odd[s] += odd[s - part];
        }
    }
    for (n, count) in odd.iter().enumerate() {
        assert_eq!(q_exact(1, n as u64).unwrap().to_string(), count.to_string(), "n = {n}");
    }
}
