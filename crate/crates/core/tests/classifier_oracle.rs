mod common;

use abroca_core::classifier::{fit_xy, gradient, log_likelihood};
use common::oracle::{brute_force_mle, log_lik, overlapping};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn labels(bits: &[u8]) -> Vec<bool> {
    bits.iter().map(|&b| b == 1).collect()
}

#[test]
fn matches_brute_force_on_small_example() {
    let x = [1.0, 2.0, 3.0, 4.0];
    let y = labels(&[0, 1, 0, 1]);
    let m = fit_xy(&x, &y).unwrap();
    let (b0, b1) = brute_force_mle(&x, &y);
    assert!(m.converged);
    assert!(
        (m.intercept - b0).abs() < 1e-4 && (m.slope - b1).abs() < 1e-4,
        "{m:?} vs ({b0}, {b1})"
    );
}

#[test]
fn matches_brute_force_on_random_datasets() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    let mut checked = 0;
    while checked < 20 {
        let n = rng.random_range(6..=20);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let y: Vec<bool> = x
            .iter()
            .map(|&v| rng.random_bool(1.0 / (1.0 + (-(0.3 + 0.8 * v)).exp())))
            .collect();
        if !overlapping(&x, &y) {
            continue;
        }
        let (b0, b1) = brute_force_mle(&x, &y);
        if b0.abs() > 9.0 || b1.abs() > 9.0 {
            continue;
        }
        let m = fit_xy(&x, &y).unwrap();
        assert!(m.converged, "{x:?} {y:?}");
        assert!(
            (m.intercept - b0).abs() < 1e-4 && (m.slope - b1).abs() < 1e-4,
            "{m:?} vs ({b0}, {b1})"
        );
        let g = gradient(&x, &y, [m.intercept, m.slope]);
        assert!(g[0].abs() <= 1e-8 && g[1].abs() <= 1e-8, "gradient {g:?}");
        checked += 1;
    }
}

#[test]
fn likelihood_matches_direct_formula() {
    let x = [0.5, -1.0, 2.0, 0.0];
    let y = labels(&[1, 0, 1, 0]);
    for (b0, b1) in [(0.0, 0.0), (0.3, -1.2), (-2.0, 3.0)] {
        assert!((log_likelihood(&x, &y, [b0, b1]) - log_lik(&x, &y, b0, b1)).abs() < 1e-12);
    }
}

#[test]
fn gradient_agrees_with_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x: Vec<f64> = (0..50).map(|_| StandardNormal.sample(&mut rng)).collect();
    let y: Vec<bool> = (0..50).map(|_| rng.random_bool(0.4)).collect();
    let h = 1e-5;
    for _ in 0..100 {
        let b = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        let g = gradient(&x, &y, b);
        let fd0 = (log_likelihood(&x, &y, [b[0] + h, b[1]])
            - log_likelihood(&x, &y, [b[0] - h, b[1]]))
            / (2.0 * h);
        let fd1 = (log_likelihood(&x, &y, [b[0], b[1] + h])
            - log_likelihood(&x, &y, [b[0], b[1] - h]))
            / (2.0 * h);
        assert!(
            (g[0] - fd0).abs() < 1e-5 && (g[1] - fd1).abs() < 1e-5,
            "{b:?}: {g:?} vs ({fd0}, {fd1})"
        );
    }
}

#[test]
fn converged_fits_on_simulated_sizes_have_tiny_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [400usize, 4000, 80_000] {
        let y: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        let x: Vec<f64> = y
            .iter()
            .map(|&l| if l { 1.19 } else { 0.0 } + { let z: f64 = StandardNormal.sample(&mut rng); z })
            .collect();
        let m = fit_xy(&x, &y).unwrap();
        assert!(m.converged && m.iterations < 20, "{m:?}");
        let g = gradient(&x, &y, [m.intercept, m.slope]);
        assert!(g[0].abs() <= 1e-8 && g[1].abs() <= 1e-8, "n={n}: {g:?}");
    }
}
