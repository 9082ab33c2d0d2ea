//! Independent reference computations for the library's numerics.
//!
//! Nothing here calls into the code paths under test.

#![allow(dead_code)]

use std::f64::consts::{PI, SQRT_2};

/// erf by its all-positive series `2/sqrt(pi) e^{-z^2} sum (2z^2)^n z / (2n+1)!!`.
fn erf_series(z: f64) -> f64 {
    let mut term = z;
    let mut sum = z;
    let mut n = 0.0;
    while term > 1e-18 * sum {
        n += 1.0;
        term *= 2.0 * z * z / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-z * z).exp() * sum
}

/// erfc by its continued fraction, evaluated backwards; for z >= 3.
fn erfc_fraction(z: f64) -> f64 {
    let mut f = z;
    for k in (1..=300).rev() {
        f = z + (k as f64 / 2.0) / f;
    }
    (-z * z).exp() / (PI.sqrt() * f)
}

fn erfc_pos(z: f64) -> f64 {
    if z < 3.0 {
        1.0 - erf_series(z)
    } else {
        erfc_fraction(z)
    }
}

/// Standard normal CDF.
pub fn phi(x: f64) -> f64 {
    let z = x.abs() / SQRT_2;
    if x < 0.0 {
        0.5 * erfc_pos(z)
    } else {
        1.0 - 0.5 * erfc_pos(z)
    }
}

/// Normal quantile by bisection on [`phi`]; reliable for p <= 0.5 and, via
/// symmetry, for any p whose complement is exact.
pub fn probit_bisect(p: f64) -> f64 {
    if p > 0.5 {
        return -probit_bisect(1.0 - p);
    }
    let (mut lo, mut hi) = (-40.0, 0.0);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// AUC by counting every (positive, negative) pair; ties count one half.
pub fn pair_count_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if !labels[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                wins += 1.0;
            } else if si == sj {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Mann-Whitney AUC from mid-ranks, `U / (n_pos n_neg)`.
pub fn rank_sum_auc(pos: &[f64], neg: &[f64]) -> f64 {
    let mut all: Vec<(f64, bool)> = pos
        .iter()
        .map(|&x| (x, true))
        .chain(neg.iter().map(|&x| (x, false)))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        let mid_rank = (i + j + 1) as f64 / 2.0;
        rank_sum += mid_rank * all[i..j].iter().filter(|e| e.1).count() as f64;
        i = j;
    }
    let (np, nn) = (pos.len() as f64, neg.len() as f64);
    (rank_sum - np * (np + 1.0) / 2.0) / (np * nn)
}

/// Direct binomial log-likelihood.
pub fn log_lik(x: &[f64], y: &[bool], b0: f64, b1: f64) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let p = 1.0 / (1.0 + (-(b0 + b1 * xi)).exp());
            if yi {
                p.ln()
            } else {
                (1.0 - p).ln()
            }
        })
        .sum()
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Likelihood maximizer: exhaustive 0.05-step grid over [-10, 10]^2, then
/// coordinate-wise golden-section refinement.
pub fn brute_force_mle(x: &[f64], y: &[bool]) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=400 {
        for j in 0..=400 {
            let b0 = -10.0 + 0.05 * i as f64;
            let b1 = -10.0 + 0.05 * j as f64;
            let ll = log_lik(x, y, b0, b1);
            if ll > best.0 {
                best = (ll, b0, b1);
            }
        }
    }
    let (_, mut b0, mut b1) = best;
    for _ in 0..20_000 {
        let n0 = golden_max(|t| log_lik(x, y, t, b1), b0 - 1.0, b0 + 1.0);
        let n1 = golden_max(|t| log_lik(x, y, n0, t), b1 - 1.0, b1 + 1.0);
        let change = (n0 - b0).abs().max((n1 - b1).abs());
        b0 = n0;
        b1 = n1;
        if change < 1e-11 {
            break;
        }
    }
    (b0, b1)
}

/// True when neither class can be split from the other by a threshold on x,
/// so the likelihood has a finite maximizer.
pub fn overlapping(x: &[f64], y: &[bool]) -> bool {
    let pick = |class: bool| {
        x.iter()
            .zip(y)
            .filter(move |(_, &c)| c == class)
            .map(|(&v, _)| v)
    };
    let (Some(max_pos), Some(min_pos)) = (pick(true).reduce(f64::max), pick(true).reduce(f64::min))
    else {
        return false;
    };
    let (Some(max_neg), Some(min_neg)) =
        (pick(false).reduce(f64::max), pick(false).reduce(f64::min))
    else {
        return false;
    };
    max_neg > min_pos && max_pos > min_neg
}
