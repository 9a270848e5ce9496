#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson statistic of `observed` counts against expected probabilities.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

/// Upper 0.1% point of the chi-square law with `dof` degrees of freedom.
pub fn chi_square_critical(dof: usize) -> f64 {
    ChiSquared::new(dof as f64).unwrap().inverse_cdf(0.999)
}

pub fn assert_chi_square(observed: &[u64], probs: &[f64]) {
    let stat = chi_square(observed, probs);
    let crit = chi_square_critical(observed.len() - 1);
    assert!(
        stat < crit,
        "chi-square {stat} >= {crit}; observed {observed:?}"
    );
}

/// `P(X >= k)` for `X ~ Binomial(trials, num/den)`, summed exactly.
pub fn exact_upper_tail(trials: u64, num: u64, den: u64, k: u64) -> f64 {
    let mut choose = BigInt::from(1);
    let mut total = BigInt::zero();
    for j in 0..=trials {
        if j > 0 {
            choose = choose * BigInt::from(trials - j + 1) / BigInt::from(j);
        }
        if j >= k {
            total += &choose
                * BigInt::from(num).pow(j as u32)
                * BigInt::from(den - num).pow((trials - j) as u32);
        }
    }
    BigRational::new(total, BigInt::from(den).pow(trials as u32))
        .to_f64()
        .unwrap()
}

/// `|observed - exact| <= k σ` with σ from the exact probability.
pub fn within_sigma(observed: f64, exact: f64, trials: u64, k: f64) -> bool {
    (observed - exact).abs() <= k * (exact * (1.0 - exact) / trials as f64).sqrt() + 1e-12
}
