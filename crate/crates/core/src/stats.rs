//! Binomial tails and Monte-Carlo estimates with standard errors.

use serde::Serialize;
use statrs::distribution::{Binomial, DiscreteCDF};

/// `P(X >= k)` for `X ~ Binomial(trials, p)`.
pub fn binomial_upper_tail(trials: u64, p: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > trials {
        return 0.0;
    }
    let dist = Binomial::new(p, trials).expect("p in [0, 1]");
    dist.sf(k - 1)
}

/// `P(lo <= X <= hi)` for `X ~ Binomial(trials, p)`.
pub fn binomial_range(trials: u64, p: f64, lo: u64, hi: u64) -> f64 {
    if lo > hi || lo > trials {
        return 0.0;
    }
    binomial_upper_tail(trials, p, lo) - binomial_upper_tail(trials, p, hi.min(trials) + 1)
}

/// Success probability of an `r`-fold majority vote over independent runs
/// that are each correct with probability `p`. `r` must be odd.
pub fn majority_success(p: f64, r: u64) -> f64 {
    assert!(r % 2 == 1, "majority needs an odd number of votes");
    binomial_upper_tail(r, p, r.div_ceil(2))
}

/// Bernoulli success-rate estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        assert!(trials > 0, "an estimate needs at least one trial");
        Self::from_sum(successes as f64, trials)
    }

    /// Estimate from a sum of per-trial scores in `[0, 1]` (ties scored as
    /// one half, for example).
    pub fn from_sum(sum: f64, trials: u64) -> Self {
        let mean = sum / trials as f64;
        let std_error = (mean * (1.0 - mean) / trials as f64).max(0.0).sqrt();
        Self {
            mean,
            std_error,
            trials,
        }
    }

    /// 95% normal-approximation interval.
    pub fn ci95(&self) -> (f64, f64) {
        (
            self.mean - 1.96 * self.std_error,
            self.mean + 1.96 * self.std_error,
        )
    }

    /// Standard error implied by an exact success probability at this
    /// sample size.
    pub fn sigma_for(&self, exact: f64) -> f64 {
        (exact * (1.0 - exact) / self.trials as f64).sqrt()
    }

    /// `|mean - exact| <= k σ`, with σ taken from the exact probability.
    pub fn within_sigma(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.sigma_for(exact) + 1e-12
    }
}
