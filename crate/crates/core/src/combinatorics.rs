//! Matching counts and the lifting probability `γ_k`.
//!
//! `N(t)` is the number of perfect matchings on `[t]`, `(t-1)!!`. For a fixed
//! string `z ∈ {0,1}^{2n}` of weight `k`, `γ_k` is the probability that a
//! uniform matching `M` admits some `s` with `z = Mᵀs`, which happens exactly
//! when every edge of `M` lies entirely inside or entirely outside the
//! support of `z`. Counting gives `γ_k = N(k) N(2n-k) / N(2n)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::matching::PerfectMatching;
use crate::stats::Estimate;

/// `N(t)`, with `N(0) = 1` as the empty product.
fn matchings_unchecked(t: usize) -> BigUint {
    (1..t)
        .step_by(2)
        .fold(BigUint::one(), |acc, f| acc * BigUint::from(f))
}

/// Exact number of perfect matchings on `[t]`, `t` even and at least 2.
pub fn count_matchings(t: usize) -> Result<BigUint> {
    if t < 2 || t % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "perfect matchings need an even ground set of size >= 2, got {t}"
        )));
    }
    Ok(matchings_unchecked(t))
}

fn check_weight(n: usize, k: usize) -> Result<()> {
    if k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "weight {k} is odd; a lifted character always has even weight"
        )));
    }
    if k < 2 || k > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "weight {k} outside 2..={}",
            2 * n
        )));
    }
    Ok(())
}

/// `γ_k = N(k) N(2n-k) / N(2n)`.
pub fn gamma_exact(n: usize, k: usize) -> Result<BigRational> {
    check_weight(n, k)?;
    let num = matchings_unchecked(k) * matchings_unchecked(2 * n - k);
    let den = matchings_unchecked(2 * n);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn gamma_exact_f64(n: usize, k: usize) -> Result<f64> {
    Ok(gamma_exact(n, k)?.to_f64().expect("γ_k lies in (0, 1]"))
}

/// The upper bound `(k / 2n)^{k/2}`.
pub fn gamma_bound(n: usize, k: usize) -> Result<f64> {
    check_weight(n, k)?;
    Ok((k as f64 / (2 * n) as f64).powf(k as f64 / 2.0))
}

/// `k / (4 γ_k^{1/k})`, the exponent that controls the size of the set of
/// inputs on which a short message can be accurate.
pub fn proof_exponent(n: usize, k: usize) -> Result<f64> {
    let gamma = gamma_exact_f64(n, k)?;
    Ok(k as f64 / (4.0 * gamma.powf(1.0 / k as f64)))
}

/// Whether a weight-`k` lifted character comes from an odd-weight `s`, the
/// case that carries the lower-bound argument.
pub fn proof_relevant(k: usize) -> bool {
    k % 4 == 2
}

/// Every edge of `matching` lies entirely inside or entirely outside the
/// support of `z`.
pub fn is_lifted_support(z: &BitString, matching: &PerfectMatching) -> bool {
    matching.edges().iter().all(|&(k, l)| z.get(k) == z.get(l))
}

/// `1^k 0^{2n-k}`.
pub fn canonical_support(n: usize, k: usize) -> BitString {
    let mut z = BitString::zeros(2 * n);
    for i in 1..=k {
        z.set(i, true);
    }
    z
}

/// A uniformly random string of length `2n` and weight `k`.
pub fn random_support<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> BitString {
    let mut positions: Vec<usize> = (1..=2 * n).collect();
    positions.shuffle(rng);
    let mut z = BitString::zeros(2 * n);
    for &p in &positions[..k] {
        z.set(p, true);
    }
    z
}

/// Fraction of uniform matchings under which `z` is a lifted character.
pub fn gamma_monte_carlo_for<R: Rng + ?Sized>(
    z: &BitString,
    trials: u64,
    rng: &mut R,
) -> Result<Estimate> {
    if z.len() % 2 == 1 {
        return Err(Error::InvalidArgument(
            "support string must have even length".into(),
        ));
    }
    check_weight(z.len() / 2, z.weight())?;
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let n = z.len() / 2;
    let hits = (0..trials)
        .filter(|_| is_lifted_support(z, &PerfectMatching::random(n, rng)))
        .count() as u64;
    Ok(Estimate::from_counts(hits, trials))
}

/// Monte-Carlo `γ_k` on the canonical support `1^k 0^{2n-k}`.
pub fn gamma_monte_carlo<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    trials: u64,
    rng: &mut R,
) -> Result<Estimate> {
    check_weight(n, k)?;
    gamma_monte_carlo_for(&canonical_support(n, k), trials, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub n: usize,
    pub k: usize,
    /// Exact value as `numerator/denominator`.
    pub exact_fraction: String,
    pub exact: f64,
    pub bound: f64,
    pub proof_relevant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

pub fn gamma_report<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    mc_trials: Option<u64>,
    rng: &mut R,
) -> Result<GammaReport> {
    let exact = gamma_exact(n, k)?;
    let mc = mc_trials
        .map(|t| gamma_monte_carlo(n, k, t, rng))
        .transpose()?;
    Ok(GammaReport {
        n,
        k,
        exact_fraction: exact.to_string(),
        exact: exact.to_f64().expect("γ_k in (0, 1]"),
        bound: gamma_bound(n, k)?,
        proof_relevant: proof_relevant(k),
        mc_estimate: mc.map(|e| e.mean),
        sigma: mc.map(|e| e.std_error),
        trials: mc.map(|e| e.trials),
    })
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

fn falling(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i))
}

/// Exact law of the number of edges a uniform matching on `[2n]` places
/// entirely inside a fixed set of `c` indices. Entry `j` is `P(K = j)`.
pub fn internal_edge_distribution(n: usize, c: usize) -> Result<Vec<BigRational>> {
    if c > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "subset size {c} exceeds 2n = {}",
            2 * n
        )));
    }
    let total = BigInt::from(matchings_unchecked(2 * n));
    let outside = 2 * n - c;
    Ok((0..=c / 2)
        .map(|j| {
            // Unmatched-inside points each pair with a distinct outside point.
            let crossing = c - 2 * j;
            if crossing > outside {
                return BigRational::zero();
            }
            let ways = binomial(c, 2 * j)
                * matchings_unchecked(2 * j)
                * falling(outside, crossing)
                * matchings_unchecked(outside - crossing);
            BigRational::new(BigInt::from(ways), total.clone())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    #[test]
    fn matching_counts() {
        assert_eq!(count_matchings(2).unwrap(), BigUint::from(1u32));
        assert_eq!(count_matchings(4).unwrap(), BigUint::from(3u32));
        assert_eq!(count_matchings(6).unwrap(), BigUint::from(15u32));
        assert!(count_matchings(5).is_err());
        assert!(count_matchings(0).is_err());
        for t in (2..=10).step_by(2) {
            assert_eq!(
                count_matchings(t).unwrap(),
                BigUint::from(PerfectMatching::enumerate_all(t / 2).len())
            );
        }
    }

    #[test]
    fn matching_count_recursion_up_to_200() {
        let mut prev = BigUint::one();
        for t in (2..=200).step_by(2) {
            let cur = count_matchings(t).unwrap();
            assert_eq!(cur, &prev * BigUint::from(t - 1));
            prev = cur;
        }
    }

    #[test]
    fn gamma_examples() {
        for n in 1..30 {
            assert_eq!(
                gamma_exact(n, 2).unwrap(),
                BigRational::new(1.into(), (2 * n as i64 - 1).into())
            );
            assert!(gamma_exact(n, 2 * n).unwrap().is_one());
            assert_eq!(gamma_bound(n, 2 * n).unwrap(), 1.0);
        }
        assert_eq!(gamma_bound(2, 2).unwrap(), 0.5);
        assert!((gamma_bound(50, 2).unwrap() - 0.02).abs() < 1e-15);
        assert!(gamma_exact(4, 3).is_err());
        assert!(gamma_exact(4, 0).is_err());
        assert!(gamma_exact(4, 10).is_err());
    }

    #[test]
    fn gamma_matches_enumeration() {
        for n in 1..=5 {
            let all = PerfectMatching::enumerate_all(n);
            for k in (2..=2 * n).step_by(2) {
                let z = canonical_support(n, k);
                let hits = all.iter().filter(|m| is_lifted_support(&z, m)).count();
                assert_eq!(
                    gamma_exact(n, k).unwrap(),
                    BigRational::new(hits.into(), all.len().into()),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn gamma_product_form() {
        for n in 1..20 {
            for k in (2..=2 * n).step_by(2) {
                let num: BigInt = (1..k).step_by(2).map(BigInt::from).product();
                let den: BigInt = (0..k / 2)
                    .map(|i| BigInt::from(2 * n - 1 - 2 * i))
                    .product();
                assert_eq!(gamma_exact(n, k).unwrap(), BigRational::new(num, den));
            }
        }
    }

    #[test]
    fn gamma_below_bound_up_to_64() {
        for n in 1..=32 {
            for k in (2..=2 * n).step_by(2) {
                assert!(gamma_exact_f64(n, k).unwrap() <= gamma_bound(n, k).unwrap() + 1e-15);
            }
        }
    }

    #[test]
    fn monte_carlo_full_weight_is_certain() {
        let est = gamma_monte_carlo(4, 8, 1000, &mut from_seed(1)).unwrap();
        assert_eq!(est.mean, 1.0);
        assert!(gamma_monte_carlo(4, 3, 10, &mut from_seed(1)).is_err());
    }

    #[test]
    fn monte_carlo_small_case() {
        let est = gamma_monte_carlo(4, 2, 100_000, &mut from_seed(2)).unwrap();
        assert!(est.within_sigma(1.0 / 7.0, 3.0), "{est:?}");
    }

    #[test]
    fn internal_edges_law() {
        for n in 1..=5 {
            let all = PerfectMatching::enumerate_all(n);
            for c in 0..=2 * n {
                let dist = internal_edge_distribution(n, c).unwrap();
                let mut counts = vec![0usize; c / 2 + 1];
                for m in &all {
                    let inside = m.edges().iter().filter(|&&(k, l)| k <= c && l <= c).count();
                    counts[inside] += 1;
                }
                for (j, p) in dist.iter().enumerate() {
                    assert_eq!(
                        *p,
                        BigRational::new(counts[j].into(), all.len().into()),
                        "n={n} c={c} j={j}"
                    );
                }
            }
        }
        assert!(internal_edge_distribution(2, 5).is_err());
    }

    #[test]
    fn report_flags_residue_class() {
        let r = gamma_report(4, 6, None, &mut from_seed(0)).unwrap();
        assert!(r.proof_relevant);
        assert_eq!(r.exact_fraction, "1/7");
        assert!(
            !gamma_report(4, 4, None, &mut from_seed(0))
                .unwrap()
                .proof_relevant
        );
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("mc_estimate"));
    }
}
