//! Distributional checks of every sampler against its exact law.

mod common;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use statrs::distribution::{Binomial, Discrete};

use bhm::classical::{
    simulate_subset, subset_exact_success, subset_success_by_enumeration, vote_success_given_edges,
    SubsetProtocol,
};
use bhm::combinatorics::{
    canonical_support, gamma_exact_f64, gamma_monte_carlo_for, internal_edge_distribution,
    random_support,
};
use bhm::harness::generate_instances;
use bhm::instances::{sample_biased, sample_matching, sample_t, sample_w};
use bhm::quantum::{
    exact_success, outcome_probabilities, prepare_state, single_shot_success, MatchingBasisSampler,
    MeasurementMethod, QuantumProtocol,
};
use bhm::rng::{from_seed, substream};
use bhm::stats::{binomial_upper_tail, Estimate};
use bhm::{hamming_distance, BhmInstance, BitString, PerfectMatching};

use common::{assert_chi_square, exact_upper_tail, within_sigma};

fn matching_frequencies(n: usize, samples: u64, seed: u64) -> Vec<u64> {
    let all = PerfectMatching::enumerate_all(n);
    let index: HashMap<_, _> = all
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let mut counts = vec![0u64; all.len()];
    let mut rng = from_seed(seed);
    for _ in 0..samples {
        counts[index[&sample_matching(n, &mut rng)]] += 1;
    }
    counts
}

#[test]
fn matchings_are_uniform() {
    let three = matching_frequencies(2, 300_000, 1);
    assert_eq!(three.len(), 3);
    assert_chi_square(&three, &[1.0 / 3.0; 3]);

    let fifteen = matching_frequencies(3, 1_000_000, 2);
    assert_eq!(fifteen.len(), 15);
    assert_chi_square(&fifteen, &[1.0 / 15.0; 15]);
}

#[test]
fn biased_bits_have_bias_three_quarters() {
    let mut rng = from_seed(3);
    let n = 10_000;
    for b in [false, true] {
        let y = sample_biased(b, n, &mut rng);
        let agree = y.bits().iter().filter(|&&bit| bit == b).count() as f64 / n as f64;
        assert!(
            within_sigma(agree, 0.75, n as u64, 4.0),
            "b={b}: agreement {agree}"
        );
    }
}

/// Pools the tails of a probability vector until every cell expects at least
/// `min_expected` of `total` draws.
fn pooled(counts: &[u64], probs: &[f64], total: u64, min_expected: f64) -> (Vec<u64>, Vec<f64>) {
    let (mut oc, mut pc) = (Vec::new(), Vec::new());
    let (mut o, mut p) = (0u64, 0.0);
    for (&c, &q) in counts.iter().zip(probs) {
        o += c;
        p += q;
        if p * total as f64 >= min_expected {
            oc.push(o);
            pc.push(p);
            o = 0;
            p = 0.0;
        }
    }
    if let (Some(lo), Some(lp)) = (oc.last_mut(), pc.last_mut()) {
        *lo += o;
        *lp += p;
    }
    (oc, pc)
}

#[test]
fn noise_distance_is_binomial() {
    for n in [20usize, 100] {
        let draws = 50_000u64;
        let mut counts = vec![0u64; n + 1];
        let mut sum = 0usize;
        for i in 0..draws {
            let mut rng = substream(4, i);
            let x = BitString::random(2 * n, &mut rng);
            let m = sample_matching(n, &mut rng);
            let w = sample_w(&x, &m, false, &mut rng).unwrap();
            let d = hamming_distance(&m.apply(&x).unwrap(), &w).unwrap();
            counts[d] += 1;
            sum += d;
        }
        let mean = sum as f64 / draws as f64;
        let expected = n as f64 / 4.0;
        let sigma = (n as f64 * 0.25 * 0.75 / draws as f64).sqrt();
        assert!(
            (mean - expected).abs() <= 4.0 * sigma,
            "n={n}: mean distance {mean} vs {expected}"
        );

        let law = Binomial::new(0.25, n as u64).unwrap();
        let probs: Vec<f64> = (0..=n as u64).map(|k| law.pmf(k)).collect();
        let (obs, exp) = pooled(&counts, &probs, draws, 5.0);
        assert_chi_square(&obs, &exp);
    }
}

#[test]
fn hard_distribution_marginals() {
    let draws = 160_000u64;
    let mut sources = 0u64;
    let mut xs = vec![0u64; 16];
    for i in 0..draws {
        let inst = sample_t(2, &mut substream(5, i));
        sources += u64::from(inst.source() == Some(true));
        xs[inst.x().to_index().unwrap()] += 1;
    }
    assert!(within_sigma(sources as f64 / draws as f64, 0.5, draws, 4.0));
    assert_chi_square(&xs, &[1.0 / 16.0; 16]);
}

#[test]
fn sampling_is_reproducible() {
    assert_eq!(
        generate_instances(16, 50, 9).unwrap(),
        generate_instances(16, 50, 9).unwrap()
    );
    assert_ne!(
        generate_instances(16, 50, 9).unwrap(),
        generate_instances(16, 50, 10).unwrap()
    );
    let a = simulate_subset(&SubsetProtocol::prefix(32, 6).unwrap(), 500, 11);
    let b = simulate_subset(&SubsetProtocol::prefix(32, 6).unwrap(), 500, 11);
    assert_eq!(a, b);
}

#[test]
fn measured_edges_are_uniform_with_correct_signs() {
    let mut rng = from_seed(6);
    let n = 4;
    for method in [MeasurementMethod::Analytic, MeasurementMethod::Projector] {
        let x = BitString::random(2 * n, &mut rng);
        let m = sample_matching(n, &mut rng);
        let parities = m.apply(&x).unwrap();
        let sampler = MatchingBasisSampler::new(&prepare_state(&x), &m, method).unwrap();
        let mut edges = vec![0u64; n];
        for _ in 0..200_000 {
            let outcome = sampler.sample(&mut rng);
            assert_eq!(outcome.sign.parity(), parities.get(outcome.edge));
            edges[outcome.edge - 1] += 1;
        }
        assert_chi_square(&edges, &vec![1.0 / n as f64; n]);
    }
}

#[test]
fn projector_probabilities_match_analytic_law() {
    let mut rng = from_seed(7);
    for n in [2usize, 4, 8] {
        let cases = if n == 2 { 16 } else { 50 };
        for c in 0..cases {
            let x = if n == 2 {
                BitString::from_index(c, 4)
            } else {
                BitString::random(2 * n, &mut rng)
            };
            let m = sample_matching(n, &mut rng);
            let parities = m.apply(&x).unwrap();
            let probs = outcome_probabilities(&prepare_state(&x), &m).unwrap();
            let tv: f64 = probs
                .iter()
                .enumerate()
                .map(|(idx, &p)| {
                    let (edge, minus) = (idx / 2 + 1, idx % 2 == 1);
                    let analytic = if parities.get(edge) == minus {
                        1.0 / n as f64
                    } else {
                        0.0
                    };
                    (p - analytic).abs()
                })
                .sum::<f64>()
                / 2.0;
            assert!(tv < 1e-12, "2n={}: total variation {tv}", 2 * n);
        }
    }
}

fn instance_with_distance(n: usize, d: usize, source: bool) -> BhmInstance {
    let x = BitString::zeros(2 * n);
    let m = PerfectMatching::from_pairs((0..n).map(|i| (2 * i + 1, 2 * i + 2))).unwrap();
    let mut w = BitString::zeros(n);
    for i in 1..=d {
        w.set(i, true);
    }
    BhmInstance::new(x, m, w, Some(source)).unwrap()
}

#[test]
fn repeated_protocol_matches_exact_success() {
    let trials = 20_000u64;
    let protocol = QuantumProtocol::default();
    let mut g = 0u64;
    for (n, ds) in [(4usize, vec![0usize, 1, 3]), (9, vec![2, 3, 6, 7])] {
        for d in ds {
            for r in [1u64, 3, 7] {
                for source in [false, true] {
                    let inst = instance_with_distance(n, d, source);
                    let exact = exact_success(&inst, r).unwrap();
                    let hits = (0..trials)
                        .filter(|&t| {
                            let mut rng = substream(8, (g << 40) | t);
                            protocol.run_repeated(&inst, r, &mut rng).unwrap().correct()
                                == Some(true)
                        })
                        .count() as u64;
                    g += 1;
                    let est = Estimate::from_counts(hits, trials);
                    assert!(
                        est.within_sigma(exact, 4.0),
                        "n={n} d={d} r={r} b={source}: {} vs {exact}",
                        est.mean
                    );
                }
            }
        }
    }
}

#[test]
fn long_majority_vote() {
    let inst = instance_with_distance(3, 1, false);
    let exact = exact_success(&inst, 45).unwrap();
    assert!((exact - exact_upper_tail(45, 2, 3, 23)).abs() < 1e-12);
    let protocol = QuantumProtocol::default();
    let trials = 50_000u64;
    let hits = (0..trials)
        .filter(|&t| {
            protocol
                .run_repeated(&inst, 45, &mut substream(12, t))
                .unwrap()
                .correct()
                == Some(true)
        })
        .count() as u64;
    assert!(Estimate::from_counts(hits, trials).within_sigma(exact, 4.0));
}

#[test]
fn even_repetition_is_rejected() {
    let inst = instance_with_distance(3, 1, false);
    assert!(QuantumProtocol::default()
        .run_repeated(&inst, 4, &mut from_seed(0))
        .is_err());
    assert!(exact_success(&inst, 2).is_err());
}

#[test]
fn single_shot_formula_at_edges() {
    assert_eq!(single_shot_success(6, 0, false), 1.0);
    assert_eq!(single_shot_success(6, 6, true), 1.0);
    assert_eq!(single_shot_success(6, 2, true), 1.0 / 3.0);
}

#[test]
fn binomial_tail_agrees_with_exact_sums() {
    for trials in [1u64, 2, 5, 17, 45, 80] {
        for (num, den) in [(1u64, 4u64), (1, 2), (2, 3), (3, 4)] {
            for k in 0..=trials + 1 {
                let fast = binomial_upper_tail(trials, num as f64 / den as f64, k);
                let slow = exact_upper_tail(trials, num, den, k);
                assert!(
                    (fast - slow).abs() < 1e-12,
                    "n={trials} p={num}/{den} k={k}: {fast} vs {slow}"
                );
            }
        }
    }
}

#[test]
fn subset_vote_conditional_on_known_edges() {
    let (n, c, trials) = (16usize, 10usize, 200_000u64);
    let results = simulate_subset(&SubsetProtocol::prefix(n, c).unwrap(), trials, 13);
    let law: Vec<f64> = internal_edge_distribution(n, c)
        .unwrap()
        .iter()
        .map(|p| p.to_f64().unwrap())
        .collect();

    let mut counts = vec![0u64; law.len()];
    for t in &results {
        counts[t.known_edges] += 1;
    }
    let (obs, exp) = pooled(&counts, &law, trials, 5.0);
    assert_chi_square(&obs, &exp);

    for (k, &count) in counts.iter().enumerate().filter(|(_, &c)| c >= 1000) {
        let hits = results
            .iter()
            .filter(|t| t.known_edges == k && t.guess == t.source)
            .count() as f64;
        let exact = vote_success_given_edges(k).to_f64().unwrap();
        // Ties are coin flips, so the per-trial variance is at most that of a
        // Bernoulli with the exact mean.
        assert!(
            within_sigma(hits / count as f64, exact, count, 4.0),
            "k={k}: {} vs {exact}",
            hits / count as f64
        );
    }
}

#[test]
fn subset_exact_success_matches_enumeration() {
    for n in 1..=3 {
        for c in 0..=2 * n {
            let proto = SubsetProtocol::prefix(n, c).unwrap();
            assert_eq!(
                subset_success_by_enumeration(&proto).unwrap(),
                subset_exact_success(n, c).unwrap(),
                "n={n} c={c}"
            );
        }
    }
}

#[test]
fn small_subset_is_weak_at_1024() {
    let exact = subset_exact_success(512, 11).unwrap().to_f64().unwrap();
    assert!(exact < 2.0 / 3.0);
    let trials = 40_000u64;
    let results = simulate_subset(&SubsetProtocol::prefix(512, 11).unwrap(), trials, 14);
    let hits = results.iter().filter(|t| t.guess == t.source).count() as f64;
    assert!(within_sigma(hits / trials as f64, exact, trials, 4.0));
}

#[test]
fn gamma_monte_carlo_grid() {
    let mut rng = from_seed(15);
    for n in [3usize, 5, 8] {
        for k in (2..=6).step_by(2) {
            let exact = gamma_exact_f64(n, k).unwrap();
            let est = gamma_monte_carlo_for(&canonical_support(n, k), 50_000, &mut rng).unwrap();
            assert!(
                est.within_sigma(exact, 4.0),
                "n={n} k={k}: {} vs {exact}",
                est.mean
            );
        }
    }
}

#[test]
fn gamma_does_not_depend_on_the_support() {
    let mut rng = from_seed(16);
    let (n, k) = (6usize, 4usize);
    let exact = gamma_exact_f64(n, k).unwrap();
    for _ in 0..5 {
        let z = random_support(n, k, &mut rng);
        assert_eq!(z.weight(), k);
        let est = gamma_monte_carlo_for(&z, 50_000, &mut rng).unwrap();
        assert!(
            est.within_sigma(exact, 4.0),
            "support {z}: {} vs {exact}",
            est.mean
        );
    }
}
