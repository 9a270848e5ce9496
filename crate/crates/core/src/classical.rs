//! Classical one-way protocols measured against the hard distribution.
//!
//! Two views of a protocol live here:
//! - [`SubsetProtocol`] is simulated on sampled instances at any size. Alice
//!   sends `x` restricted to a fixed index set `S`; Bob votes with the edges
//!   whose endpoints both lie in `S`.
//! - [`AliceMap`] is a full message table on `{0,1}^{2n}`. For tiny `n`,
//!   [`bayes_success`] computes the exact success of the best Bob for that
//!   table, and [`bruteforce_optimal`] maximizes it over every table.
//!
//! Success always means naming the source `b` of `w`, not the promise answer.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::combinatorics::{count_matchings, internal_edge_distribution};
use crate::error::{Error, Result};
use crate::instances::{sample_t, BhmInstance, BIAS};
use crate::matching::PerfectMatching;
use crate::rng::substream;
use crate::stats::Estimate;

pub trait OneWayProtocol {
    type Message;

    fn message_bits(&self) -> usize;

    fn alice(&self, x: &BitString) -> Self::Message;

    fn bob(
        &self,
        message: &Self::Message,
        matching: &PerfectMatching,
        w: &BitString,
        rng: &mut dyn RngCore,
    ) -> bool;
}

/// Alice sends `x` restricted to `S`; Bob compares `w_i` with `(Mx)_i` on
/// every edge inside `S` and takes the majority, flipping a fair coin on ties
/// (including when no edge lies inside `S`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetProtocol {
    n: usize,
    /// Sorted 1-based indices.
    subset: Vec<usize>,
    member: Vec<bool>,
}

impl SubsetProtocol {
    pub fn new(n: usize, subset: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut subset: Vec<usize> = subset.into_iter().collect();
        subset.sort_unstable();
        subset.dedup();
        let mut member = vec![false; 2 * n];
        for &i in &subset {
            if i == 0 || i > 2 * n {
                return Err(Error::InvalidArgument(format!(
                    "index {i} outside 1..={}",
                    2 * n
                )));
            }
            member[i - 1] = true;
        }
        Ok(Self { n, subset, member })
    }

    /// `S = {1..c}`.
    pub fn prefix(n: usize, c: usize) -> Result<Self> {
        if c > 2 * n {
            return Err(Error::InvalidArgument(format!(
                "subset size {c} exceeds 2n = {}",
                2 * n
            )));
        }
        Self::new(n, 1..=c)
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// Matching rows with both endpoints in `S`.
    pub fn internal_edges(&self, matching: &PerfectMatching) -> Vec<usize> {
        self.subset
            .iter()
            .filter(|&&k| k < matching.partner(k) && self.member[matching.partner(k) - 1])
            .map(|&k| matching.edge_of(k))
            .collect()
    }

    /// Agreements and disagreements between `w` and the known parities.
    fn votes(&self, message: &[bool], matching: &PerfectMatching, w: &BitString) -> (usize, usize) {
        let value = |k: usize| message[self.subset.binary_search(&k).expect("k in S")];
        let mut agree = 0;
        let mut disagree = 0;
        for row in self.internal_edges(matching) {
            let (k, l) = matching.edge(row);
            if value(k) ^ value(l) == w.get(row) {
                agree += 1;
            } else {
                disagree += 1;
            }
        }
        (agree, disagree)
    }
}

impl OneWayProtocol for SubsetProtocol {
    type Message = Vec<bool>;

    fn message_bits(&self) -> usize {
        self.subset.len()
    }

    fn alice(&self, x: &BitString) -> Vec<bool> {
        self.subset.iter().map(|&i| x.get(i)).collect()
    }

    fn bob(
        &self,
        message: &Vec<bool>,
        matching: &PerfectMatching,
        w: &BitString,
        rng: &mut dyn RngCore,
    ) -> bool {
        let (agree, disagree) = self.votes(message, matching, w);
        match agree.cmp(&disagree) {
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => rng.random(),
        }
    }
}

/// Outcome of one simulated subset-protocol trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetTrial {
    pub guess: bool,
    pub source: bool,
    /// Promise answer, `None` outside the promise.
    pub promise_answer: Option<bool>,
    pub known_edges: usize,
}

pub fn run_subset_trial<R: Rng>(proto: &SubsetProtocol, rng: &mut R) -> SubsetTrial {
    let inst: BhmInstance = sample_t(proto.n, rng);
    let message = proto.alice(inst.x());
    let guess = proto.bob(&message, inst.matching(), inst.w(), rng);
    SubsetTrial {
        guess,
        source: inst.source().expect("sampled instances carry a source"),
        promise_answer: inst.promise_class().answer(),
        known_edges: proto.internal_edges(inst.matching()).len(),
    }
}

/// `trials` independent trials, trial `i` drawing from substream `i` of `seed`.
pub fn simulate_subset(proto: &SubsetProtocol, trials: u64, seed: u64) -> Vec<SubsetTrial> {
    (0..trials)
        .into_par_iter()
        .map(|i| run_subset_trial(proto, &mut substream(seed, i)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SuccessMethod {
    Exact { fraction: String },
    MonteCarlo { trials: u64, std_error: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessReport {
    pub protocol: String,
    pub n: usize,
    pub message_bits: usize,
    pub success_prob: f64,
    #[serde(flatten)]
    pub method: SuccessMethod,
    /// Success against the promise answer on promise instances (Monte Carlo only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub promise_success: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Message classes of the maximizing Alice map (brute force only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<BitString>>>,
}

impl SuccessReport {
    pub fn exact(
        protocol: impl Into<String>,
        n: usize,
        message_bits: usize,
        value: &BigRational,
    ) -> Self {
        Self {
            protocol: protocol.into(),
            n,
            message_bits,
            success_prob: value.to_f64().expect("probability"),
            method: SuccessMethod::Exact {
                fraction: value.to_string(),
            },
            promise_success: None,
            seed: None,
            witness: None,
        }
    }

    pub fn monte_carlo(
        protocol: impl Into<String>,
        n: usize,
        message_bits: usize,
        est: Estimate,
    ) -> Self {
        Self {
            protocol: protocol.into(),
            n,
            message_bits,
            success_prob: est.mean,
            method: SuccessMethod::MonteCarlo {
                trials: est.trials,
                std_error: est.std_error,
            },
            promise_success: None,
            seed: None,
            witness: None,
        }
    }
}

/// Source-labelled and promise-conditioned success estimates for a batch of trials.
pub fn summarize_subset(trials: &[SubsetTrial]) -> (Estimate, Option<Estimate>) {
    let hits = trials.iter().filter(|t| t.guess == t.source).count() as u64;
    let promise: Vec<_> = trials
        .iter()
        .filter_map(|t| t.promise_answer.map(|a| (t.guess, a)))
        .collect();
    let promise_est = (!promise.is_empty()).then(|| {
        let hits = promise.iter().filter(|(g, a)| g == a).count() as u64;
        Estimate::from_counts(hits, promise.len() as u64)
    });
    (
        Estimate::from_counts(hits, trials.len() as u64),
        promise_est,
    )
}

pub fn classical_run(n: usize, c: usize, trials: u64, seed: u64) -> Result<SuccessReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let proto = SubsetProtocol::prefix(n, c)?;
    let results = simulate_subset(&proto, trials, seed);
    let (est, promise) = summarize_subset(&results);
    let mut report = SuccessReport::monte_carlo(format!("subset(c={c})"), n, c, est);
    report.promise_success = promise;
    report.seed = Some(seed);
    Ok(report)
}

/// `c(c-1) / (2(2n-1))`: expected number of matching edges inside a fixed
/// `c`-subset of `[2n]` under a uniform matching.
pub fn expected_internal_edges(n: usize, c: usize) -> f64 {
    assert!(c <= 2 * n);
    if c < 2 {
        return 0.0;
    }
    (c * (c - 1)) as f64 / (2 * (2 * n - 1)) as f64
}

fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Probability that a majority vote over `k` independent observations, each
/// correct with probability 3/4, names the source, ties broken by a fair coin.
pub fn vote_success_given_edges(k: usize) -> BigRational {
    let (p, q, d) = (BIAS.0, BIAS.1 - BIAS.0, BIAS.1);
    let den = BigInt::from(d).pow(k as u32);
    let choose = |j: usize| -> BigInt {
        (0..j).fold(BigInt::from(1), |acc, i| {
            acc * BigInt::from(k - i) / BigInt::from(i + 1)
        })
    };
    let term =
        |j: usize| choose(j) * BigInt::from(p).pow(j as u32) * BigInt::from(q).pow((k - j) as u32);
    let mut total = rational((k / 2 + 1..=k).map(term).sum::<BigInt>(), den.clone());
    if k.is_multiple_of(2) {
        total += rational(term(k / 2), den * 2);
    }
    total
}

/// Exact source-labelled success of [`SubsetProtocol::prefix`]`(n, c)` under
/// the hard distribution, from the law of the number of internal edges.
pub fn subset_exact_success(n: usize, c: usize) -> Result<BigRational> {
    Ok(internal_edge_distribution(n, c)?
        .into_iter()
        .enumerate()
        .map(|(k, p)| p * vote_success_given_edges(k))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// A deterministic message table: `table[x]` is the message for the input
/// with table index `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliceMap {
    n: usize,
    messages: usize,
    table: Vec<u32>,
}

impl AliceMap {
    pub fn from_fn(n: usize, message_bits: usize, f: impl Fn(&BitString) -> u32) -> Result<Self> {
        if 2 * n > 24 || message_bits > 24 {
            return Err(Error::Budget {
                what: "message table size",
                required: (2 * n).max(message_bits) as u128,
                limit: 24,
            });
        }
        let messages = 1usize << message_bits;
        let table = (0..1usize << (2 * n))
            .map(|i| f(&BitString::from_index(i, 2 * n)))
            .collect::<Vec<_>>();
        if let Some(&bad) = table.iter().find(|&&m| m as usize >= messages) {
            return Err(Error::InvalidArgument(format!(
                "message {bad} needs more than {message_bits} bits"
            )));
        }
        Ok(Self { n, messages, table })
    }

    pub fn constant(n: usize) -> Result<Self> {
        Self::from_fn(n, 0, |_| 0)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, 2 * n, |x| x.to_index().expect("small") as u32)
    }

    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, 1, |x| (x.weight() % 2) as u32)
    }

    /// The bits of `x` at `subset`, packed in order.
    pub fn subset(n: usize, subset: &[usize]) -> Result<Self> {
        Self::from_fn(n, subset.len(), |x| {
            subset
                .iter()
                .enumerate()
                .fold(0u32, |acc, (j, &i)| acc | (u32::from(x.get(i)) << j))
        })
    }

    /// The first `c` bits of `x`.
    pub fn truncation(n: usize, c: usize) -> Result<Self> {
        Self::subset(n, &(1..=c).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn message_bits(&self) -> usize {
        self.messages.trailing_zeros() as usize
    }

    pub fn message(&self, x: &BitString) -> u32 {
        self.table[x.to_index().expect("small")]
    }

    /// The inputs grouped by message.
    pub fn partition(&self) -> Vec<Vec<BitString>> {
        let mut classes = vec![Vec::new(); self.messages];
        for (i, &m) in self.table.iter().enumerate() {
            classes[m as usize].push(BitString::from_index(i, 2 * self.n));
        }
        classes
    }
}

/// Default cap on `2^{2n} · N(2n) · 2^n`, the number of `(x, M, w)` tuples a
/// Bayes computation visits. It admits `2n <= 6`.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000;

/// Default cap on the number of Alice tables a brute force may visit.
pub const DEFAULT_MAP_BUDGET: u128 = 1 << 16;

/// Integer joint weights of `(b, x, M, w)` under the hard distribution.
///
/// `P(b, x, M, w) = weight / (2 · N(2n) · 2^{2n} · 4^n)` with
/// `weight = 3^{#agreements of w ⊕ Mx with b}`.
struct JointWeights {
    n: usize,
    matchings: usize,
    /// Indexed `[(matching * 2^{2n} + x) * 2^n + w]`, holding `(W_0, W_1)`.
    weights: Vec<(u64, u64)>,
    denominator: BigUint,
}

impl JointWeights {
    fn new(n: usize, budget: u128) -> Result<Self> {
        let matchings_big = count_matchings(2 * n)?;
        let required = matchings_big
            .to_u128()
            .unwrap_or(u128::MAX)
            .saturating_mul(1u128 << (3 * n).min(127));
        if required > budget || 3 * n >= 64 {
            return Err(Error::Budget {
                what: "(x, M, w) enumeration",
                required,
                limit: budget,
            });
        }
        let all = PerfectMatching::enumerate_all(n);
        let (xs, ws) = (1usize << (2 * n), 1usize << n);
        let (p, q) = (u64::from(BIAS.0), u64::from(BIAS.1 - BIAS.0));
        let mut weights = Vec::with_capacity(all.len() * xs * ws);
        for m in &all {
            for xi in 0..xs {
                let mx = m.apply(&BitString::from_index(xi, 2 * n))?.to_index()?;
                for wi in 0..ws {
                    let ones = (wi ^ mx).count_ones();
                    let zeros = n as u32 - ones;
                    weights.push((p.pow(zeros) * q.pow(ones), p.pow(ones) * q.pow(zeros)));
                }
            }
        }
        let denominator = BigUint::from(2u32)
            * matchings_big
            * BigUint::from(2u32).pow(2 * n as u32)
            * BigUint::from(u64::from(BIAS.1)).pow(n as u32);
        Ok(Self {
            n,
            matchings: all.len(),
            weights,
            denominator,
        })
    }

    /// `Σ_{m, M, w} max_b Σ_{x: A(x) = m} W_b`, the numerator of the best
    /// Bob's success probability.
    fn best_bob_numerator(
        &self,
        table: &[u32],
        messages: usize,
        scratch: &mut Vec<(u64, u64)>,
    ) -> u128 {
        let (xs, ws) = (1usize << (2 * self.n), 1usize << self.n);
        let mut total: u128 = 0;
        for mi in 0..self.matchings {
            scratch.clear();
            scratch.resize(messages * ws, (0, 0));
            let block = &self.weights[mi * xs * ws..(mi + 1) * xs * ws];
            for (xi, &msg) in table.iter().enumerate() {
                let row = &block[xi * ws..(xi + 1) * ws];
                let acc = &mut scratch[msg as usize * ws..(msg as usize + 1) * ws];
                for (a, &(w0, w1)) in acc.iter_mut().zip(row) {
                    a.0 += w0;
                    a.1 += w1;
                }
            }
            total += scratch
                .iter()
                .map(|&(a, b)| u128::from(a.max(b)))
                .sum::<u128>();
        }
        total
    }

    fn to_probability(&self, numerator: u128) -> BigRational {
        BigRational::new(
            BigInt::from(numerator),
            BigInt::from(self.denominator.clone()),
        )
    }
}

/// Exact success of the best Bob for `alice` under the hard distribution.
pub fn bayes_success(alice: &AliceMap) -> Result<BigRational> {
    bayes_success_with_budget(alice, DEFAULT_ENUMERATION_BUDGET)
}

pub fn bayes_success_with_budget(alice: &AliceMap, budget: u128) -> Result<BigRational> {
    let joint = JointWeights::new(alice.n, budget)?;
    let numerator = joint.best_bob_numerator(&alice.table, alice.messages, &mut Vec::new());
    Ok(joint.to_probability(numerator))
}

/// Exact success of the subset vote protocol by full enumeration of
/// `(b, x, M, w)`, a coin-flip tie scoring one half.
pub fn subset_success_by_enumeration(proto: &SubsetProtocol) -> Result<BigRational> {
    let n = proto.n;
    let joint = JointWeights::new(n, DEFAULT_ENUMERATION_BUDGET)?;
    let all = PerfectMatching::enumerate_all(n);
    let (xs, ws) = (1usize << (2 * n), 1usize << n);
    // Twice the numerator, so half-credit ties stay integral.
    let mut doubled: u128 = 0;
    for (mi, m) in all.iter().enumerate() {
        for xi in 0..xs {
            let message = proto.alice(&BitString::from_index(xi, 2 * n));
            for wi in 0..ws {
                let (w0, w1) = joint.weights[(mi * xs + xi) * ws + wi];
                let (agree, disagree) = proto.votes(&message, m, &BitString::from_index(wi, n));
                doubled += match agree.cmp(&disagree) {
                    std::cmp::Ordering::Greater => 2 * u128::from(w0),
                    std::cmp::Ordering::Less => 2 * u128::from(w1),
                    std::cmp::Ordering::Equal => u128::from(w0 + w1),
                };
            }
        }
    }
    Ok(joint.to_probability(doubled) / BigRational::from_integer(2.into()))
}

/// Result of an exhaustive search over Alice tables.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub value: BigRational,
    pub witness: AliceMap,
    /// Tables evaluated after symmetry reduction.
    pub maps_searched: u128,
}

impl BruteForceResult {
    pub fn report(&self) -> SuccessReport {
        let mut r = SuccessReport::exact(
            "bruteforce-optimal",
            self.witness.n,
            self.witness.message_bits(),
            &self.value,
        );
        r.witness = Some(self.witness.partition());
        r
    }
}

pub fn bruteforce_optimal(n: usize, c: usize) -> Result<BruteForceResult> {
    bruteforce_optimal_with_budget(n, c, DEFAULT_ENUMERATION_BUDGET, DEFAULT_MAP_BUDGET)
}

/// Maximum of [`bayes_success`] over every Alice table with `c`-bit messages.
///
/// Relabeling messages does not change the best Bob's success, so input 0
/// is pinned to message 0; for one-bit messages this removes exactly the
/// complement symmetry. When `c >= 2n` the identity table is optimal, since
/// every table is a coarsening of it and coarsening cannot help Bob.
pub fn bruteforce_optimal_with_budget(
    n: usize,
    c: usize,
    enumeration_budget: u128,
    map_budget: u128,
) -> Result<BruteForceResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if c >= 2 * n {
        let witness = AliceMap::identity(n)?;
        let value = bayes_success_with_budget(&witness, enumeration_budget)?;
        return Ok(BruteForceResult {
            value,
            witness,
            maps_searched: 1,
        });
    }
    let joint = JointWeights::new(n, enumeration_budget)?;
    let inputs = 1usize << (2 * n);
    let messages = 1usize << c;
    let free_inputs = (inputs - 1) as u32;
    let maps = (messages as u128)
        .checked_pow(free_inputs)
        .filter(|&m| m <= map_budget)
        .ok_or(Error::Budget {
            what: "Alice map enumeration",
            required: (messages as u128)
                .checked_pow(free_inputs)
                .unwrap_or(u128::MAX),
            limit: map_budget,
        })?;

    let decode = |code: u128| -> Vec<u32> {
        let mut table = vec![0u32; inputs];
        let mut rest = code;
        for slot in table.iter_mut().skip(1) {
            *slot = (rest % messages as u128) as u32;
            rest /= messages as u128;
        }
        table
    };

    let chunk = 1u128 << 10;
    let chunks = maps.div_ceil(chunk);
    let (best_numerator, best_code) = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut scratch = Vec::new();
            let mut best = (0u128, u128::MAX);
            for code in ci * chunk..((ci + 1) * chunk).min(maps) {
                let value = joint.best_bob_numerator(&decode(code), messages, &mut scratch);
                if value > best.0 || (value == best.0 && code < best.1) {
                    best = (value, code);
                }
            }
            best
        })
        .reduce(
            || (0, u128::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let witness = AliceMap {
        n,
        messages,
        table: decode(best_code),
    };
    Ok(BruteForceResult {
        value: joint.to_probability(best_numerator),
        witness,
        maps_searched: maps,
    })
}
