//! The quantum one-way protocol.
//!
//! Alice sends `|ψ⟩ = (2n)^{-1/2} Σ_i (-1)^{x_i} |i⟩`, a state on `ceil(log2 2n)`
//! qubits. Bob measures in the basis `{(|k⟩ ± |l⟩)/√2 : (k, l) ∈ M}`, which
//! reveals the parity of one uniformly random edge `j`, and answers
//! `(Mx)_j ⊕ w_j`.
//!
//! Every amplitude is `±1/√(2n)`, so amplitudes are stored as plain reals.

use rand::Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::instances::BhmInstance;
use crate::matching::PerfectMatching;
use crate::stats::majority_success;

#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    amplitudes: Vec<f64>,
}

impl MessageState {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }
}

pub fn prepare_state(x: &BitString) -> MessageState {
    let scale = 1.0 / (x.len() as f64).sqrt();
    MessageState {
        amplitudes: x
            .bits()
            .iter()
            .map(|&b| if b { -scale } else { scale })
            .collect(),
    }
}

/// Qubits needed to carry a state of dimension `2n`.
pub fn qubit_cost(n: usize) -> u32 {
    (2 * n).next_power_of_two().trailing_zeros()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The parity this sign certifies.
    pub fn parity(self) -> bool {
        self == Sign::Minus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MeasurementOutcome {
    /// 1-based row of the measured edge.
    pub edge: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum MeasurementMethod {
    /// Born-rule probabilities of all `2n` basis projectors.
    Projector,
    /// Uniform edge with the sign fixed by the edge parity.
    #[default]
    Analytic,
}

/// Born-rule probabilities of the matching-basis outcomes, ordered
/// `(1,+), (1,-), (2,+), (2,-), ...`.
pub fn outcome_probabilities(state: &MessageState, matching: &PerfectMatching) -> Result<Vec<f64>> {
    if state.dim() != 2 * matching.n() {
        return Err(Error::dimension(2 * matching.n(), state.dim()));
    }
    let a = &state.amplitudes;
    let mut probs = Vec::with_capacity(state.dim());
    for &(k, l) in matching.edges() {
        let (ak, al) = (a[k - 1], a[l - 1]);
        let plus = (ak + al) / std::f64::consts::SQRT_2;
        let minus = (ak - al) / std::f64::consts::SQRT_2;
        probs.push(plus * plus);
        probs.push(minus * minus);
    }
    Ok(probs)
}

/// Repeated measurements of copies of one message state in one matching basis.
#[derive(Debug, Clone)]
pub struct MatchingBasisSampler {
    method: MeasurementMethod,
    /// Sign each edge's outcome must carry.
    signs: Vec<Sign>,
    /// Cumulative outcome distribution, projector route only.
    cumulative: Vec<f64>,
}

impl MatchingBasisSampler {
    pub fn new(
        state: &MessageState,
        matching: &PerfectMatching,
        method: MeasurementMethod,
    ) -> Result<Self> {
        if state.dim() != 2 * matching.n() {
            return Err(Error::dimension(2 * matching.n(), state.dim()));
        }
        let a = &state.amplitudes;
        let signs = matching
            .edges()
            .iter()
            .map(|&(k, l)| {
                if a[k - 1] * a[l - 1] > 0.0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        let cumulative = match method {
            MeasurementMethod::Analytic => Vec::new(),
            MeasurementMethod::Projector => outcome_probabilities(state, matching)?
                .into_iter()
                .scan(0.0, |acc, p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect(),
        };
        Ok(Self {
            method,
            signs,
            cumulative,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MeasurementOutcome {
        match self.method {
            MeasurementMethod::Analytic => {
                let edge = rng.random_range(0..self.signs.len());
                MeasurementOutcome {
                    edge: edge + 1,
                    sign: self.signs[edge],
                }
            }
            MeasurementMethod::Projector => {
                let total = *self.cumulative.last().expect("at least one edge");
                let u = rng.random::<f64>() * total;
                let idx = self
                    .cumulative
                    .partition_point(|&c| c <= u)
                    .min(self.cumulative.len() - 1);
                MeasurementOutcome {
                    edge: idx / 2 + 1,
                    sign: if idx % 2 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    },
                }
            }
        }
    }
}

pub fn measure_matching_basis<R: Rng + ?Sized>(
    state: &MessageState,
    matching: &PerfectMatching,
    method: MeasurementMethod,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    Ok(MatchingBasisSampler::new(state, matching, method)?.sample(rng))
}

/// Outcome record for one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub guess: bool,
    pub truth: Option<bool>,
    /// Total qubits sent over all repetitions.
    pub qubit_cost: u64,
    pub shots: u64,
    pub seed: Option<u64>,
}

impl TrialReport {
    pub fn correct(&self) -> Option<bool> {
        self.truth.map(|t| t == self.guess)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct QuantumProtocol {
    pub method: MeasurementMethod,
}

impl QuantumProtocol {
    pub fn new(method: MeasurementMethod) -> Self {
        Self { method }
    }

    /// Bob's side for one received message state.
    fn answer<R: Rng + ?Sized>(
        &self,
        sampler: &MatchingBasisSampler,
        inst: &BhmInstance,
        parities: &BitString,
        rng: &mut R,
    ) -> bool {
        let outcome = sampler.sample(rng);
        assert_eq!(
            outcome.sign.parity(),
            parities.get(outcome.edge),
            "measured sign disagrees with edge parity"
        );
        outcome.sign.parity() ^ inst.w().get(outcome.edge)
    }

    pub fn run_single<R: Rng + ?Sized>(&self, inst: &BhmInstance, rng: &mut R) -> bool {
        let state = prepare_state(inst.x());
        let sampler = MatchingBasisSampler::new(&state, inst.matching(), self.method)
            .expect("instance shapes are consistent");
        self.answer(&sampler, inst, &inst.parities(), rng)
    }

    /// Majority vote over `r` independent runs, each on a fresh message state.
    pub fn run_repeated<R: Rng + ?Sized>(
        &self,
        inst: &BhmInstance,
        r: u64,
        rng: &mut R,
    ) -> Result<TrialReport> {
        check_odd(r)?;
        // Measurement does not alter the stored amplitudes, so one prepared
        // state stands in for the r identical copies Alice sends.
        let state = prepare_state(inst.x());
        let sampler = MatchingBasisSampler::new(&state, inst.matching(), self.method)?;
        let parities = inst.parities();
        let ones = (0..r)
            .filter(|_| self.answer(&sampler, inst, &parities, rng))
            .count() as u64;
        Ok(TrialReport {
            guess: 2 * ones > r,
            truth: inst.source(),
            qubit_cost: r * u64::from(qubit_cost(inst.n())),
            shots: r,
            seed: None,
        })
    }

    /// Number of single-shot answers equal to `target` over `shots` runs.
    pub fn count_answers<R: Rng + ?Sized>(
        &self,
        inst: &BhmInstance,
        target: bool,
        shots: u64,
        rng: &mut R,
    ) -> u64 {
        let state = prepare_state(inst.x());
        let sampler = MatchingBasisSampler::new(&state, inst.matching(), self.method)
            .expect("instance shapes are consistent");
        let parities = inst.parities();
        (0..shots)
            .filter(|_| self.answer(&sampler, inst, &parities, rng) == target)
            .count() as u64
    }
}

fn check_odd(r: u64) -> Result<()> {
    if r.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "repetition count must be odd for a majority vote, got {r}"
        )));
    }
    Ok(())
}

/// Single-shot success when the correct answer is `answer`:
/// `(n - d)/n` for answer 0 and `d/n` for answer 1.
pub fn single_shot_success(n: usize, distance: usize, answer: bool) -> f64 {
    let favourable = if answer { distance } else { n - distance };
    favourable as f64 / n as f64
}

/// Exact success probability of the `r`-fold protocol against the source
/// label of `inst`.
pub fn exact_success(inst: &BhmInstance, r: u64) -> Result<f64> {
    check_odd(r)?;
    let source = inst.source().ok_or(Error::UnknownSource)?;
    Ok(majority_success(
        single_shot_success(inst.n(), inst.distance(), source),
        r,
    ))
}

/// Exact success probability against the promise answer of `inst`.
pub fn exact_promise_success(inst: &BhmInstance, r: u64) -> Result<f64> {
    check_odd(r)?;
    let answer = inst
        .promise_class()
        .answer()
        .ok_or_else(|| Error::Domain("instance lies outside the promise".into()))?;
    Ok(majority_success(
        single_shot_success(inst.n(), inst.distance(), answer),
        r,
    ))
}
