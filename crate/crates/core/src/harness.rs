//! Experiment harness: separation sweeps, per-trial protocol tables, the
//! identity verification suite, and deterministic CSV / JSON-lines output.
//!
//! Every stochastic experiment is driven by one seed. Trial `i` of grid
//! point `g` uses ChaCha stream `(g << 40) | i`, and rows are emitted in
//! trial order whatever order rayon finishes them in.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::classical::{subset_exact_success, OneWayProtocol, SubsetProtocol};
use crate::combinatorics::{
    count_matchings, gamma_bound, gamma_exact, gamma_exact_f64, proof_exponent,
};
use crate::error::{Error, Result};
use crate::fourier::{
    bias_difference, check_kkl, check_l1_l2, check_lift_identity, check_parseval, chi, convolve,
    convolve_spectral_with_factor, f_spectrum_closed_form, transform, CubeFunction,
};
use crate::instances::{density_mu_exact, sample_t, BhmInstance};
use crate::matching::PerfectMatching;
use crate::quantum::{outcome_probabilities, prepare_state, qubit_cost, QuantumProtocol};
use crate::rng::substream;
use crate::stats::{majority_success, Estimate};

fn stream_index(grid_point: usize, trial: u64) -> u64 {
    ((grid_point as u64) << 40) | trial
}

/// A cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(f) if f.is_finite() => format!("{f:.16e}"),
            Value::Float(_) => String::new(),
            Value::Bool(b) => u8::from(*b).to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn render_json(&self) -> String {
        match self {
            Value::Float(f) if !f.is_finite() => "null".into(),
            Value::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Value::Bool(b) => b.to_string(),
            other => other.render(),
        }
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(i64::from(v))
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn float(&self, row: usize, name: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Value::Float(f) => Some(*f),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Renders `table` as CSV with a header row, or as one JSON object per line.
/// Floats carry 17 significant digits.
pub fn render(table: &Table, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io {
                path: "<csv buffer>".into(),
                source: e.into(),
            };
            w.write_record(&table.columns).map_err(io)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Value::render)).map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Io {
                path: "<csv buffer>".into(),
                source: e.into_error(),
            })
        }
        Format::Json => {
            let mut out = Vec::new();
            for row in &table.rows {
                let fields: Vec<String> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| {
                        format!(
                            "{}:{}",
                            serde_json::to_string(k).expect("key"),
                            v.render_json()
                        )
                    })
                    .collect();
                out.extend_from_slice(format!("{{{}}}\n", fields.join(",")).as_bytes());
            }
            Ok(out)
        }
    }
}

/// Writes `table` to `path`, or to standard output when `path` is `None`.
pub fn emit(table: &Table, format: Format, path: Option<&Path>) -> Result<()> {
    write_bytes(&render(table, format)?, path)
}

pub fn write_bytes(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| Error::Io {
            path: p.into(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Instances drawn from the hard distribution, instance `i` from stream `i`.
pub fn generate_instances(n: usize, count: u64, seed: u64) -> Result<Vec<BhmInstance>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok((0..count)
        .into_par_iter()
        .map(|i| sample_t(n, &mut substream(seed, i)))
        .collect())
}

/// One row per trial: a fresh hard-distribution instance answered by the
/// `reps`-fold quantum protocol.
pub fn quantum_run(n: usize, reps: u64, trials: u64, seed: u64) -> Result<Table> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let proto = QuantumProtocol::default();
    let rows = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let inst = sample_t(n, &mut rng);
            let report = proto.run_repeated(&inst, reps, &mut rng)?;
            Ok(vec![
                Value::from(i),
                Value::from(n),
                Value::from(reps),
                Value::from(inst.distance()),
                Value::from(inst.source().expect("sampled")),
                Value::from(report.guess),
                Value::from(report.correct().expect("sampled")),
                Value::from(report.qubit_cost),
                Value::from(seed),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(vec![
        "trial",
        "n",
        "r",
        "d",
        "source",
        "guess",
        "correct",
        "qubit_cost",
        "seed",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Smallest `n` (number of matching edges) in the doubling grid.
    pub n_min: usize,
    pub n_max: usize,
    pub reps: u64,
    /// Classical subset size; defaults to the quantum message cost.
    pub subset_size: Option<usize>,
    pub trials: u64,
    pub seed: u64,
}

impl SweepConfig {
    pub fn grid(&self) -> Result<Vec<usize>> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidArgument(format!(
                "invalid grid: n_min = {}, n_max = {}",
                self.n_min, self.n_max
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument(
                "at least one trial is required".into(),
            ));
        }
        if self.reps.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "repetition count must be odd, got {}",
                self.reps
            )));
        }
        Ok(
            std::iter::successors(Some(self.n_min), |&n| n.checked_mul(2))
                .take_while(|&n| n <= self.n_max)
                .collect(),
        )
    }
}

pub const SWEEP_COLUMNS: [&str; 17] = [
    "n",
    "two_n",
    "trials",
    "promise_trials",
    "quantum_cost",
    "quantum_success",
    "quantum_sigma",
    "quantum_success_t",
    "quantum_sigma_t",
    "classical_cost",
    "classical_success",
    "classical_sigma",
    "classical_success_t",
    "classical_sigma_t",
    "classical_exact_t",
    "reps",
    "seed",
];

/// Quantum versus classical success at comparable message cost, over a
/// doubling grid of `n`. Each trial draws one hard-distribution instance and
/// runs both protocols on it. The unsuffixed success columns are restricted
/// to promise instances and scored against the promise answer; the `_t`
/// columns cover every trial and are scored against the source label.
/// Per-trial sweep record: source, promise answer, quantum guess, classical guess.
type Outcome = (bool, Option<bool>, bool, bool);

pub fn run_separation_sweep(config: &SweepConfig) -> Result<Table> {
    let grid = config.grid()?;
    let mut table = Table::new(SWEEP_COLUMNS.to_vec());
    for (g, &n) in grid.iter().enumerate() {
        let q_cost = u64::from(qubit_cost(n)) * config.reps;
        let c = config.subset_size.unwrap_or(q_cost as usize).min(2 * n);
        let classical = SubsetProtocol::prefix(n, c)?;
        let quantum = QuantumProtocol::default();
        let outcomes = (0..config.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream(config.seed, stream_index(g, i));
                let inst = sample_t(n, &mut rng);
                let q = quantum.run_repeated(&inst, config.reps, &mut rng)?.guess;
                let msg = classical.alice(inst.x());
                let cl = classical.bob(&msg, inst.matching(), inst.w(), &mut rng);
                Ok((
                    inst.source().expect("sampled"),
                    inst.promise_class().answer(),
                    q,
                    cl,
                ))
            })
            .collect::<Result<Vec<_>>>()?;

        let count = |f: &dyn Fn(&Outcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
        let promise_trials = count(&|o| o.1.is_some());
        let q_t = Estimate::from_counts(count(&|o| o.2 == o.0), config.trials);
        let c_t = Estimate::from_counts(count(&|o| o.3 == o.0), config.trials);
        let (q_p, c_p) = if promise_trials > 0 {
            (
                Estimate::from_counts(count(&|o| o.1 == Some(o.2)), promise_trials),
                Estimate::from_counts(count(&|o| o.1 == Some(o.3)), promise_trials),
            )
        } else {
            let nan = Estimate {
                mean: f64::NAN,
                std_error: f64::NAN,
                trials: 0,
            };
            (nan, nan)
        };
        let exact = subset_exact_success(n, c)?.to_f64().unwrap_or(f64::NAN);
        table.push(vec![
            n.into(),
            (2 * n).into(),
            config.trials.into(),
            promise_trials.into(),
            q_cost.into(),
            q_p.mean.into(),
            q_p.std_error.into(),
            q_t.mean.into(),
            q_t.std_error.into(),
            c.into(),
            c_p.mean.into(),
            c_p.std_error.into(),
            c_t.mean.into(),
            c_t.std_error.into(),
            exact.into(),
            config.reps.into(),
            config.seed.into(),
        ]);
    }
    Ok(table)
}

/// Deliberate defects for mutation-testing the verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Drop the `2^m` factor from the spectral convolution route.
    ConvolutionFactor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Largest cube dimension exercised.
    pub m: usize,
    /// Random cases per identity.
    pub cases: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            m: 8,
            cases: 20,
            seed: 0,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    /// Largest observed gap, or violation count for inequality checks.
    pub max_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn gap(name: &'static str, cases: usize, max_gap: f64, tolerance: f64) -> Self {
        Self {
            name,
            cases,
            max_gap,
            tolerance,
            passed: max_gap <= tolerance,
        }
    }

    fn flag(name: &'static str, cases: usize, violations: usize) -> Self {
        Self {
            name,
            cases,
            max_gap: violations as f64,
            tolerance: 0.0,
            passed: violations == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub m: usize,
    pub cases: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    fn new(config: &VerifyConfig, checks: Vec<CheckResult>) -> Self {
        Self {
            m: config.m,
            cases: config.cases,
            seed: config.seed,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

fn random_function<R: Rng>(m: usize, rng: &mut R) -> CubeFunction {
    CubeFunction::from_fn(m, |_| rng.random_range(-1.0..1.0)).expect("finite values")
}

/// A `{-1, 0, 1}`-valued function with a random support density.
pub fn random_sign_function<R: Rng>(m: usize, rng: &mut R) -> CubeFunction {
    let density: f64 = rng.random_range(0.0..1.0);
    CubeFunction::from_fn(m, |_| {
        if rng.random::<f64>() < density {
            if rng.random() {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    })
    .expect("finite values")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub const KKL_DELTAS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Transform, Parseval, convolution, norm, KKL, closed-form spectrum and
/// lifting checks at sizes up to `config.m`.
pub fn fourier_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    if config.m == 0 || config.cases == 0 {
        return Err(Error::InvalidArgument(
            "m and cases must be positive".into(),
        ));
    }
    let m = config.m;
    let cases = config.cases;
    let mut checks = Vec::new();
    let case_rng =
        |family: usize, case: usize| substream(config.seed, stream_index(family, case as u64));

    let per_case = |family: usize,
                    f: &(dyn Fn(&mut crate::rng::SimRng) -> Result<f64> + Sync)|
     -> Result<f64> {
        (0..cases)
            .into_par_iter()
            .map(|c| f(&mut case_rng(family, c)))
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().fold(0.0, f64::max))
    };

    let naive_m = m.min(10);
    checks.push(CheckResult::gap(
        "transform_matches_naive",
        cases,
        per_case(1, &|rng| {
            let f = random_function(naive_m, rng);
            let fast = transform(&f)?;
            let size = 1usize << naive_m;
            let slow: Vec<f64> = (0..size)
                .map(|s| (0..size).map(|y| f.at(y) * chi(s, y)).sum::<f64>() / size as f64)
                .collect();
            Ok(max_abs_diff(fast.coefficients(), &slow))
        })?,
        1e-12,
    ));

    checks.push(CheckResult::gap(
        "transform_linearity",
        cases,
        per_case(2, &|rng| {
            let (f, g) = (random_function(m, rng), random_function(m, rng));
            let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let combo = transform(&f.linear_combination(a, &g, b)?)?;
            let (fh, gh) = (transform(&f)?, transform(&g)?);
            let expected: Vec<f64> = fh
                .coefficients()
                .iter()
                .zip(gh.coefficients())
                .map(|(x, y)| a * x + b * y)
                .collect();
            Ok(max_abs_diff(combo.coefficients(), &expected))
        })?,
        1e-12,
    ));

    checks.push(CheckResult::gap(
        "fourier_inversion",
        cases,
        per_case(3, &|rng| {
            let f = random_function(m, rng);
            Ok(max_abs_diff(transform(&f)?.inverse().values(), f.values()))
        })?,
        1e-12,
    ));

    checks.push(CheckResult::gap(
        "parseval",
        cases,
        per_case(4, &|rng| {
            Ok(check_parseval(&random_function(m, rng))?.relative_gap())
        })?,
        1e-9,
    ));

    let conv_m = m.min(10);
    let factor = match config.fault {
        Some(Fault::ConvolutionFactor) => 1.0,
        None => (conv_m as f64).exp2(),
    };
    checks.push(CheckResult::gap(
        "convolution_theorem",
        cases,
        per_case(5, &|rng| {
            let (f, g) = (random_function(conv_m, rng), random_function(conv_m, rng));
            let direct = convolve(&f, &g)?;
            let spectral = convolve_spectral_with_factor(&f, &g, factor)?;
            let scale = direct.values().iter().fold(1.0f64, |a, v| a.max(v.abs()));
            Ok(max_abs_diff(direct.values(), spectral.values()) / scale)
        })?,
        1e-9,
    ));

    let l1_violations = (0..cases)
        .into_par_iter()
        .filter(|&c| !check_l1_l2(&random_function(m, &mut case_rng(6, c))))
        .count();
    checks.push(CheckResult::flag("l1_l2_inequality", cases, l1_violations));

    let kkl_cases = cases * 10;
    let kkl_violations = (0..kkl_cases)
        .into_par_iter()
        .map(|c| -> Result<usize> {
            let mut rng = case_rng(7, c);
            let dim = 1 + c % m.min(8);
            let f = random_sign_function(dim, &mut rng);
            let mut bad = 0;
            for &delta in &KKL_DELTAS {
                bad += usize::from(!check_kkl(&f, delta)?.holds);
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    checks.push(CheckResult::flag(
        "kkl_inequality",
        kkl_cases * KKL_DELTAS.len(),
        kkl_violations,
    ));

    let spec_n = m.min(12);
    let spectrum = transform(&bias_difference(spec_n)?)?;
    let mut closed_gap = 0.0f64;
    for s in 0..1usize << spec_n {
        let closed = f_spectrum_closed_form(spec_n, &BitString::from_index(s, spec_n))?;
        closed_gap = closed_gap.max((closed - spectrum.at(s)).abs());
    }
    checks.push(CheckResult::gap(
        "bias_difference_spectrum",
        1 << spec_n,
        closed_gap,
        1e-12,
    ));

    let lift_n = (m.min(12) / 2).max(1);
    checks.push(CheckResult::gap(
        "lifting_identity",
        cases,
        per_case(8, &|rng| {
            let matching = PerfectMatching::random(lift_n, rng);
            let size = rng.random_range(1..=(1usize << (2 * lift_n)));
            let set: BTreeSet<BitString> = (0..size)
                .map(|_| BitString::random(2 * lift_n, rng))
                .collect();
            check_lift_identity(&set, &matching)
        })?,
        1e-12,
    ));

    Ok(VerifyReport::new(config, checks))
}

/// Exact combinatorial identities: matching counts, `γ_k` against its bound
/// and enumeration, and the exponent estimate that drives the lower bound.
pub fn combinatorics_checks() -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    let mut bad = 0;
    for t in (2..=10).step_by(2) {
        bad += usize::from(
            count_matchings(t)? != BigUint::from(PerfectMatching::enumerate_all(t / 2).len()),
        );
    }
    checks.push(CheckResult::flag("matching_count_enumeration", 5, bad));

    let mut bad = 0;
    let mut cases = 0;
    let mut exponent_bad = 0;
    for n in 1..=32 {
        bad += usize::from(
            gamma_exact(n, 2)? != BigRational::new(1.into(), (2 * n as i64 - 1).into()),
        );
        for k in (2..=2 * n).step_by(2) {
            cases += 1;
            bad += usize::from(gamma_exact_f64(n, k)? > gamma_bound(n, k)? + 1e-15);
            let e = proof_exponent(n, k)?;
            let mid = ((2 * n * k) as f64).sqrt() / 4.0;
            exponent_bad += usize::from(e < mid - 1e-12 || mid < (n as f64).sqrt() / 2.0 - 1e-12);
        }
    }
    checks.push(CheckResult::flag("gamma_exact_and_bound", cases, bad));
    checks.push(CheckResult::flag("proof_exponent", cases, exponent_bad));

    let mut bad = 0;
    for n in 1..=4 {
        let all = PerfectMatching::enumerate_all(n);
        for k in (2..=2 * n).step_by(2) {
            let hits = all
                .iter()
                .filter(|m| {
                    crate::combinatorics::is_lifted_support(
                        &crate::combinatorics::canonical_support(n, k),
                        m,
                    )
                })
                .count();
            bad +=
                usize::from(gamma_exact(n, k)? != BigRational::new(hits.into(), all.len().into()));
        }
    }
    checks.push(CheckResult::flag("gamma_enumeration", 10, bad));
    Ok(checks)
}

/// Exact properties of the instance distributions and the quantum protocol.
pub fn protocol_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    let mut bad = 0;
    for n in 1..=10 {
        for b in [false, true] {
            let total = (0..1usize << n)
                .map(|i| density_mu_exact(b, &BitString::from_index(i, n)))
                .fold(BigRational::zero(), |a, d| a + d);
            bad += usize::from(!total.is_one());
        }
    }
    checks.push(CheckResult::flag("density_normalization", 20, bad));

    let mut worst = 0.0f64;
    let mut sign_bad = 0;
    for (i, n) in [1usize, 2, 4, 8, 16, 64].into_iter().enumerate() {
        let mut rng = substream(seed, stream_index(100, i as u64));
        let m = PerfectMatching::random(n, &mut rng);
        let x = BitString::random(2 * n, &mut rng);
        let probs = outcome_probabilities(&prepare_state(&x), &m)?;
        worst = worst.max((probs.iter().sum::<f64>() - 1.0).abs());
        let mx = m.apply(&x)?;
        for e in 1..=n {
            let wrong = if mx.get(e) {
                probs[2 * e - 2]
            } else {
                probs[2 * e - 1]
            };
            sign_bad += usize::from(wrong != 0.0 || probs.iter().any(|&p| p < 0.0));
        }
    }
    checks.push(CheckResult::gap(
        "measurement_normalization",
        6,
        worst,
        1e-12,
    ));
    checks.push(CheckResult::flag("measurement_sign_certainty", 6, sign_bad));

    let mut bad = 0;
    for p in [0.55, 2.0 / 3.0, 0.75, 0.9] {
        let values: Vec<f64> = (1..=45)
            .step_by(2)
            .map(|r| majority_success(p, r))
            .collect();
        bad += values.windows(2).filter(|w| w[1] < w[0] - 1e-12).count();
    }
    checks.push(CheckResult::flag("majority_monotone", 4, bad));
    Ok(checks)
}

/// Every identity and protocol check the crate knows about.
pub fn run_verification_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = fourier_suite(config)?.checks;
    checks.extend(combinatorics_checks()?);
    checks.extend(protocol_checks(config.seed)?);
    Ok(VerifyReport::new(config, checks))
}
