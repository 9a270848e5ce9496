//! Instance generation: the biased product distributions, the noisy
//! agreement/disagreement distributions on `w`, the hard distribution over
//! full instances, and promise classification.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{hamming_distance, BitString};
use crate::error::{Error, Result};
use crate::matching::PerfectMatching;
use crate::stats::binomial_range;

/// Probability that a biased bit equals its label, as `(numerator, denominator)`.
pub const BIAS: (u32, u32) = (3, 4);

pub fn bias() -> f64 {
    f64::from(BIAS.0) / f64::from(BIAS.1)
}

/// A Boolean Hidden Matching instance: Alice holds `x`, Bob holds `(M, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRecord", into = "InstanceRecord")]
pub struct BhmInstance {
    x: BitString,
    matching: PerfectMatching,
    w: BitString,
    source: Option<bool>,
}

impl BhmInstance {
    pub fn new(
        x: BitString,
        matching: PerfectMatching,
        w: BitString,
        source: Option<bool>,
    ) -> Result<Self> {
        let n = matching.n();
        if x.len() != 2 * n {
            return Err(Error::dimension(2 * n, x.len()));
        }
        if w.len() != n {
            return Err(Error::dimension(n, w.len()));
        }
        Ok(Self {
            x,
            matching,
            w,
            source,
        })
    }

    pub fn n(&self) -> usize {
        self.matching.n()
    }

    pub fn x(&self) -> &BitString {
        &self.x
    }

    pub fn matching(&self) -> &PerfectMatching {
        &self.matching
    }

    pub fn w(&self) -> &BitString {
        &self.w
    }

    /// Which of the two `w` distributions produced this instance, when known.
    pub fn source(&self) -> Option<bool> {
        self.source
    }

    /// `Mx`.
    pub fn parities(&self) -> BitString {
        self.matching
            .apply(&self.x)
            .expect("shape checked at construction")
    }

    /// `h(Mx, w)`.
    pub fn distance(&self) -> usize {
        hamming_distance(&self.parities(), &self.w).expect("shape checked at construction")
    }

    pub fn promise_class(&self) -> PromiseClass {
        PromiseClass::classify(self.n(), self.distance())
    }
}

/// Flat JSON form: `{n, x, matching, w, source?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub x: BitString,
    pub matching: PerfectMatching,
    pub w: BitString,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<u8>,
}

impl From<BhmInstance> for InstanceRecord {
    fn from(inst: BhmInstance) -> Self {
        Self {
            n: inst.n(),
            source: inst.source.map(u8::from),
            x: inst.x,
            matching: inst.matching,
            w: inst.w,
        }
    }
}

impl TryFrom<InstanceRecord> for BhmInstance {
    type Error = Error;

    fn try_from(rec: InstanceRecord) -> Result<Self> {
        if rec.n != rec.matching.n() {
            return Err(Error::dimension(rec.n, rec.matching.n()));
        }
        let source = match rec.source {
            None => None,
            Some(0) => Some(false),
            Some(1) => Some(true),
            Some(other) => {
                return Err(Error::Parse(format!(
                    "source label must be 0 or 1, got {other}"
                )))
            }
        };
        Self::new(rec.x, rec.matching, rec.w, source)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PromiseClass {
    Zero,
    One,
    Outside,
}

impl PromiseClass {
    /// `Zero` iff `3d <= n`, `One` iff `3d >= 2n`.
    pub fn classify(n: usize, distance: usize) -> Self {
        if 3 * distance <= n {
            PromiseClass::Zero
        } else if 3 * distance >= 2 * n {
            PromiseClass::One
        } else {
            PromiseClass::Outside
        }
    }

    /// The answer bit for promise instances.
    pub fn answer(self) -> Option<bool> {
        match self {
            PromiseClass::Zero => Some(false),
            PromiseClass::One => Some(true),
            PromiseClass::Outside => None,
        }
    }
}

pub fn classify_promise(inst: &BhmInstance) -> PromiseClass {
    inst.promise_class()
}

pub fn sample_matching<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PerfectMatching {
    PerfectMatching::random(n, rng)
}

fn biased_bit<R: Rng + ?Sized>(b: bool, rng: &mut R) -> bool {
    if rng.random_range(0..BIAS.1) < BIAS.0 {
        b
    } else {
        !b
    }
}

/// A draw from `μ_b`: `n` independent bits, each equal to `b` with
/// probability 3/4.
pub fn sample_biased<R: Rng + ?Sized>(b: bool, n: usize, rng: &mut R) -> BitString {
    assert!(n >= 1);
    BitString::new((0..n).map(|_| biased_bit(b, rng)).collect()).expect("n >= 1")
}

/// `μ_b(y)` in floating point.
pub fn density_mu(b: bool, y: &BitString) -> f64 {
    let agree = y.bits().iter().filter(|&&bit| bit == b).count() as i32;
    let p = bias();
    p.powi(agree) * (1.0 - p).powi(y.len() as i32 - agree)
}

/// `μ_b(y)` as an exact rational.
pub fn density_mu_exact(b: bool, y: &BitString) -> BigRational {
    let agree = y.bits().iter().filter(|&&bit| bit == b).count();
    let num = BigInt::from(BIAS.0).pow(agree as u32)
        * BigInt::from(BIAS.1 - BIAS.0).pow((y.len() - agree) as u32);
    let den = BigInt::from(BIAS.1).pow(y.len() as u32);
    BigRational::new(num, den)
}

/// A draw from `D_b`: `w = Mx ⊕ e` with `e ~ μ_b`.
pub fn sample_w<R: Rng + ?Sized>(
    x: &BitString,
    matching: &PerfectMatching,
    b: bool,
    rng: &mut R,
) -> Result<BitString> {
    let parities = matching.apply(x)?;
    let noise = sample_biased(b, matching.n(), rng);
    parities.xor(&noise)
}

/// A draw from the hard distribution: uniform `x` and `M`, a fair source
/// coin `b`, then `w ~ D_b`.
pub fn sample_t<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BhmInstance {
    assert!(n >= 1);
    let x = BitString::random(2 * n, rng);
    let matching = sample_matching(n, rng);
    let b = rng.random::<bool>();
    let w = sample_w(&x, &matching, b, rng).expect("shapes agree by construction");
    BhmInstance {
        x,
        matching,
        w,
        source: Some(b),
    }
}

/// Exact probability that an instance drawn from the hard distribution
/// violates the promise. Under source `b = 0` the distance is
/// `Binomial(n, 1/4)`; under `b = 1` it is `Binomial(n, 3/4)`.
pub fn outside_probability(n: usize) -> f64 {
    let lo = n / 3 + 1;
    let hi = (2 * n).div_ceil(3) - 1;
    if lo > hi {
        return 0.0;
    }
    let p = 1.0 - bias();
    let (lo, hi, n) = (lo as u64, hi as u64, n as u64);
    0.5 * binomial_range(n, p, lo, hi) + 0.5 * binomial_range(n, 1.0 - p, lo, hi)
}
