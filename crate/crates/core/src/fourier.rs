//! Fourier analysis on the Boolean cube `{0,1}^m`.
//!
//! Conventions:
//! - `f̂(s) = 2^{-m} Σ_y f(y) χ_s(y)` with `χ_s(y) = (-1)^{y·s}`, so that
//!   `f = Σ_s f̂(s) χ_s`;
//! - norms are unnormalized: `‖f‖₁ = Σ|f(y)|`, `‖f‖₂² = Σ f(y)²`;
//! - `(f∗g)(w) = Σ_y f(y ⊕ w) g(y)` with no normalization.
//!
//! Under these conventions Parseval reads `‖f‖₂² = 2^m Σ f̂(s)²` and the
//! convolution theorem reads `(f∗g)^(s) = 2^m f̂(s) ĝ(s)`.
//!
//! Tables are indexed by integers; position `i` of a [`BitString`] is bit
//! `i - 1` of the index.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::instances::density_mu;
use crate::matching::PerfectMatching;

pub const DEFAULT_DIMENSION_CAP: usize = 20;

/// Largest cube on which the lifting identity is checked exhaustively.
pub const LIFT_DIMENSION_CAP: usize = 12;

fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::Budget {
            what: "cube dimension",
            required: m as u128,
            limit: cap as u128,
        });
    }
    Ok(())
}

/// A real-valued function on `{0,1}^m`, stored as its full table.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFunction {
    m: usize,
    values: Vec<f64>,
}

impl CubeFunction {
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self> {
        if m >= usize::BITS as usize || values.len() != 1usize << m {
            return Err(Error::dimension(
                1usize.checked_shl(m as u32).unwrap_or(0),
                values.len(),
            ));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("value at index {bad} is not finite")));
        }
        Ok(Self { m, values })
    }

    pub fn from_fn(m: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new(m, (0..1usize << m).map(f).collect())
    }

    pub fn zero(m: usize) -> Self {
        Self {
            m,
            values: vec![0.0; 1 << m],
        }
    }

    /// The character `χ_t`.
    pub fn character(m: usize, t: usize) -> Self {
        Self {
            m,
            values: (0..1usize << m).map(|y| chi(t, y)).collect(),
        }
    }

    /// `value` at `t`, zero elsewhere.
    pub fn point_mass(m: usize, t: usize, value: f64) -> Self {
        let mut values = vec![0.0; 1 << m];
        values[t] = value;
        Self { m, values }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn eval(&self, y: &BitString) -> Result<f64> {
        if y.len() != self.m {
            return Err(Error::dimension(self.m, y.len()));
        }
        Ok(self.values[y.to_index()?])
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn l2_norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: self.m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::dimension(self.m, other.m));
        }
        Ok(())
    }
}

/// `χ_s(y) = (-1)^{popcount(s & y)}`.
pub fn chi(s: usize, y: usize) -> f64 {
    if (s & y).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    m: usize,
    coefficients: Vec<f64>,
}

impl FourierSpectrum {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn at(&self, s: usize) -> f64 {
        self.coefficients[s]
    }

    pub fn coefficient(&self, s: &BitString) -> Result<f64> {
        if s.len() != self.m {
            return Err(Error::dimension(self.m, s.len()));
        }
        Ok(self.coefficients[s.to_index()?])
    }

    /// `Σ_s f̂(s) χ_s`.
    pub fn inverse(&self) -> CubeFunction {
        let mut values = self.coefficients.clone();
        walsh_hadamard_in_place(&mut values);
        CubeFunction { m: self.m, values }
    }
}

/// Unnormalized butterfly: `v[s] <- Σ_y v[y] χ_s(y)`.
fn walsh_hadamard_in_place(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

pub fn transform(f: &CubeFunction) -> Result<FourierSpectrum> {
    transform_with_cap(f, DEFAULT_DIMENSION_CAP)
}

pub fn transform_with_cap(f: &CubeFunction, cap: usize) -> Result<FourierSpectrum> {
    check_cap(f.m, cap)?;
    let mut coefficients = f.values.clone();
    walsh_hadamard_in_place(&mut coefficients);
    let scale = (-(f.m as f64)).exp2();
    coefficients.iter_mut().for_each(|c| *c *= scale);
    Ok(FourierSpectrum {
        m: f.m,
        coefficients,
    })
}

/// `(f∗g)(w) = Σ_y f(y ⊕ w) g(y)`, by direct summation.
pub fn convolve(f: &CubeFunction, g: &CubeFunction) -> Result<CubeFunction> {
    f.check_same_dim(g)?;
    let size = f.values.len();
    let values = (0..size)
        .map(|w| (0..size).map(|y| f.values[y ^ w] * g.values[y]).sum())
        .collect();
    Ok(CubeFunction { m: f.m, values })
}

/// `f∗g` through the spectrum: transform, multiply pointwise by
/// `factor · f̂ ĝ`, invert. The convolution theorem holds with
/// `factor = 2^m`.
pub fn convolve_spectral_with_factor(
    f: &CubeFunction,
    g: &CubeFunction,
    factor: f64,
) -> Result<CubeFunction> {
    f.check_same_dim(g)?;
    let (fh, gh) = (transform(f)?, transform(g)?);
    let coefficients = fh
        .coefficients
        .iter()
        .zip(&gh.coefficients)
        .map(|(a, b)| factor * a * b)
        .collect();
    Ok(FourierSpectrum {
        m: f.m,
        coefficients,
    }
    .inverse())
}

pub fn convolve_spectral(f: &CubeFunction, g: &CubeFunction) -> Result<CubeFunction> {
    convolve_spectral_with_factor(f, g, (f.m as f64).exp2())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            gap: (lhs - rhs).abs(),
        }
    }

    /// Gap relative to the larger side, or the absolute gap when both sides
    /// are below one.
    pub fn relative_gap(&self) -> f64 {
        self.gap / self.lhs.abs().max(self.rhs.abs()).max(1.0)
    }
}

/// `‖f‖₂²` against `2^m Σ_s f̂(s)²`.
pub fn check_parseval(f: &CubeFunction) -> Result<IdentityCheck> {
    let spectrum = transform(f)?;
    let rhs = (f.m as f64).exp2() * spectrum.coefficients.iter().map(|c| c * c).sum::<f64>();
    Ok(IdentityCheck::new(f.l2_norm_squared(), rhs))
}

/// `‖f‖₂² ≥ ‖f‖₁² / 2^m`, up to `1e-12`.
pub fn check_l1_l2(f: &CubeFunction) -> bool {
    let l1 = f.l1_norm();
    f.l2_norm_squared() >= l1 * l1 / (f.m as f64).exp2() - 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KklCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// For `f` with values in `{-1, 0, 1}` and support fraction `t`, compares
/// `Σ_s δ^{|s|} f̂(s)²` with `t^{2/(1+δ)}`.
pub fn check_kkl(f: &CubeFunction, delta: f64) -> Result<KklCheck> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("δ = {delta} outside [0, 1]")));
    }
    if let Some(bad) = f
        .values
        .iter()
        .position(|&v| v != 0.0 && v != 1.0 && v != -1.0)
    {
        return Err(Error::Domain(format!(
            "value {} at index {bad} is not in {{-1, 0, 1}}",
            f.values[bad]
        )));
    }
    let spectrum = transform(f)?;
    // powi(0) is 1, which covers δ = 0 at s = 0.
    let lhs = spectrum
        .coefficients
        .iter()
        .enumerate()
        .map(|(s, c)| delta.powi(s.count_ones() as i32) * c * c)
        .sum::<f64>();
    let support = f.values.iter().filter(|&&v| v != 0.0).count() as f64;
    let t = support / (f.m as f64).exp2();
    let rhs = t.powf(2.0 / (1.0 + delta));
    Ok(KklCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// The difference of the two biased product densities, `μ_0 - μ_1`, on `{0,1}^n`.
pub fn bias_difference(n: usize) -> Result<CubeFunction> {
    check_cap(n, DEFAULT_DIMENSION_CAP)?;
    CubeFunction::from_fn(n, |i| {
        let y = BitString::from_index(i, n);
        density_mu(false, &y) - density_mu(true, &y)
    })
}

/// Closed-form spectrum of [`bias_difference`]: `2 / 2^{n+k}` when
/// `k = |s|` is odd, zero otherwise.
pub fn f_spectrum_closed_form(n: usize, s: &BitString) -> Result<f64> {
    if s.len() != n {
        return Err(Error::dimension(n, s.len()));
    }
    let k = s.weight();
    Ok(if k % 2 == 1 {
        2.0 * (-((n + k) as f64)).exp2()
    } else {
        0.0
    })
}

fn check_set(set: &BTreeSet<BitString>, len: usize) -> Result<()> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("the set A must be nonempty".into()));
    }
    if let Some(bad) = set.iter().find(|x| x.len() != len) {
        return Err(Error::dimension(len, bad.len()));
    }
    Ok(())
}

/// Counts `|{x ∈ A : Mx = y}|` for every `y ∈ {0,1}^n`.
pub fn gm_counts(set: &BTreeSet<BitString>, matching: &PerfectMatching) -> Result<Vec<u64>> {
    let n = matching.n();
    check_set(set, 2 * n)?;
    check_cap(n, DEFAULT_DIMENSION_CAP)?;
    let mut counts = vec![0u64; 1 << n];
    for x in set {
        counts[matching.apply(x)?.to_index()?] += 1;
    }
    Ok(counts)
}

/// `g_M(y) = |{x ∈ A : Mx = y}| / |A|`.
pub fn gm_from_set(set: &BTreeSet<BitString>, matching: &PerfectMatching) -> Result<CubeFunction> {
    let size = set.len() as f64;
    let counts = gm_counts(set, matching)?;
    CubeFunction::new(
        matching.n(),
        counts.into_iter().map(|c| c as f64 / size).collect(),
    )
}

/// The uniform density on `A ⊂ {0,1}^m`: `1/|A|` on `A`, zero elsewhere.
pub fn uniform_on_set(set: &BTreeSet<BitString>, m: usize) -> Result<CubeFunction> {
    check_set(set, m)?;
    check_cap(m, DEFAULT_DIMENSION_CAP)?;
    let mut values = vec![0.0; 1 << m];
    let mass = 1.0 / set.len() as f64;
    for x in set {
        values[x.to_index()?] = mass;
    }
    CubeFunction::new(m, values)
}

/// Largest `|ĝ(Mᵀs) - 2^{-n} ĝ_M(s)|` over all `s ∈ {0,1}^n`, where `g` is
/// the uniform density on `A`.
pub fn check_lift_identity(set: &BTreeSet<BitString>, matching: &PerfectMatching) -> Result<f64> {
    let n = matching.n();
    check_cap(2 * n, LIFT_DIMENSION_CAP)?;
    let g_hat = transform(&uniform_on_set(set, 2 * n)?)?;
    let gm_hat = transform(&gm_from_set(set, matching)?)?;
    let scale = (-(n as f64)).exp2();
    let mut worst = 0.0f64;
    for si in 0..1usize << n {
        let s = BitString::from_index(si, n);
        let lifted = matching.lift(&s)?;
        let gap = (g_hat.coefficient(&lifted)? - scale * gm_hat.at(si)).abs();
        worst = worst.max(gap);
    }
    Ok(worst)
}
