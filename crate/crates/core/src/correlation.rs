//! Periodic cross- and autocorrelation, the 2-level test, and the maximum
//! correlation `delta` of a signal set.
//!
//! For `p = 2` every value is an exact integer (agreements minus
//! disagreements). For `p > 2` values are complex sums of `p`-th roots of
//! unity, compared with [`COMPLEX_TOLERANCE`].

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::PeriodicSequence;

/// Absolute tolerance used for every complex-valued comparison.
pub const COMPLEX_TOLERANCE: f64 = 1e-9;

/// Tolerance of the FFT path against the naive path for `p > 2`.
pub const FFT_TOLERANCE: f64 = 1e-6;

/// Which algorithm computes a correlation profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    /// Direct summation over the period, `O(v^2)`.
    #[default]
    Naive,
    /// Word-parallel popcount for `p = 2`, FFT for `p > 2`.
    Fast,
}

/// A single correlation value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorrValue {
    Int(i64),
    Complex(Complex64),
}

impl CorrValue {
    pub fn magnitude(&self) -> f64 {
        match self {
            CorrValue::Int(x) => x.unsigned_abs() as f64,
            CorrValue::Complex(z) => z.norm(),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            CorrValue::Int(x) => Some(*x),
            CorrValue::Complex(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            CorrValue::Int(x) => Complex64::new(*x as f64, 0.0),
            CorrValue::Complex(z) => *z,
        }
    }

    /// Exact for integers, within [`COMPLEX_TOLERANCE`] otherwise.
    pub fn approx_eq(&self, other: &CorrValue) -> bool {
        match (self, other) {
            (CorrValue::Int(x), CorrValue::Int(y)) => x == y,
            _ => (self.to_complex() - other.to_complex()).norm() <= COMPLEX_TOLERANCE,
        }
    }
}

impl fmt::Display for CorrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrValue::Int(x) => write!(f, "{x}"),
            CorrValue::Complex(z) => write!(f, "{:.6}{:+.6}i", z.re, z.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileValues {
    Int(Vec<i64>),
    Complex(Vec<Complex64>),
}

/// Correlation values for every phase shift `tau` in `[0, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    pub period: usize,
    pub values: ProfileValues,
}

impl CorrelationProfile {
    pub fn get(&self, tau: usize) -> CorrValue {
        let tau = tau % self.period;
        match &self.values {
            ProfileValues::Int(v) => CorrValue::Int(v[tau]),
            ProfileValues::Complex(v) => CorrValue::Complex(v[tau]),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = CorrValue> + '_ {
        (0..self.period).map(move |tau| self.get(tau))
    }

    pub fn as_ints(&self) -> Option<&[i64]> {
        match &self.values {
            ProfileValues::Int(v) => Some(v),
            ProfileValues::Complex(_) => None,
        }
    }

    /// Elementwise equality: exact for integer profiles, within `tol` for complex.
    pub fn matches(&self, other: &CorrelationProfile, tol: f64) -> bool {
        self.period == other.period
            && match (&self.values, &other.values) {
                (ProfileValues::Int(x), ProfileValues::Int(y)) => x == y,
                _ => self
                    .iter()
                    .zip(other.iter())
                    .all(|(x, y)| (x.to_complex() - y.to_complex()).norm() <= tol),
            }
    }
}

fn roots_of_unity(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, TAU * f64::from(k) / f64::from(p)))
        .collect()
}

/// `C_{a,b}(tau) = sum_i w^(a_i - b_{i+tau})` by direct summation.
pub fn cross_correlation(a: &PeriodicSequence, b: &PeriodicSequence) -> Result<CorrelationProfile> {
    a.check_compatible(b)?;
    let v = a.period();
    let (x, y) = (a.values(), b.values());
    let values = if a.modulus() == 2 {
        ProfileValues::Int(
            (0..v)
                .map(|tau| {
                    let agree = (0..v).filter(|&i| x[i] == y[(i + tau) % v]).count() as i64;
                    2 * agree - v as i64
                })
                .collect(),
        )
    } else {
        let p = a.modulus();
        let roots = roots_of_unity(p);
        ProfileValues::Complex(
            (0..v)
                .map(|tau| {
                    (0..v)
                        .map(|i| roots[((x[i] + p - y[(i + tau) % v]) % p) as usize])
                        .sum()
                })
                .collect(),
        )
    };
    Ok(CorrelationProfile { period: v, values })
}

pub fn autocorrelation(a: &PeriodicSequence) -> CorrelationProfile {
    cross_correlation(a, a).expect("a sequence is compatible with itself")
}

/// Transform or word-parallel correlation; agrees with [`cross_correlation`]
/// exactly for `p = 2` and within [`FFT_TOLERANCE`] otherwise.
pub fn fast_cross_correlation(a: &PeriodicSequence, b: &PeriodicSequence) -> Result<CorrelationProfile> {
    a.check_compatible(b)?;
    if a.modulus() == 2 {
        Ok(bitwise_correlation(a.values(), b.values()))
    } else {
        Ok(fft_correlation(a, b))
    }
}

/// Dispatches on `method`.
pub fn correlate(a: &PeriodicSequence, b: &PeriodicSequence, method: CorrelationMethod) -> Result<CorrelationProfile> {
    match method {
        CorrelationMethod::Naive => cross_correlation(a, b),
        CorrelationMethod::Fast => fast_cross_correlation(a, b),
    }
}

fn pack_bits(bits: impl Iterator<Item = u32>, len: usize, pad_words: usize) -> Vec<u64> {
    let mut words = vec![0u64; len.div_ceil(64) + pad_words];
    for (i, bit) in bits.enumerate() {
        if bit != 0 {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

#[inline]
fn word_at(words: &[u64], bit: usize) -> u64 {
    let (idx, off) = (bit / 64, bit % 64);
    if off == 0 {
        words[idx]
    } else {
        (words[idx] >> off) | (words[idx + 1] << (64 - off))
    }
}

fn bitwise_correlation(x: &[u32], y: &[u32]) -> CorrelationProfile {
    let v = x.len();
    let a = pack_bits(x.iter().copied(), v, 0);
    // b repeated twice so every cyclic window is contiguous
    let b = pack_bits(y.iter().chain(y).copied(), 2 * v, 1);
    let full = v / 64;
    let tail = v % 64;
    let tail_mask = if tail == 0 { 0 } else { (1u64 << tail) - 1 };
    let values = (0..v)
        .map(|tau| {
            let mut disagree: u32 = (0..full).map(|k| (a[k] ^ word_at(&b, tau + 64 * k)).count_ones()).sum();
            if tail != 0 {
                disagree += ((a[full] ^ word_at(&b, tau + 64 * full)) & tail_mask).count_ones();
            }
            v as i64 - 2 * i64::from(disagree)
        })
        .collect();
    CorrelationProfile {
        period: v,
        values: ProfileValues::Int(values),
    }
}

fn fft_correlation(a: &PeriodicSequence, b: &PeriodicSequence) -> CorrelationProfile {
    let v = a.period();
    let roots = roots_of_unity(a.modulus());
    let mut x: Vec<Complex64> = a.values().iter().map(|&k| roots[k as usize]).collect();
    let mut y: Vec<Complex64> = b.values().iter().map(|&k| roots[k as usize]).collect();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(v);
    forward.process(&mut x);
    forward.process(&mut y);
    // R(tau) = sum_i conj(x_i) y_{i+tau} has spectrum conj(X) Y; C = conj(R).
    let mut spectrum: Vec<Complex64> = x.iter().zip(&y).map(|(p, q)| p.conj() * q).collect();
    planner.plan_fft_inverse(v).process(&mut spectrum);
    let scale = 1.0 / v as f64;
    CorrelationProfile {
        period: v,
        values: ProfileValues::Complex(spectrum.iter().map(|r| r.conj() * scale).collect()),
    }
}

/// True iff `C(0) = v` and `C(tau) = -1` for every `tau` in `[1, v)`.
pub fn is_two_level(a: &PeriodicSequence) -> bool {
    profile_is_two_level(&autocorrelation(a))
}

pub fn profile_is_two_level(profile: &CorrelationProfile) -> bool {
    let v = profile.period as i64;
    profile.iter().enumerate().all(|(tau, c)| {
        let want = CorrValue::Int(if tau == 0 { v } else { -1 });
        c.approx_eq(&want)
    })
}

/// Maximum correlation magnitude; exact for binary sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Delta {
    Exact(i64),
    Approx(f64),
}

impl Delta {
    pub fn as_f64(&self) -> f64 {
        match self {
            Delta::Exact(x) => *x as f64,
            Delta::Approx(x) => *x,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Delta::Exact(x) => Some(*x),
            Delta::Approx(_) => None,
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Exact(x) => write!(f, "{x}"),
            Delta::Approx(x) => write!(f, "{x:.6}"),
        }
    }
}

/// A pair `(i, j)` and shift `tau` attaining the maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub tau: usize,
    pub value: CorrValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: Delta,
    /// All maximizers, ordered by `(i, j, tau)`.
    pub witnesses: Vec<Witness>,
    /// Period of each member.
    pub period: usize,
    /// Number of members.
    pub members: usize,
}

/// Maximum of `|C_{s_i,s_j}(tau)|` over all ordered pairs and all shifts,
/// excluding the in-phase autocorrelation `i = j, tau = 0`.
///
/// Pairs are evaluated in parallel; the witness list is always sorted by
/// `(i, j, tau)`.
pub fn signal_set_delta(set: &[PeriodicSequence], method: CorrelationMethod) -> Result<DeltaReport> {
    let first = set.first().ok_or(Error::EmptySet)?;
    for s in &set[1..] {
        first.check_compatible(s)?;
    }
    let n = set.len();
    let profiles: Vec<CorrelationProfile> = (0..n * n)
        .into_par_iter()
        .map(|ij| correlate(&set[ij / n], &set[ij % n], method))
        .collect::<Result<_>>()?;

    let candidates = || {
        profiles.iter().enumerate().flat_map(move |(ij, prof)| {
            let (i, j) = (ij / n, ij % n);
            prof.iter()
                .enumerate()
                .filter(move |&(tau, _)| i != j || tau != 0)
                .map(move |(tau, value)| Witness { i, j, tau, value })
        })
    };

    if first.modulus() == 2 {
        let delta = candidates()
            .filter_map(|w| w.value.as_int())
            .map(i64::abs)
            .max()
            .unwrap_or(0);
        let witnesses = candidates()
            .filter(|w| w.value.as_int().map(i64::abs) == Some(delta))
            .collect();
        Ok(DeltaReport {
            delta: Delta::Exact(delta),
            witnesses,
            period: first.period(),
            members: n,
        })
    } else {
        let delta = candidates().map(|w| w.value.magnitude()).fold(0.0, f64::max);
        let witnesses = candidates()
            .filter(|w| (w.value.magnitude() - delta).abs() <= COMPLEX_TOLERANCE)
            .collect();
        Ok(DeltaReport {
            delta: Delta::Approx(delta),
            witnesses,
            period: first.period(),
            members: n,
        })
    }
}
