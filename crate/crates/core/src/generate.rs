//! Generators for binary sequences with 2-level autocorrelation: m-sequences
//! (period `2^n - 1`) and Legendre sequences (prime period).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{is_prime, PeriodicSequence};

/// Largest supported LFSR degree.
pub const MAX_LFSR_DEGREE: usize = 32;

/// A binary LFSR described by its characteristic polynomial and initial state.
///
/// `poly` holds the `n + 1` coefficients highest degree first, so `[1,0,1,1]`
/// is `x^3 + x + 1`. `state` holds the first `n` output bits `s_0 .. s_{n-1}`.
/// For `f(x) = x^n + c_{n-1} x^{n-1} + ... + c_0` the output obeys
/// `s_{k+n} = c_{n-1} s_{k+n-1} + ... + c_0 s_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfsrSpec {
    degree: usize,
    poly: Vec<u8>,
    state: Vec<u8>,
}

fn parse_bits(text: &str, what: &str) -> Result<Vec<u8>> {
    text.trim()
        .chars()
        .filter(|c| *c != ',' && !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("invalid bit {c:?} in {what}"))),
        })
        .collect()
}

impl LfsrSpec {
    pub fn new(degree: usize, poly: Vec<u8>, state: Vec<u8>) -> Result<Self> {
        if degree == 0 || degree > MAX_LFSR_DEGREE {
            return Err(Error::InvalidLfsr(format!(
                "degree {degree} outside 1..={MAX_LFSR_DEGREE}"
            )));
        }
        if poly.len() != degree + 1 {
            return Err(Error::InvalidLfsr(format!(
                "polynomial needs {} coefficients, got {}",
                degree + 1,
                poly.len()
            )));
        }
        if state.len() != degree {
            return Err(Error::InvalidLfsr(format!(
                "state needs {degree} bits, got {}",
                state.len()
            )));
        }
        if poly.iter().chain(&state).any(|&b| b > 1) {
            return Err(Error::InvalidLfsr("coefficients and state must be bits".into()));
        }
        if poly[0] != 1 || poly[degree] != 1 {
            return Err(Error::InvalidLfsr("leading and constant coefficients must be 1".into()));
        }
        if state.iter().all(|&b| b == 0) {
            return Err(Error::ZeroState);
        }
        Ok(Self { degree, poly, state })
    }

    /// Parses bit strings such as `"1011"` and `"100"`.
    pub fn parse(degree: usize, poly: &str, state: &str) -> Result<Self> {
        Self::new(degree, parse_bits(poly, "polynomial")?, parse_bits(state, "state")?)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly(&self) -> &[u8] {
        &self.poly
    }

    pub fn state(&self) -> &[u8] {
        &self.state
    }
}

/// Runs the LFSR for one full period of `2^n - 1`.
///
/// Primitivity is checked by measuring the cycle length of the state; a
/// shorter cycle yields [`Error::NotPrimitive`].
pub fn gen_mseq(spec: &LfsrSpec) -> Result<PeriodicSequence> {
    let n = spec.degree;
    let expected = (1usize << n) - 1;
    // bit i of the register holds s_{k+i}; tap mask bit i holds c_i.
    let taps: u64 = (0..n).filter(|&i| spec.poly[n - i] == 1).fold(0, |m, i| m | (1 << i));
    let start: u64 = (0..n).filter(|&i| spec.state[i] == 1).fold(0, |m, i| m | (1 << i));

    let mut reg = start;
    let mut out = Vec::with_capacity(expected);
    loop {
        out.push((reg & 1) as u32);
        let feedback = u64::from((reg & taps).count_ones() & 1);
        reg = (reg >> 1) | (feedback << (n - 1));
        if reg == start || out.len() > expected {
            break;
        }
    }
    if out.len() != expected {
        return Err(Error::NotPrimitive {
            achieved: out.len(),
            expected,
        });
    }
    Ok(PeriodicSequence::from_parts_unchecked(2, out))
}

/// Quadratic-residue indicator of prime period `v`: index `i > 0` maps to 1
/// exactly when `i` is a nonzero square mod `v`; index 0 takes `zero_value`.
pub fn gen_legendre(v: usize, zero_value: u32) -> Result<PeriodicSequence> {
    if v < 3 || !is_prime(v as u64) {
        return Err(Error::NotPrime(v.try_into().unwrap_or(u32::MAX)));
    }
    if zero_value > 1 {
        return Err(Error::ResidueOutOfRange {
            index: 0,
            value: zero_value,
            modulus: 2,
        });
    }
    let mut values = vec![0u32; v];
    for x in 1..v {
        values[x * x % v] = 1;
    }
    values[0] = zero_value;
    Ok(PeriodicSequence::from_parts_unchecked(2, values))
}
