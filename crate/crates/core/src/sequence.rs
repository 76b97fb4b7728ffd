//! Periodic p-ary sequences.
//!
//! A [`PeriodicSequence`] stores one period of residues modulo a prime `p`.
//! Indexing is cyclic, and the stored length is the declared period; it is
//! not reduced to the minimal period.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One period of a sequence over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSequence", into = "RawSequence")]
pub struct PeriodicSequence {
    modulus: u32,
    values: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawSequence {
    modulus: u32,
    values: Vec<u32>,
}

impl TryFrom<RawSequence> for PeriodicSequence {
    type Error = Error;

    fn try_from(raw: RawSequence) -> Result<Self> {
        PeriodicSequence::new(raw.modulus, raw.values)
    }
}

impl From<PeriodicSequence> for RawSequence {
    fn from(seq: PeriodicSequence) -> Self {
        RawSequence {
            modulus: seq.modulus,
            values: seq.values,
        }
    }
}

impl PeriodicSequence {
    /// Builds a sequence, validating that `modulus` is prime and every value
    /// is a residue below it.
    pub fn new(modulus: u32, values: Vec<u32>) -> Result<Self> {
        if !is_prime(u64::from(modulus)) {
            return Err(Error::NotPrime(modulus));
        }
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &x)| x >= modulus) {
            return Err(Error::ResidueOutOfRange { index, value, modulus });
        }
        Ok(Self { modulus, values })
    }

    /// Binary sequence from 0/1 values.
    pub fn binary(values: Vec<u32>) -> Result<Self> {
        Self::new(2, values)
    }

    /// Parses either the compact digit form (`"1001110"`, only for `p <= 9`)
    /// or the comma-separated form (`"1,0,0,1,1,1,0"`).
    pub fn parse(text: &str, modulus: u32) -> Result<Self> {
        let text = text.trim();
        let values = if text.contains(',') {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("invalid residue {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            if modulus > 9 && text.len() > 1 {
                return Err(Error::Parse(format!(
                    "compact digit form is ambiguous for modulus {modulus}; use commas"
                )));
            }
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::Parse(format!("invalid digit {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(modulus, values)
    }

    /// The all-zero sequence of the given period.
    pub fn zeros(modulus: u32, period: usize) -> Result<Self> {
        Self::new(modulus, vec![0; period])
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Cyclic indexing.
    pub fn at(&self, index: usize) -> u32 {
        self.values[index % self.values.len()]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.values.iter().filter(|&&x| x != 0).count()
    }

    /// `L^i`: the value at index `j` of the result is the value at `j + i`.
    pub fn left_shift(&self, i: usize) -> Self {
        let v = self.period();
        let i = i % v;
        let mut values = Vec::with_capacity(v);
        values.extend_from_slice(&self.values[i..]);
        values.extend_from_slice(&self.values[..i]);
        Self {
            modulus: self.modulus,
            values,
        }
    }

    /// Smallest `k` in `[0, v)` with `other = L^k(self)`, or `None` if the two
    /// sequences are shift distinct.
    pub fn shift_equivalence(&self, other: &Self) -> Result<Option<usize>> {
        self.check_compatible(other)?;
        let v = self.period();
        Ok((0..v).find(|&k| (0..v).all(|i| other.values[i] == self.values[(i + k) % v])))
    }

    /// The smallest divisor `d` of the period with `L^d(self) = self`.
    pub fn minimal_period(&self) -> usize {
        let v = self.period();
        (1..=v)
            .filter(|d| v.is_multiple_of(*d))
            .find(|&d| (0..v).all(|i| self.values[i] == self.values[(i + d) % v]))
            .unwrap_or(v)
    }

    /// Elementwise sum mod `p`. The result has the lcm of the two periods and
    /// reads each operand cyclically.
    pub fn add_pointwise(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        let (x, y) = (self.period(), other.period());
        let period = x / gcd(x, y) * y;
        let values = (0..period).map(|i| (self.at(i) + other.at(i)) % self.modulus).collect();
        Ok(Self {
            modulus: self.modulus,
            values,
        })
    }

    /// Reads the sequence cyclically out to `period` entries.
    pub fn extend_to(&self, period: usize) -> Self {
        Self {
            modulus: self.modulus,
            values: (0..period).map(|i| self.at(i)).collect(),
        }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        if self.period() != other.period() {
            return Err(Error::PeriodMismatch {
                left: self.period(),
                right: other.period(),
            });
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(modulus: u32, values: Vec<u32>) -> Self {
        debug_assert!(values.iter().all(|&x| x < modulus));
        Self { modulus, values }
    }
}

impl fmt::Display for PeriodicSequence {
    /// Compact digits for `p <= 9`, comma-separated otherwise. The alternate
    /// flag (`{:#}`) forces the comma form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus <= 9 && !f.alternate() {
            for x in &self.values {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for PeriodicSequence {
    type Err = Error;

    /// Parses a binary sequence; use [`PeriodicSequence::parse`] for other moduli.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 2)
    }
}
