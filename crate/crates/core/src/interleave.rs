//! Interleaved sequences, the interleaved signal set, and the column-wise
//! correlation formula.
//!
//! An `(s, t)` interleaved sequence `u` of period `s * t` is read row-major
//! from an `s x t` array whose column `j` is `L^{e_j}(a)` (or all zero when
//! `e_j` is infinity). The signal set built from `a`, `b` and `e` is
//! `{u} ∪ {u + L^j(b) : 0 <= j < v}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlation::{autocorrelation, is_two_level, CorrValue, CorrelationProfile};
use crate::error::{check_range, Error, Result};
use crate::sequence::PeriodicSequence;

/// One entry of a shift sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shift {
    Finite(usize),
    /// Marks an all-zero column.
    Infinity,
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shift::Finite(k) => write!(f, "{k}"),
            Shift::Infinity => f.write_str("inf"),
        }
    }
}

/// A length-`v` vector over `Z_v`, possibly containing infinity entries.
///
/// The length-`2v` extension `e_{v+j} = e_j + 1 (mod v)` is never stored; see
/// [`ShiftSequence::extended_entry`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftSequence {
    entries: Vec<Shift>,
}

impl ShiftSequence {
    pub fn new(entries: Vec<Shift>) -> Result<Self> {
        let len = entries.len();
        if len == 0 {
            return Err(Error::EmptySequence);
        }
        for (index, entry) in entries.iter().enumerate() {
            if let Shift::Finite(value) = *entry {
                if value >= len {
                    return Err(Error::ShiftOutOfRange { index, value, len });
                }
            }
        }
        Ok(Self { entries })
    }

    /// A shift sequence with no infinity entries.
    pub fn finite(entries: Vec<usize>) -> Result<Self> {
        Self::new(entries.into_iter().map(Shift::Finite).collect())
    }

    pub(crate) fn from_finite_unchecked(entries: &[usize]) -> Self {
        Self {
            entries: entries.iter().map(|&k| Shift::Finite(k)).collect(),
        }
    }

    pub fn v(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Shift] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| matches!(e, Shift::Finite(_)))
    }

    /// The entries as plain residues; fails on the first infinity.
    pub fn finite_entries(&self) -> Result<Vec<usize>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(index, e)| match *e {
                Shift::Finite(k) => Ok(k),
                Shift::Infinity => Err(Error::InfiniteShift { index }),
            })
            .collect()
    }

    /// `e_k` for `k < v`, `(e_{k-v} + 1) mod v` for `v <= k < 2v`.
    pub fn extended_entry(&self, k: usize) -> Result<usize> {
        let v = self.v();
        check_range("k", k, 0, 2 * v)?;
        let base = if k < v { k } else { k - v };
        match self.entries[base] {
            Shift::Finite(x) if k < v => Ok(x),
            Shift::Finite(x) => Ok((x + 1) % v),
            Shift::Infinity => Err(Error::InfiniteShift { index: base }),
        }
    }

    /// Adds `c` to every finite entry, mod `v`.
    pub fn translate(&self, c: usize) -> Self {
        let v = self.v();
        Self {
            entries: self
                .entries
                .iter()
                .map(|e| match *e {
                    Shift::Finite(k) => Shift::Finite((k + c) % v),
                    Shift::Infinity => Shift::Infinity,
                })
                .collect(),
        }
    }
}

/// Extended entry on a raw finite slice.
#[inline]
pub(crate) fn ext(e: &[usize], k: usize) -> usize {
    let v = e.len();
    if k < v {
        e[k]
    } else {
        (e[k - v] + 1) % v
    }
}

impl fmt::Display for ShiftSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(Shift::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ShiftSequence {
    type Err = Error;

    /// Comma-separated residues, with `inf` for infinity: `"0,0,1,inf"`.
    fn from_str(text: &str) -> Result<Self> {
        let entries = text
            .trim()
            .split(',')
            .map(|tok| match tok.trim() {
                t if t.eq_ignore_ascii_case("inf") => Ok(Shift::Infinity),
                t => t
                    .parse()
                    .map(Shift::Finite)
                    .map_err(|_| Error::Parse(format!("invalid shift {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl Serialize for ShiftSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ShiftSequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Builds the interleaved sequence whose column `j` is `L^{e_j}(a)`.
///
/// The array has `period(a)` rows and `e.v()` columns; the result is its
/// row-major reading.
pub fn interleave(a: &PeriodicSequence, e: &ShiftSequence) -> PeriodicSequence {
    let rows = a.period();
    let cols = e.v();
    let mut values = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        values.extend(e.entries().iter().map(|shift| match *shift {
            Shift::Finite(k) => a.at(i + k),
            Shift::Infinity => 0,
        }));
    }
    PeriodicSequence::from_parts_unchecked(a.modulus(), values)
}

/// The `rows x cols` array whose entry `(i, j)` is `u_{i * cols + j}`.
pub fn matrix_form(u: &PeriodicSequence, rows: usize, cols: usize) -> Result<Vec<Vec<u32>>> {
    if rows * cols != u.period() {
        return Err(Error::PeriodMismatch {
            left: u.period(),
            right: rows * cols,
        });
    }
    Ok(u.values().chunks(cols).map(<[u32]>::to_vec).collect())
}

/// Inverse of [`interleave`]: recovers each column's shift of `a`.
pub fn recover_shifts(u: &PeriodicSequence, a: &PeriodicSequence, cols: usize) -> Result<ShiftSequence> {
    if u.modulus() != a.modulus() {
        return Err(Error::ModulusMismatch {
            left: u.modulus(),
            right: a.modulus(),
        });
    }
    let rows = a.period();
    let matrix = matrix_form(u, rows, cols)?;
    let entries = (0..cols)
        .map(|j| {
            let column: Vec<u32> = matrix.iter().map(|row| row[j]).collect();
            if column.iter().all(|&x| x == 0) {
                return Ok(Shift::Infinity);
            }
            let column = PeriodicSequence::from_parts_unchecked(a.modulus(), column);
            match a.shift_equivalence(&column)? {
                Some(k) if k < cols => Ok(Shift::Finite(k)),
                Some(k) => Err(Error::ShiftOutOfRange {
                    index: j,
                    value: k,
                    len: cols,
                }),
                None => Err(Error::NotInterleaved { column: j }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ShiftSequence::new(entries)
}

/// Warnings gathered while building a signal set. They never block
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDiagnostics {
    pub a_two_level: bool,
    pub b_two_level: bool,
}

/// The `v + 1` members of period `v^2`: member 0 is `u`, member `1 + j` is
/// `u + L^j(b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSet {
    pub v: usize,
    pub a: PeriodicSequence,
    pub b: PeriodicSequence,
    pub e: ShiftSequence,
    pub members: Vec<PeriodicSequence>,
    pub diagnostics: SetDiagnostics,
}

impl SignalSet {
    /// `u`.
    pub fn interleaved(&self) -> &PeriodicSequence {
        &self.members[0]
    }

    /// `S_h = u + L^h(b)`.
    pub fn offset_member(&self, h: usize) -> &PeriodicSequence {
        &self.members[1 + h]
    }

    /// All pairs `(i, j, k)` with `i < j` and `members[j] = L^k(members[i])`.
    pub fn shift_equivalent_pairs(&self) -> Vec<(usize, usize, usize)> {
        let canon: Vec<(Vec<u32>, usize)> = self.members.iter().map(min_rotation).collect();
        let mut pairs = Vec::new();
        for i in 0..canon.len() {
            for j in i + 1..canon.len() {
                if canon[i].0 == canon[j].0 {
                    let n = self.members[i].period();
                    // L^{ri}(m_i) = L^{rj}(m_j) => m_j = L^{ri - rj}(m_i)
                    let k = (canon[i].1 + n - canon[j].1) % n;
                    pairs.push((i, j, k));
                }
            }
        }
        pairs
    }

    pub fn is_pairwise_shift_distinct(&self) -> bool {
        self.shift_equivalent_pairs().is_empty()
    }
}

/// Lexicographically least rotation and the shift producing it.
fn min_rotation(s: &PeriodicSequence) -> (Vec<u32>, usize) {
    let v = s.period();
    let x = s.values();
    let best = (0..v)
        .min_by(|&p, &q| (0..v).map(|i| x[(p + i) % v]).cmp((0..v).map(|i| x[(q + i) % v])))
        .unwrap_or(0);
    (s.left_shift(best).values().to_vec(), best)
}

/// Builds `{u} ∪ {u + L^j(b)}` from base sequences of period `v` and a finite
/// shift sequence of length `v`. The 2-level property of `a` and `b` is
/// reported in the diagnostics, not enforced.
pub fn build_signal_set(a: &PeriodicSequence, b: &PeriodicSequence, e: &ShiftSequence) -> Result<SignalSet> {
    a.check_compatible(b)?;
    let v = a.period();
    if e.v() != v {
        return Err(Error::PeriodMismatch { left: v, right: e.v() });
    }
    e.finite_entries()?;
    let u = interleave(a, e);
    let mut members = Vec::with_capacity(v + 1);
    members.push(u.clone());
    for j in 0..v {
        members.push(u.add_pointwise(&b.left_shift(j))?);
    }
    Ok(SignalSet {
        v,
        a: a.clone(),
        b: b.clone(),
        e: e.clone(),
        members,
        diagnostics: SetDiagnostics {
            a_two_level: is_two_level(a),
            b_two_level: is_two_level(b),
        },
    })
}

/// `tau = r * v + s` with `0 <= s < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauDecomposition {
    pub tau: usize,
    pub r: usize,
    pub s: usize,
}

pub fn decompose_tau(tau: usize, v: usize) -> Result<TauDecomposition> {
    check_range("tau", tau, 0, v * v)?;
    Ok(TauDecomposition {
        tau,
        r: tau / v,
        s: tau % v,
    })
}

/// Per-column terms of the correlation formula for members `S_h`, `S_k`:
/// `t_j = e_{j+s} - e_j + r (mod v)` and `d_j = b_{h+j} - b_{k+s+j} (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaTerms {
    pub tau: TauDecomposition,
    pub t: Vec<usize>,
    pub d: Vec<u32>,
}

pub fn lemma_terms(b: &PeriodicSequence, e: &ShiftSequence, h: usize, k: usize, tau: usize) -> Result<LemmaTerms> {
    let v = e.v();
    if b.period() != v {
        return Err(Error::PeriodMismatch {
            left: b.period(),
            right: v,
        });
    }
    check_range("h", h, 0, v)?;
    check_range("k", k, 0, v)?;
    let dec = decompose_tau(tau, v)?;
    let e = e.finite_entries()?;
    let p = b.modulus();
    let t = (0..v).map(|j| (ext(&e, j + dec.s) + v - e[j] + dec.r) % v).collect();
    let d = (0..v).map(|j| (b.at(h + j) + p - b.at(k + dec.s + j)) % p).collect();
    Ok(LemmaTerms { tau: dec, t, d })
}

/// Correlation of `S_h` and `S_k` at `tau` from the autocorrelation of `a`:
/// `sum_j C_a(t_j) w^{d_j}`.
///
/// Exact integer when both the profile and `b` are binary. Pairs involving
/// `u` itself are not covered; correlate those members directly.
pub fn lemma_correlation(
    a_profile: &CorrelationProfile,
    b: &PeriodicSequence,
    e: &ShiftSequence,
    h: usize,
    k: usize,
    tau: usize,
) -> Result<CorrValue> {
    if a_profile.period != e.v() {
        return Err(Error::PeriodMismatch {
            left: a_profile.period,
            right: e.v(),
        });
    }
    let terms = lemma_terms(b, e, h, k, tau)?;
    let p = b.modulus();
    let pairs = terms.t.iter().zip(&terms.d);
    match a_profile.as_ints() {
        Some(ca) if p == 2 => Ok(CorrValue::Int(
            pairs.map(|(&t, &d)| if d == 0 { ca[t] } else { -ca[t] }).sum(),
        )),
        _ => Ok(CorrValue::Complex(
            pairs
                .map(|(&t, &d)| {
                    let w = Complex64::from_polar(1.0, std::f64::consts::TAU * f64::from(d) / f64::from(p));
                    a_profile.get(t).to_complex() * w
                })
                .sum(),
        )),
    }
}

/// Convenience wrapper computing the autocorrelation of `set.a` first.
pub fn lemma_correlation_for(set: &SignalSet, h: usize, k: usize, tau: usize) -> Result<CorrValue> {
    lemma_correlation(&autocorrelation(&set.a), &set.b, &set.e, h, k, tau)
}

/// Number of `j` with `t_j = 0 (mod v)` and the magnitude bound
/// `1 + (v + 1) * n0` it implies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub n0: usize,
    pub bound: usize,
}

pub fn zero_count(e: &ShiftSequence, s: usize, r: usize) -> Result<ZeroCount> {
    let v = e.v();
    check_range("s", s, 0, v)?;
    check_range("r", r, 0, v)?;
    let e = e.finite_entries()?;
    let n0 = (0..v)
        .filter(|&j| (ext(&e, j + s) + v - e[j] + r).is_multiple_of(v))
        .count();
    Ok(ZeroCount {
        n0,
        bound: 1 + (v + 1) * n0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_e() -> ShiftSequence {
        "0,0,1,0,6,3,5".parse().unwrap()
    }

    fn a() -> PeriodicSequence {
        "1001110".parse().unwrap()
    }

    fn b() -> PeriodicSequence {
        "1001011".parse().unwrap()
    }

    #[test]
    fn extended_entry_examples() {
        let e = example_e();
        assert_eq!(e.extended_entry(7), Ok(1));
        assert_eq!(e.extended_entry(13), Ok(6));
        assert_eq!(e.extended_entry(4), Ok(6));
        assert!(e.extended_entry(14).is_err());
        let zeros = ShiftSequence::finite(vec![0; 5]).unwrap();
        assert_eq!(zeros.extended_entry(5), Ok(1));
        let with_inf: ShiftSequence = "0,inf,1".parse().unwrap();
        assert_eq!(with_inf.extended_entry(4), Err(Error::InfiniteShift { index: 1 }));
    }

    #[test]
    fn shift_sequence_text() {
        let e: ShiftSequence = "0, 1,inf".parse().unwrap();
        assert_eq!(e.entries(), &[Shift::Finite(0), Shift::Finite(1), Shift::Infinity]);
        assert_eq!(e.to_string(), "0,1,inf");
        assert!("0,3,1".parse::<ShiftSequence>().is_err());
        assert!("0,x".parse::<ShiftSequence>().is_err());
        let json = serde_json::to_string(&example_e()).unwrap();
        assert_eq!(json, "\"0,0,1,0,6,3,5\"");
    }

    #[test]
    fn interleave_examples() {
        let u = interleave(&a(), &example_e());
        assert_eq!(u.period(), 49);
        assert_eq!(&u.values()[..7], &[1, 1, 0, 1, 0, 1, 1]);

        let zeros = ShiftSequence::finite(vec![0; 7]).unwrap();
        let u0 = interleave(&a(), &zeros);
        assert!(u0.values()[..7].iter().all(|&x| x == a().at(0)));
        let m = matrix_form(&u0, 7, 7).unwrap();
        assert!((0..7).all(|j| (0..7).all(|i| m[i][j] == a().at(i))));

        let infs: ShiftSequence = "inf,inf,inf,inf,inf,inf,inf".parse().unwrap();
        assert!(interleave(&a(), &infs).is_zero());
    }

    #[test]
    fn matrix_form_examples() {
        let u = interleave(&a(), &example_e());
        let m = matrix_form(&u, 7, 7).unwrap();
        for (j, shift) in [0, 0, 1, 0, 6, 3, 5].into_iter().enumerate() {
            let col: Vec<u32> = m.iter().map(|row| row[j]).collect();
            assert_eq!(col, a().left_shift(shift).values());
        }
        let six: PeriodicSequence = "011010".parse().unwrap();
        assert_eq!(matrix_form(&six, 2, 3).unwrap(), vec![vec![0, 1, 1], vec![0, 1, 0]]);
        assert!(matrix_form(&a(), 2, 3).is_err());
    }

    #[test]
    fn recover_shifts_examples() {
        let u = interleave(&a(), &example_e());
        assert_eq!(recover_shifts(&u, &a(), 7).unwrap(), example_e());

        let zero = PeriodicSequence::zeros(2, 49).unwrap();
        let all_inf = recover_shifts(&zero, &a(), 7).unwrap();
        assert!(all_inf.entries().iter().all(|s| *s == Shift::Infinity));

        let mut corrupted = u.values().to_vec();
        corrupted[3] ^= 1;
        let corrupted = PeriodicSequence::binary(corrupted).unwrap();
        assert_eq!(
            recover_shifts(&corrupted, &a(), 7),
            Err(Error::NotInterleaved { column: 3 })
        );
    }

    #[test]
    fn build_signal_set_shape() {
        let set = build_signal_set(&a(), &b(), &example_e()).unwrap();
        assert_eq!(set.members.len(), 8);
        assert!(set.members.iter().all(|m| m.period() == 49));
        assert!(set.diagnostics.a_two_level && set.diagnostics.b_two_level);
        assert!(set.is_pairwise_shift_distinct());

        let short: ShiftSequence = "0,0,1".parse().unwrap();
        assert!(build_signal_set(&a(), &b(), &short).is_err());
        let with_inf: ShiftSequence = "0,0,1,inf,6,3,5".parse().unwrap();
        assert_eq!(
            build_signal_set(&a(), &b(), &with_inf).unwrap_err(),
            Error::InfiniteShift { index: 3 }
        );
    }

    #[test]
    fn degenerate_inputs_are_flagged() {
        let bad: PeriodicSequence = "1111110".parse().unwrap();
        let set = build_signal_set(&bad, &b(), &example_e()).unwrap();
        assert!(!set.diagnostics.a_two_level);

        // b of minimal period 1 makes every u + L^j(b) coincide
        let ones: PeriodicSequence = "1111111".parse().unwrap();
        let set = build_signal_set(&a(), &ones, &example_e()).unwrap();
        let pairs = set.shift_equivalent_pairs();
        assert!(pairs.contains(&(1, 2, 0)));
        assert!(!set.is_pairwise_shift_distinct());
    }

    #[test]
    fn shift_equivalent_pairs_reports_offset() {
        let mut set = build_signal_set(&a(), &b(), &example_e()).unwrap();
        set.members[3] = set.members[1].left_shift(10);
        let pairs = set.shift_equivalent_pairs();
        assert_eq!(pairs, vec![(1, 3, 10)]);
    }

    #[test]
    fn decompose_tau_examples() {
        assert_eq!(decompose_tau(8, 7).unwrap(), TauDecomposition { tau: 8, r: 1, s: 1 });
        assert_eq!(decompose_tau(0, 7).unwrap(), TauDecomposition { tau: 0, r: 0, s: 0 });
        assert_eq!(decompose_tau(48, 7).unwrap(), TauDecomposition { tau: 48, r: 6, s: 6 });
        assert!(decompose_tau(49, 7).is_err());
    }

    #[test]
    fn lemma_examples() {
        let set = build_signal_set(&a(), &b(), &example_e()).unwrap();
        assert_eq!(lemma_correlation_for(&set, 0, 1, 0), Ok(CorrValue::Int(-7)));
        assert_eq!(lemma_correlation_for(&set, 0, 1, 7), Ok(CorrValue::Int(1)));
        // frozen from a direct 49-term summation
        assert_eq!(lemma_correlation_for(&set, 0, 1, 8), Ok(CorrValue::Int(17)));
        assert!(lemma_correlation_for(&set, 7, 1, 8).is_err());
        assert!(lemma_correlation_for(&set, 0, 1, 49).is_err());
    }

    #[test]
    fn lemma_terms_use_extension() {
        let terms = lemma_terms(&b(), &example_e(), 0, 0, 1).unwrap();
        assert_eq!(terms.t, vec![0, 1, 6, 6, 4, 2, 3]);
    }

    #[test]
    fn zero_count_examples() {
        let e = example_e();
        assert_eq!(zero_count(&e, 1, 0).unwrap(), ZeroCount { n0: 1, bound: 9 });
        let linear = ShiftSequence::finite((0..7).collect()).unwrap();
        for s in 1..7 {
            assert_eq!(zero_count(&linear, s, 7 - s).unwrap().n0, 7 - s, "s = {s}");
        }
        for r in 1..7 {
            assert_eq!(zero_count(&e, 0, r).unwrap().n0, 0);
        }
        assert!(zero_count(&e, 7, 0).is_err());
    }
}
