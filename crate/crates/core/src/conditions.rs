//! Shift-sequence conditions.
//!
//! * Condition A: for each `1 <= s < v` the `v - s` differences
//!   `e_j - e_{j+s}`, `0 <= j < v - s`, are pairwise distinct mod `v`.
//! * Condition B: for each `1 <= s < v` no residue occurs more than twice in
//!   the `v` differences `e_j - e_{j+s}` taken over the extended sequence.
//! * Open condition: for each `1 <= s < v` those `v` differences form a
//!   complete residue system mod `v`.
//!
//! All differences are canonical residues in `[0, v)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::interleave::{ext, ShiftSequence};

/// Condition B allows each difference at most this many times.
pub const MAX_B_MULTIPLICITY: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    A,
    B,
    #[serde(rename = "OPEN")]
    Open,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "A",
            Condition::B => "B",
            Condition::Open => "OPEN",
        })
    }
}

impl std::str::FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Condition::A),
            "b" => Ok(Condition::B),
            "open" => Ok(Condition::Open),
            _ => Err(Error::Parse(format!("unknown condition {s:?}"))),
        }
    }
}

/// Which differences a [`DifferenceProfile`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DifferenceMode {
    /// `e_j - e_{j+s}` for `0 <= j < v - s`.
    ARange,
    /// `e_j - e_{j+s}` for `0 <= j < v` on the extended sequence.
    BExtended,
    /// The open-condition differences; form 1 or form 2.
    Open(OpenForm),
}

/// The two equivalent index layouts of the open-condition differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpenForm {
    /// `{e_j - e_{j+s} : j < v-s} ∪ {e_{v-s+j} - e_j - 1 : j < s}`
    One,
    /// `{e_k - e_{k+s} : k < v-s} ∪ {e_k - e_{k+s-v} - 1 : v-s <= k < v}`
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceProfile {
    pub v: usize,
    pub s: usize,
    pub mode: DifferenceMode,
    /// Differences in index order.
    pub values: Vec<usize>,
    pub multiplicities: BTreeMap<usize, usize>,
}

impl DifferenceProfile {
    fn new(v: usize, s: usize, mode: DifferenceMode, values: Vec<usize>) -> Self {
        let mut multiplicities = BTreeMap::new();
        for &x in &values {
            *multiplicities.entry(x).or_insert(0) += 1;
        }
        Self {
            v,
            s,
            mode,
            values,
            multiplicities,
        }
    }

    pub fn distinct_count(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.multiplicities.values().copied().max().unwrap_or(0)
    }

    /// The multiset as sorted values.
    pub fn sorted(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .flat_map(|(&x, &n)| std::iter::repeat_n(x, n))
            .collect()
    }
}

fn prepare(e: &ShiftSequence, s: usize) -> Result<Vec<usize>> {
    let e = e.finite_entries()?;
    check_range("s", s, 1, e.len().max(1))?;
    Ok(e)
}

#[inline]
fn diff(x: usize, y: usize, v: usize) -> usize {
    (x + v - y) % v
}

pub fn differences_a(e: &ShiftSequence, s: usize) -> Result<DifferenceProfile> {
    let e = prepare(e, s)?;
    let v = e.len();
    let values = (0..v - s).map(|j| diff(e[j], e[j + s], v)).collect();
    Ok(DifferenceProfile::new(v, s, DifferenceMode::ARange, values))
}

pub fn differences_b(e: &ShiftSequence, s: usize) -> Result<DifferenceProfile> {
    let e = prepare(e, s)?;
    let v = e.len();
    let values = (0..v).map(|j| diff(e[j], ext(&e, j + s), v)).collect();
    Ok(DifferenceProfile::new(v, s, DifferenceMode::BExtended, values))
}

pub fn differences_open(e: &ShiftSequence, s: usize, form: OpenForm) -> Result<DifferenceProfile> {
    let e = prepare(e, s)?;
    let v = e.len();
    let head = (0..v - s).map(|j| diff(e[j], e[j + s], v));
    let values: Vec<usize> = match form {
        OpenForm::One => head
            .chain((0..s).map(|j| diff(e[v - s + j], (e[j] + 1) % v, v)))
            .collect(),
        OpenForm::Two => head
            .chain((v - s..v).map(|k| diff(e[k], (e[k + s - v] + 1) % v, v)))
            .collect(),
    };
    Ok(DifferenceProfile::new(v, s, DifferenceMode::Open(form), values))
}

/// Sum of the `v` form-2 differences mod `v`. The `e_k` terms telescope away,
/// leaving `-s mod v` for every `e`.
pub fn cond2_sum_residue(e: &ShiftSequence, s: usize) -> Result<usize> {
    let profile = differences_open(e, s, OpenForm::Two)?;
    Ok(profile.values.iter().sum::<usize>() % profile.v)
}

/// Diagnostics for one shift `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftDiagnostic {
    pub s: usize,
    pub profile: DifferenceProfile,
    pub distinct: usize,
    pub max_multiplicity: usize,
    /// What the condition demands: distinct count (A, OPEN) or maximum
    /// multiplicity (B).
    pub required: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: bool,
    pub shifts: Vec<ShiftDiagnostic>,
    pub first_failure: Option<usize>,
}

impl ConditionReport {
    fn assemble(condition: Condition, shifts: Vec<ShiftDiagnostic>) -> Self {
        let first_failure = shifts.iter().find(|d| !d.pass).map(|d| d.s);
        Self {
            condition,
            verdict: first_failure.is_none(),
            shifts,
            first_failure,
        }
    }

    pub fn shift(&self, s: usize) -> Option<&ShiftDiagnostic> {
        self.shifts.iter().find(|d| d.s == s)
    }
}

fn diagnose(profile: DifferenceProfile, required: usize, pass: impl Fn(&DifferenceProfile) -> bool) -> ShiftDiagnostic {
    ShiftDiagnostic {
        s: profile.s,
        distinct: profile.distinct_count(),
        max_multiplicity: profile.max_multiplicity(),
        required,
        pass: pass(&profile),
        profile,
    }
}

pub fn check_condition_a(e: &ShiftSequence) -> Result<ConditionReport> {
    e.finite_entries()?;
    let v = e.v();
    let shifts = (1..v)
        .map(|s| {
            let p = differences_a(e, s)?;
            Ok(diagnose(p, v - s, |p| p.distinct_count() == v - s))
        })
        .collect::<Result<_>>()?;
    Ok(ConditionReport::assemble(Condition::A, shifts))
}

pub fn check_condition_b(e: &ShiftSequence) -> Result<ConditionReport> {
    e.finite_entries()?;
    let shifts = (1..e.v())
        .map(|s| {
            let p = differences_b(e, s)?;
            Ok(diagnose(p, MAX_B_MULTIPLICITY, |p| {
                p.max_multiplicity() <= MAX_B_MULTIPLICITY
            }))
        })
        .collect::<Result<_>>()?;
    Ok(ConditionReport::assemble(Condition::B, shifts))
}

pub fn check_condition_open(e: &ShiftSequence) -> Result<ConditionReport> {
    e.finite_entries()?;
    let v = e.v();
    let shifts = (1..v)
        .map(|s| {
            let p = differences_open(e, s, OpenForm::Two)?;
            Ok(diagnose(p, v, |p| p.distinct_count() == v))
        })
        .collect::<Result<_>>()?;
    Ok(ConditionReport::assemble(Condition::Open, shifts))
}

pub fn check_condition(e: &ShiftSequence, condition: Condition) -> Result<ConditionReport> {
    match condition {
        Condition::A => check_condition_a(e),
        Condition::B => check_condition_b(e),
        Condition::Open => check_condition_open(e),
    }
}

/// Allocation-light verdict on a raw finite slice, used by the search.
/// `scratch` must hold at least `v` counters.
pub(crate) fn satisfies(e: &[usize], condition: Condition, scratch: &mut [u8]) -> bool {
    let v = e.len();
    let limit = match condition {
        Condition::A | Condition::Open => 1,
        Condition::B => MAX_B_MULTIPLICITY as u8,
    };
    for s in 1..v {
        scratch[..v].fill(0);
        let span = if condition == Condition::A { v - s } else { v };
        for j in 0..span {
            let d = diff(e[j], ext(e, j + s), v);
            scratch[d] += 1;
            if scratch[d] > limit {
                return false;
            }
        }
    }
    true
}
