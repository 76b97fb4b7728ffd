//! Exhaustive and sampled search over shift-sequence space.
//!
//! All three conditions depend only on differences of entries, so adding a
//! constant to `e` never changes a verdict. With `normalize` set the search
//! fixes `e_0 = 0`, covering `v^(v-1)` candidates instead of `v^v`.
//!
//! Work is split into partitions by the first two entries. Partitions run in
//! parallel and are concatenated in prefix order, so witness lists are
//! lexicographically sorted whatever the thread count.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{cond2_sum_residue, satisfies, Condition, MAX_B_MULTIPLICITY};
use crate::error::{Error, Result};
use crate::interleave::ShiftSequence;

/// Largest `v` searched exhaustively unless forced.
pub const DEFAULT_MAX_V: usize = 8;

/// A condition, possibly negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    pub condition: Condition,
    pub negated: bool,
}

impl Literal {
    pub fn holds(condition: Condition) -> Self {
        Self {
            condition,
            negated: false,
        }
    }

    pub fn fails(condition: Condition) -> Self {
        Self {
            condition,
            negated: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Predicate {
    A,
    B,
    BNotA,
    Open,
    /// Conjunction of literals.
    All(Vec<Literal>),
}

impl Predicate {
    pub fn literals(&self) -> Vec<Literal> {
        match self {
            Predicate::A => vec![Literal::holds(Condition::A)],
            Predicate::B => vec![Literal::holds(Condition::B)],
            Predicate::BNotA => vec![Literal::holds(Condition::B), Literal::fails(Condition::A)],
            Predicate::Open => vec![Literal::holds(Condition::Open)],
            Predicate::All(lits) => lits.clone(),
        }
    }

    /// Evaluates the predicate on a finite shift sequence.
    pub fn eval(&self, e: &ShiftSequence) -> Result<bool> {
        let raw = e.finite_entries()?;
        let mut scratch = vec![0u8; raw.len()];
        Ok(eval_literals(&self.literals(), &raw, &mut scratch))
    }
}

fn eval_literals(lits: &[Literal], e: &[usize], scratch: &mut [u8]) -> bool {
    lits.iter()
        .all(|lit| satisfies(e, lit.condition, scratch) != lit.negated)
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::A => f.write_str("A"),
            Predicate::B => f.write_str("B"),
            Predicate::BNotA => f.write_str("b-not-a"),
            Predicate::Open => f.write_str("open"),
            Predicate::All(lits) => {
                let parts: Vec<String> = lits
                    .iter()
                    .map(|l| format!("{}{}", if l.negated { "!" } else { "" }, l.condition))
                    .collect();
                f.write_str(&parts.join("&"))
            }
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    /// `A`, `B`, `b-not-a`, `open`, or a conjunction such as `B&!A`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Predicate::A),
            "b" => Ok(Predicate::B),
            "b-not-a" => Ok(Predicate::BNotA),
            "open" => Ok(Predicate::Open),
            other => {
                let lits = other
                    .split('&')
                    .map(|tok| {
                        let tok = tok.trim();
                        match tok.strip_prefix('!') {
                            Some(rest) => rest.parse().map(Literal::fails),
                            None => tok.parse().map(Literal::holds),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Predicate::All(lits))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Visit every candidate.
    Full,
    /// Depth-first with prefix pruning.
    Backtrack,
    /// Uniform random candidates; never exhaustive.
    Sample { samples: u64, seed: u64 },
}

/// Guard on exhaustive search size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_v: usize,
    pub force: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_v: DEFAULT_MAX_V,
            force: false,
        }
    }
}

impl Budget {
    fn check(&self, v: usize) -> Result<()> {
        if v > self.max_v && !self.force {
            Err(Error::BudgetExceeded { v, max_v: self.max_v })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub v: usize,
    pub predicate: Predicate,
    /// Fix `e_0 = 0`.
    pub normalize: bool,
    /// Maximum number of witnesses kept; `None` keeps all, `Some(0)` only counts.
    pub limit: Option<usize>,
    pub strategy: Strategy,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub budget: Budget,
}

impl SearchSpec {
    /// Normalized backtracking search keeping every witness.
    pub fn new(v: usize, predicate: Predicate) -> Self {
        Self {
            v,
            predicate,
            normalize: true,
            limit: None,
            strategy: Strategy::Backtrack,
            threads: None,
            budget: Budget::default(),
        }
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn limit(mut self, limit: Option<usize>) -> Self {
        self.limit = limit;
        self
    }

    pub fn normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    pub fn budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Size of the candidate space.
    pub fn space_size(&self) -> u128 {
        let free = if self.normalize { self.v - 1 } else { self.v };
        (self.v as u128).pow(free as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub v: usize,
    pub predicate: String,
    pub strategy: Strategy,
    pub normalize: bool,
    /// Sorted lexicographically, truncated to the limit.
    pub witnesses: Vec<ShiftSequence>,
    /// Candidates evaluated (full, sample) or search-tree nodes visited
    /// (backtrack).
    pub examined: u64,
    pub satisfying: u64,
    /// True iff the whole (normalized) space was covered.
    pub exhaustive: bool,
}

/// Runs the strategy named in `spec`.
pub fn run(spec: &SearchSpec) -> Result<SearchOutcome> {
    run_with_progress(spec, &|_| {})
}

/// Like [`run`], calling `progress` with the running examined count after
/// each partition completes.
pub fn run_with_progress(spec: &SearchSpec, progress: &(dyn Fn(u64) + Sync)) -> Result<SearchOutcome> {
    if spec.v < 2 {
        return Err(Error::OutOfRange {
            what: "v",
            value: spec.v,
            lo: 2,
            hi: usize::MAX,
        });
    }
    match spec.strategy {
        Strategy::Full | Strategy::Backtrack => spec.budget.check(spec.v)?,
        Strategy::Sample { .. } => {}
    }
    if spec.v > u8::MAX as usize {
        return Err(Error::OutOfRange {
            what: "v",
            value: spec.v,
            lo: 2,
            hi: u8::MAX as usize + 1,
        });
    }
    let lits = spec.predicate.literals();
    let outcome = match spec.strategy {
        Strategy::Full => partitioned(spec, &lits, progress, enumerate_partition),
        Strategy::Backtrack => partitioned(spec, &lits, progress, backtrack_partition),
        Strategy::Sample { samples, seed } => sample(spec, &lits, samples, seed),
    };
    cross_check_open_hits(&lits, &outcome)?;
    Ok(outcome)
}

/// Visits every candidate in lexicographic order.
pub fn enumerate(spec: &SearchSpec) -> Result<SearchOutcome> {
    run(&spec.clone().strategy(Strategy::Full))
}

/// Depth-first search with prefix pruning; same witnesses as [`enumerate`].
pub fn backtrack(spec: &SearchSpec) -> Result<SearchOutcome> {
    run(&spec.clone().strategy(Strategy::Backtrack))
}

/// Normalized shift sequences satisfying B but not A.
pub fn find_b_not_a(v: usize, limit: Option<usize>, budget: Budget) -> Result<SearchOutcome> {
    run(&SearchSpec::new(v, Predicate::BNotA).limit(limit).budget(budget))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceRow {
    pub v: usize,
    pub exists: bool,
    pub witnesses: Vec<ShiftSequence>,
    pub examined: u64,
    pub exhaustive: bool,
}

/// Exhaustively searches the open condition for every `v` in
/// `[2, v_max]`.
pub fn verify_open_nonexistence(v_max: usize, budget: Budget, threads: Option<usize>) -> Result<Vec<NonexistenceRow>> {
    budget.check(v_max)?;
    (2..=v_max)
        .map(|v| {
            let out = run(&SearchSpec::new(v, Predicate::Open).budget(budget).threads(threads))?;
            Ok(NonexistenceRow {
                v,
                exists: out.satisfying > 0,
                witnesses: out.witnesses,
                examined: out.examined,
                exhaustive: out.exhaustive,
            })
        })
        .collect()
}

/// A witness of the open condition has every form-2 multiset equal to `Z_v`,
/// so each sum must be `v(v-1)/2 mod v`; anything else is a bug.
fn cross_check_open_hits(lits: &[Literal], outcome: &SearchOutcome) -> Result<()> {
    if !lits.contains(&Literal::holds(Condition::Open)) {
        return Ok(());
    }
    let v = outcome.v;
    let expected = v * (v - 1) / 2 % v;
    for e in &outcome.witnesses {
        for s in 1..v {
            let got = cond2_sum_residue(e, s)?;
            if got != expected {
                return Err(Error::Inconsistent(format!(
                    "open-condition witness {e} has sum residue {got} at s = {s}, expected {expected}"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Default)]
struct PartitionResult {
    witnesses: Vec<Vec<usize>>,
    examined: u64,
    satisfying: u64,
}

type PartitionFn = fn(&SearchSpec, &[Literal], &[usize]) -> PartitionResult;

fn prefixes(spec: &SearchSpec) -> Vec<Vec<usize>> {
    let v = spec.v;
    let first: Vec<usize> = if spec.normalize { vec![0] } else { (0..v).collect() };
    first.iter().flat_map(|&x| (0..v).map(move |y| vec![x, y])).collect()
}

fn partitioned(
    spec: &SearchSpec,
    lits: &[Literal],
    progress: &(dyn Fn(u64) + Sync),
    worker: PartitionFn,
) -> SearchOutcome {
    let prefixes = prefixes(spec);
    let examined = AtomicU64::new(0);
    let job = |prefix: &Vec<usize>| {
        let res = worker(spec, lits, prefix);
        let total = examined.fetch_add(res.examined, Ordering::Relaxed) + res.examined;
        progress(total);
        res
    };
    let results: Vec<PartitionResult> = match spec.threads {
        Some(1) => prefixes.iter().map(job).collect(),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| prefixes.par_iter().map(job).collect()),
            Err(_) => prefixes.par_iter().map(job).collect(),
        },
        None => prefixes.par_iter().map(job).collect(),
    };
    merge(spec, results, true)
}

fn merge(spec: &SearchSpec, results: Vec<PartitionResult>, exhaustive: bool) -> SearchOutcome {
    let mut witnesses = Vec::new();
    let (mut examined, mut satisfying) = (0, 0);
    for r in results {
        examined += r.examined;
        satisfying += r.satisfying;
        witnesses.extend(r.witnesses);
    }
    if let Some(limit) = spec.limit {
        witnesses.truncate(limit);
    }
    SearchOutcome {
        v: spec.v,
        predicate: spec.predicate.to_string(),
        strategy: spec.strategy,
        normalize: spec.normalize,
        witnesses: witnesses
            .iter()
            .map(|w| ShiftSequence::from_finite_unchecked(w))
            .collect(),
        examined,
        satisfying,
        exhaustive,
    }
}

fn keep(spec: &SearchSpec, res: &mut PartitionResult, e: &[usize]) {
    res.satisfying += 1;
    if spec.limit.is_none_or(|l| res.witnesses.len() < l) {
        res.witnesses.push(e.to_vec());
    }
}

fn enumerate_partition(spec: &SearchSpec, lits: &[Literal], prefix: &[usize]) -> PartitionResult {
    let v = spec.v;
    let fixed = prefix.len().min(v);
    let mut e = vec![0usize; v];
    e[..fixed].copy_from_slice(&prefix[..fixed]);
    let mut scratch = vec![0u8; v];
    let mut res = PartitionResult::default();
    loop {
        res.examined += 1;
        if eval_literals(lits, &e, &mut scratch) {
            keep(spec, &mut res, &e);
        }
        // odometer over the free positions, last position fastest
        let mut pos = v;
        loop {
            if pos == fixed {
                return res;
            }
            pos -= 1;
            e[pos] += 1;
            if e[pos] < v {
                break;
            }
            e[pos] = 0;
        }
    }
}

/// Incremental difference counts for the backtracking search.
///
/// `unext[s][d]` counts the differences `e_j - e_{j+s}` with `j + s < v`;
/// `wrap[s][d]` counts `e_j - e_{j+s-v} - 1` with `j + s >= v`. A wrapped
/// difference is counted once `e_j` is assigned, since `j + s - v < j`.
struct Counts {
    v: usize,
    unext: Vec<u8>,
    wrap: Vec<u8>,
    /// Multiplicity cap on `unext` alone (condition A), if any.
    cap_unext: Option<u8>,
    /// Multiplicity cap on `unext + wrap` (conditions B and OPEN), if any.
    cap_total: Option<u8>,
}

impl Counts {
    fn new(v: usize, lits: &[Literal]) -> Self {
        let positive = |c| lits.contains(&Literal::holds(c));
        let cap_total = if positive(Condition::Open) {
            Some(1)
        } else if positive(Condition::B) {
            Some(MAX_B_MULTIPLICITY as u8)
        } else {
            None
        };
        Self {
            v,
            unext: vec![0; v * v],
            wrap: vec![0; v * v],
            cap_unext: positive(Condition::A).then_some(1),
            cap_total,
        }
    }

    /// Adds the differences that become determined when `e[m]` is assigned.
    /// Returns false if a cap is exceeded; the additions must be undone with
    /// [`Counts::remove`] either way.
    fn add(&mut self, e: &[usize], m: usize) -> bool {
        let v = self.v;
        let mut ok = true;
        for s in 1..=m {
            let d = (e[m - s] + v - e[m]) % v;
            let idx = s * v + d;
            self.unext[idx] += 1;
            ok &= self.cap_unext.is_none_or(|c| self.unext[idx] <= c);
            ok &= self.cap_total.is_none_or(|c| self.unext[idx] + self.wrap[idx] <= c);
        }
        for s in v - m..v {
            let d = (e[m] + 2 * v - e[m + s - v] - 1) % v;
            let idx = s * v + d;
            self.wrap[idx] += 1;
            ok &= self.cap_total.is_none_or(|c| self.unext[idx] + self.wrap[idx] <= c);
        }
        ok
    }

    fn remove(&mut self, e: &[usize], m: usize) {
        let v = self.v;
        for s in 1..=m {
            self.unext[s * v + (e[m - s] + v - e[m]) % v] -= 1;
        }
        for s in v - m..v {
            self.wrap[s * v + (e[m] + 2 * v - e[m + s - v] - 1) % v] -= 1;
        }
    }
}

fn backtrack_partition(spec: &SearchSpec, lits: &[Literal], prefix: &[usize]) -> PartitionResult {
    struct Dfs<'a> {
        spec: &'a SearchSpec,
        lits: &'a [Literal],
        prefix: &'a [usize],
        e: Vec<usize>,
        counts: Counts,
        scratch: Vec<u8>,
        res: PartitionResult,
    }

    impl Dfs<'_> {
        fn visit(&mut self, m: usize) {
            let v = self.spec.v;
            if m == v {
                // negated literals are only decidable on complete vectors
                if eval_literals(self.lits, &self.e, &mut self.scratch) {
                    keep(self.spec, &mut self.res, &self.e);
                }
                return;
            }
            let choices = match self.prefix.get(m) {
                Some(&x) => x..x + 1,
                None => 0..v,
            };
            for x in choices {
                self.res.examined += 1;
                self.e[m] = x;
                if self.counts.add(&self.e, m) {
                    self.visit(m + 1);
                }
                self.counts.remove(&self.e, m);
            }
        }
    }

    let v = spec.v;
    let mut dfs = Dfs {
        spec,
        lits,
        prefix,
        e: vec![0; v],
        counts: Counts::new(v, lits),
        scratch: vec![0; v],
        res: PartitionResult::default(),
    };
    dfs.visit(0);
    dfs.res
}

fn sample(spec: &SearchSpec, lits: &[Literal], samples: u64, seed: u64) -> SearchOutcome {
    let v = spec.v;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = vec![0usize; v];
    let mut scratch = vec![0u8; v];
    let mut hits = Vec::new();
    let mut satisfying = 0;
    let start = usize::from(spec.normalize);
    for _ in 0..samples {
        for x in &mut e[start..] {
            *x = rng.gen_range(0..v);
        }
        if eval_literals(lits, &e, &mut scratch) {
            satisfying += 1;
            hits.push(e.clone());
        }
    }
    hits.sort();
    hits.dedup();
    if let Some(limit) = spec.limit {
        hits.truncate(limit);
    }
    SearchOutcome {
        v,
        predicate: spec.predicate.to_string(),
        strategy: spec.strategy,
        normalize: spec.normalize,
        witnesses: hits.iter().map(|w| ShiftSequence::from_finite_unchecked(w)).collect(),
        examined: samples,
        satisfying,
        exhaustive: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::check_condition;

    /// Independent oracle: every normalized vector, verdicts from the
    /// report-building checkers.
    fn oracle_count(v: usize, cond: impl Fn(&ShiftSequence) -> bool) -> (u64, Vec<ShiftSequence>) {
        let mut out = Vec::new();
        let total = v.pow(v as u32 - 1);
        for code in 0..total {
            let mut rest = code;
            let mut entries = vec![0usize; v];
            for pos in (1..v).rev() {
                entries[pos] = rest % v;
                rest /= v;
            }
            let e = ShiftSequence::finite(entries).unwrap();
            if cond(&e) {
                out.push(e);
            }
        }
        (out.len() as u64, out)
    }

    fn holds(e: &ShiftSequence, c: Condition) -> bool {
        check_condition(e, c).unwrap().verdict
    }

    #[test]
    fn open_v2_has_two_normalized_witnesses() {
        let out = enumerate(&SearchSpec::new(2, Predicate::Open)).unwrap();
        let found: Vec<String> = out.witnesses.iter().map(|w| w.to_string()).collect();
        assert_eq!(found, vec!["0,0", "0,1"]);
        assert_eq!(out.examined, 2);
        assert!(out.exhaustive);
    }

    #[test]
    fn open_v3_is_empty() {
        let out = enumerate(&SearchSpec::new(3, Predicate::Open)).unwrap();
        assert_eq!(out.satisfying, 0);
        assert_eq!(out.examined, 9);
        assert!(out.exhaustive);
    }

    #[test]
    fn a_v3_matches_oracle() {
        let (count, wits) = oracle_count(3, |e| holds(e, Condition::A));
        let out = enumerate(&SearchSpec::new(3, Predicate::A)).unwrap();
        assert_eq!(out.satisfying, count);
        assert_eq!(out.witnesses, wits);
        assert_eq!(count, 6);
    }

    #[test]
    fn b_not_a_small() {
        let (count, wits) = oracle_count(3, |e| holds(e, Condition::B) && !holds(e, Condition::A));
        let out = find_b_not_a(3, None, Budget::default()).unwrap();
        assert_eq!(out.satisfying, count);
        assert_eq!(out.witnesses, wits);
        assert_eq!(count, 3);
        let out2 = find_b_not_a(2, None, Budget::default()).unwrap();
        assert_eq!(out2.satisfying, 0);
    }

    #[test]
    fn backtrack_matches_enumerate_v5_b() {
        let spec = SearchSpec::new(5, Predicate::B);
        let full = enumerate(&spec).unwrap();
        let bt = backtrack(&spec).unwrap();
        assert_eq!(full.witnesses, bt.witnesses);
        assert_eq!(full.satisfying, 325);
        assert_eq!(full.examined, 625);
        assert!(bt.exhaustive);
    }

    #[test]
    fn unnormalized_space() {
        let spec = SearchSpec::new(3, Predicate::A).normalize(false);
        let full = enumerate(&spec).unwrap();
        assert_eq!(full.examined, 27);
        assert_eq!(full.satisfying, 18);
        assert_eq!(backtrack(&spec).unwrap().witnesses, full.witnesses);
    }

    #[test]
    fn limit_and_count_only() {
        let spec = SearchSpec::new(5, Predicate::B).limit(Some(4));
        let out = backtrack(&spec).unwrap();
        assert_eq!(out.witnesses.len(), 4);
        assert_eq!(out.satisfying, 325);
        let all = backtrack(&SearchSpec::new(5, Predicate::B)).unwrap();
        assert_eq!(out.witnesses[..], all.witnesses[..4]);
        let none = backtrack(&spec.limit(Some(0))).unwrap();
        assert!(none.witnesses.is_empty());
        assert_eq!(none.satisfying, 325);
    }

    #[test]
    fn budget_guard() {
        let spec = SearchSpec::new(9, Predicate::Open);
        assert_eq!(run(&spec), Err(Error::BudgetExceeded { v: 9, max_v: 8 }));
        let sampled = run(&spec.clone().strategy(Strategy::Sample { samples: 100, seed: 0 })).unwrap();
        assert!(!sampled.exhaustive);
        assert_eq!(sampled.examined, 100);
        assert!(verify_open_nonexistence(9, Budget::default(), None).is_err());
    }

    #[test]
    fn predicate_text() {
        assert_eq!("b-not-a".parse::<Predicate>().unwrap(), Predicate::BNotA);
        assert_eq!(
            "B&!A".parse::<Predicate>().unwrap(),
            Predicate::All(vec![Literal::holds(Condition::B), Literal::fails(Condition::A)])
        );
        assert_eq!(
            Predicate::All(vec![Literal::fails(Condition::Open)]).to_string(),
            "!OPEN"
        );
        assert!("C".parse::<Predicate>().is_err());
    }

    #[test]
    fn custom_conjunction_matches_named() {
        let named = backtrack(&SearchSpec::new(4, Predicate::BNotA)).unwrap();
        let custom = backtrack(&SearchSpec::new(4, "B&!A".parse().unwrap())).unwrap();
        assert_eq!(named.witnesses, custom.witnesses);
        let negated_only = enumerate(&SearchSpec::new(3, "!B".parse().unwrap())).unwrap();
        assert_eq!(negated_only.satisfying, 0);
    }

    #[test]
    fn nonexistence_table_small() {
        let rows = verify_open_nonexistence(3, Budget::default(), Some(1)).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].exists);
        assert!(rows[0].witnesses.iter().any(|w| w.to_string() == "0,1"));
        assert!(!rows[1].exists && rows[1].exhaustive);
    }
}
