use std::fmt::{self, Write as _};
use std::time::Instant;

use serde_json::json;
use shiftseq::{
    autocorrelation, build_signal_set, check_condition, correlate as correlate_with, gen_legendre as legendre,
    gen_mseq as mseq, is_two_level, signal_set_delta, verify_open_nonexistence, Budget, Condition, CorrelationMethod,
    Error, LfsrSpec, PeriodicSequence, Predicate, SearchSpec, ShiftSequence, Strategy,
};

use crate::report::Report;
use crate::{BuildArgs, CheckArgs, CorrelateArgs, SearchArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Budget(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
            Error::Inconsistent(_) => CliError::Internal(err.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn to_value<T: serde::Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("result serializes")
}

/// A finished command: its report, a summary for `--pretty`, and an optional
/// verdict failure that turns into exit code 1.
pub struct Outcome {
    pub report: Report,
    pub pretty: String,
    pub verdict_failure: Option<String>,
}

impl Outcome {
    fn new(mut report: Report, started: Instant, pretty: String) -> Self {
        report.timing_us = started.elapsed().as_micros() as u64;
        Self {
            report,
            pretty,
            verdict_failure: None,
        }
    }
}

type CmdResult = Result<Outcome, CliError>;

fn sequence(text: &str, p: u32) -> Result<PeriodicSequence, CliError> {
    Ok(PeriodicSequence::parse(text, p)?)
}

fn shifts(text: &str) -> Result<ShiftSequence, CliError> {
    Ok(text.parse()?)
}

pub fn gen_mseq(degree: usize, poly: &str, state: &str) -> CmdResult {
    let started = Instant::now();
    let spec = LfsrSpec::parse(degree, poly, state)?;
    let seq = mseq(&spec)?;
    let mut report = Report::new(Vec::new());
    report.input("degree", degree);
    report.input("poly", poly);
    report.input("state", state);
    let two_level = is_two_level(&seq);
    report.results = json!({
        "sequence": seq.to_string(),
        "period": seq.period(),
        "two_level": two_level,
    });
    let pretty = format!("m-sequence period {}: {seq}\ntwo-level: {two_level}\n", seq.period());
    Ok(Outcome::new(report, started, pretty))
}

pub fn gen_legendre(v: usize, zero: u32) -> CmdResult {
    let started = Instant::now();
    let seq = legendre(v, zero)?;
    let mut report = Report::new(Vec::new());
    report.input("v", v);
    report.input("zero", zero);
    let two_level = is_two_level(&seq);
    report.results = json!({
        "sequence": seq.to_string(),
        "period": seq.period(),
        "two_level": two_level,
    });
    let pretty = format!("Legendre period {v}: {seq}\ntwo-level: {two_level}\n");
    Ok(Outcome::new(report, started, pretty))
}

pub fn correlate(args: &CorrelateArgs) -> CmdResult {
    let started = Instant::now();
    let a = sequence(&args.a, args.p)?;
    let b = match (&args.b, args.auto) {
        (_, true) => a.clone(),
        (Some(b), false) => sequence(b, args.p)?,
        (None, false) => return Err(CliError::Input("--b is required unless --auto is given".into())),
    };
    let method = if args.fast {
        CorrelationMethod::Fast
    } else {
        CorrelationMethod::Naive
    };
    let profile = correlate_with(&a, &b, method)?;
    let mut report = Report::new(Vec::new());
    report.input("a", &a);
    report.input("b", &b);
    report.input("p", args.p);
    report.results = json!({
        "method": method,
        "profile": profile,
        "two_level": args.auto.then(|| shiftseq::correlation::profile_is_two_level(&profile)),
    });
    let mut pretty = String::from("tau  C(tau)\n");
    for (tau, c) in profile.iter().enumerate() {
        let _ = writeln!(pretty, "{tau:>3}  {c}");
    }
    Ok(Outcome::new(report, started, pretty))
}

pub fn build(args: &BuildArgs) -> CmdResult {
    let started = Instant::now();
    let a = sequence(&args.a, 2)?;
    let b = sequence(&args.b, 2)?;
    let e = shifts(&args.e)?;
    let set = build_signal_set(&a, &b, &e)?;
    for (name, ok) in [("a", set.diagnostics.a_two_level), ("b", set.diagnostics.b_two_level)] {
        if !ok {
            eprintln!("warning: {name} does not have 2-level autocorrelation");
        }
    }
    let pairs = set.shift_equivalent_pairs();
    if !pairs.is_empty() {
        eprintln!("warning: {} pairs of members are shift equivalent", pairs.len());
    }
    let mut report = Report::new(Vec::new());
    report.input("a", &a);
    report.input("b", &b);
    report.input("e", &e);
    let members: Vec<String> = set.members.iter().map(ToString::to_string).collect();
    let mut pretty = format!(
        "signal set: {} members of period {}\n",
        set.members.len(),
        set.v * set.v
    );
    let delta = if args.delta {
        let method = if args.naive {
            CorrelationMethod::Naive
        } else {
            CorrelationMethod::Fast
        };
        let d = signal_set_delta(&set.members, method)?;
        let _ = writeln!(
            pretty,
            "parameters: ({}, {}, {})\nwitnesses: {}",
            d.period,
            d.members,
            d.delta,
            d.witnesses.len()
        );
        Some(d)
    } else {
        None
    };
    report.results = json!({
        "v": set.v,
        "members": members,
        "diagnostics": {
            "a_two_level": set.diagnostics.a_two_level,
            "b_two_level": set.diagnostics.b_two_level,
            "shift_equivalent_pairs": pairs,
        },
        "delta": delta,
    });
    Ok(Outcome::new(report, started, pretty))
}

pub fn check(args: &CheckArgs) -> CmdResult {
    let started = Instant::now();
    let e = shifts(&args.e)?;
    let cond: Condition = args.cond.parse()?;
    let result = check_condition(&e, cond)?;
    let mut report = Report::new(Vec::new());
    report.input("e", &e);
    report.input("cond", cond);
    let mut pretty = format!(
        "condition {cond} for e = ({e}): {}\n",
        if result.verdict { "PASS" } else { "FAIL" }
    );
    for d in &result.shifts {
        let _ = writeln!(
            pretty,
            "  s={:<3} {:<4} distinct={:<3} max_mult={:<3} differences={:?}",
            d.s,
            if d.pass { "ok" } else { "FAIL" },
            d.distinct,
            d.max_multiplicity,
            d.profile.values
        );
    }
    report.results = to_value(&result);
    let mut outcome = Outcome::new(report, started, pretty);
    if !result.verdict {
        outcome.verdict_failure = Some(format!(
            "condition {cond} fails at s = {}",
            result.first_failure.unwrap_or_default()
        ));
    }
    Ok(outcome)
}

pub fn search(args: &SearchArgs) -> CmdResult {
    let started = Instant::now();
    let predicate: Predicate = args.pred.parse()?;
    let strategy = match args.strategy.to_ascii_lowercase().as_str() {
        "full" => Strategy::Full,
        "backtrack" => Strategy::Backtrack,
        "sample" => Strategy::Sample {
            samples: args.samples,
            seed: args.seed,
        },
        other => return Err(CliError::Input(format!("unknown strategy {other:?}"))),
    };
    let spec = SearchSpec::new(args.v, predicate)
        .strategy(strategy)
        .limit(args.limit)
        .normalize(!args.unnormalized)
        .threads(args.threads)
        .budget(Budget {
            force: args.force,
            ..Budget::default()
        });
    let out = if args.progress {
        shiftseq::search::run_with_progress(&spec, &|n| eprintln!("examined {n}"))?
    } else {
        shiftseq::run(&spec)?
    };
    let mut report = Report::new(Vec::new());
    report.input("v", args.v);
    report.input("pred", &spec.predicate);
    let mut pretty = format!(
        "v={} predicate={} examined={} satisfying={} exhaustive={}\n",
        out.v, out.predicate, out.examined, out.satisfying, out.exhaustive
    );
    for w in &out.witnesses {
        let _ = writeln!(pretty, "  ({w})");
    }
    report.results = to_value(&out);
    Ok(Outcome::new(report, started, pretty))
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let started = Instant::now();
    let budget = Budget {
        force: args.force,
        ..Budget::default()
    };
    let rows = verify_open_nonexistence(args.vmax, budget, args.threads)?;
    let mut report = Report::new(Vec::new());
    report.input("vmax", args.vmax);
    let mut pretty = String::from("  v  exists  examined  witnesses\n");
    for row in &rows {
        let wits: Vec<String> = row.witnesses.iter().map(|w| format!("({w})")).collect();
        let _ = writeln!(
            pretty,
            "{:>3}  {:<6}  {:>8}  {}",
            row.v,
            row.exists,
            row.examined,
            wits.join(" ")
        );
    }
    report.results = json!({ "table": rows });
    let mut outcome = Outcome::new(report, started, pretty);
    if let Some(row) = rows.iter().find(|r| r.v > 2 && r.exists) {
        outcome.verdict_failure = Some(format!("open-condition vector found at v = {}", row.v));
    }
    Ok(outcome)
}

/// Autocorrelation of `a` as plain integers, for the reproduction table.
pub fn binary_autocorrelation(a: &PeriodicSequence) -> Vec<i64> {
    autocorrelation(a).as_ints().map(<[i64]>::to_vec).unwrap_or_default()
}
