//! One-shot rerun of the reference example and its companion checks.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use shiftseq::{
    build_signal_set, check_condition_a, check_condition_b, check_condition_open, cond2_sum_residue, cross_correlation,
    differences_a, find_b_not_a, lemma_correlation, signal_set_delta, Budget, CorrValue, CorrelationMethod, Delta,
    PeriodicSequence, Predicate, SearchSpec, ShiftSequence,
};

use crate::commands::binary_autocorrelation;
use crate::report::Report;
use crate::ReproduceArgs;

const EXAMPLE_A: &str = "1001110";
const EXAMPLE_B: &str = "1001011";
const EXAMPLE_E: &str = "0,0,1,0,6,3,5";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn row(name: &str, result: Result<String, String>) -> CheckRow {
    let (pass, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckRow {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

pub fn checks(e: &ShiftSequence, seed: u64) -> Vec<CheckRow> {
    let a: PeriodicSequence = EXAMPLE_A.parse().expect("valid literal");
    let b: PeriodicSequence = EXAMPLE_B.parse().expect("valid literal");
    let set = build_signal_set(&a, &b, e);
    let mut rows = Vec::new();

    rows.push(row(
        "(49, 8, 17) signal set",
        (|| {
            let set = set.as_ref().map_err(err)?;
            let report = signal_set_delta(&set.members, CorrelationMethod::Naive).map_err(err)?;
            let shape = (report.period, report.members, report.delta);
            if shape == (49, 8, Delta::Exact(17)) && set.is_pairwise_shift_distinct() {
                Ok("delta = 17, 8 shift-distinct members of period 49".into())
            } else {
                Err(format!("got ({}, {}, {})", shape.0, shape.1, shape.2))
            }
        })(),
    ));

    rows.push(row(
        "condition A differences at s = 1",
        (|| {
            let d = differences_a(e, 1).map_err(err)?;
            if d.values == [0, 6, 1, 1, 3, 5] && d.distinct_count() == 5 {
                Ok("{0, 6, 1, 1, 3, 5}, 5 distinct".into())
            } else {
                Err(format!("{:?}, {} distinct", d.values, d.distinct_count()))
            }
        })(),
    ));

    rows.push(row(
        "example fails condition A",
        (|| {
            let r = check_condition_a(e).map_err(err)?;
            match r.first_failure {
                Some(s) => Ok(format!("first failing s = {s}")),
                None => Err("condition A holds".into()),
            }
        })(),
    ));

    rows.push(row(
        "example satisfies condition B",
        (|| {
            let r = check_condition_b(e).map_err(err)?;
            if r.verdict {
                Ok("max multiplicity <= 2 for all s".into())
            } else {
                Err(format!("fails at s = {:?}", r.first_failure))
            }
        })(),
    ));

    rows.push(row(
        "column-wise correlation formula",
        (|| {
            let set = set.as_ref().map_err(err)?;
            let ca = shiftseq::autocorrelation(&set.a);
            let v = set.v;
            for h in 0..v {
                for k in 0..v {
                    let direct = cross_correlation(set.offset_member(h), set.offset_member(k)).map_err(err)?;
                    for tau in 0..v * v {
                        let lemma = lemma_correlation(&ca, &set.b, &set.e, h, k, tau).map_err(err)?;
                        if lemma != direct.get(tau) {
                            return Err(format!("h={h} k={k} tau={tau}"));
                        }
                    }
                }
            }
            Ok(format!("{} values agree", v * v * v * v))
        })(),
    ));

    rows.push(row(
        "in-column shifts give -C_a(r) in {1, -v}",
        (|| {
            let set = set.as_ref().map_err(err)?;
            let ca = binary_autocorrelation(&set.a);
            let v = set.v;
            for h in 0..v {
                for k in (0..v).filter(|&k| k != h) {
                    let c = cross_correlation(set.offset_member(h), set.offset_member(k)).map_err(err)?;
                    for (r, &c_r) in ca.iter().enumerate() {
                        let value = c.get(r * v);
                        if value != CorrValue::Int(-c_r)
                            || !(value == CorrValue::Int(1) || value == CorrValue::Int(-(v as i64)))
                        {
                            return Err(format!("h={h} k={k} r={r}: {value}"));
                        }
                    }
                }
            }
            Ok("all h != k, r".into())
        })(),
    ));

    rows.push(row(
        "condition A implies condition B (v <= 5)",
        (|| {
            for v in 2..=5 {
                let out = shiftseq::enumerate(&SearchSpec::new(v, "A&!B".parse().map_err(err)?)).map_err(err)?;
                if out.satisfying != 0 {
                    return Err(format!("v = {v}: {} counterexamples", out.satisfying));
                }
            }
            Ok("0 counterexamples".into())
        })(),
    ));

    rows.push(row(
        "condition A is too strong (v = 7)",
        (|| {
            let out = find_b_not_a(7, Some(0), Budget::default()).map_err(err)?;
            if out.satisfying > 0 {
                Ok(format!("{} normalized vectors satisfy B but not A", out.satisfying))
            } else {
                Err("none found".into())
            }
        })(),
    ));

    rows.push(row(
        "(0, 1) satisfies the open condition",
        (|| {
            let e01: ShiftSequence = "0,1".parse().map_err(err)?;
            if check_condition_open(&e01).map_err(err)?.verdict {
                Ok("v = 2".into())
            } else {
                Err("(0, 1) fails".into())
            }
        })(),
    ));

    rows.push(row(
        "no open-condition vector for 3 <= v <= 7",
        (|| {
            for v in 3..=7 {
                let out = shiftseq::run(&SearchSpec::new(v, Predicate::Open)).map_err(err)?;
                if out.satisfying != 0 || !out.exhaustive {
                    return Err(format!("v = {v}: {} found", out.satisfying));
                }
            }
            Ok("exhaustive, none found".into())
        })(),
    ));

    rows.push(row(
        "extended differences sum to -s",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for v in [3usize, 5, 7] {
                for _ in 0..1000 {
                    let e = ShiftSequence::finite((0..v).map(|_| rng.gen_range(0..v)).collect()).map_err(err)?;
                    for s in 1..v {
                        if cond2_sum_residue(&e, s).map_err(err)? != (v - s) % v {
                            return Err(format!("e = ({e}), s = {s}"));
                        }
                    }
                }
            }
            Ok(format!("3000 random vectors, seed {seed}"))
        })(),
    ));

    rows
}

pub fn run(args: &ReproduceArgs, argv: Vec<String>) -> ExitCode {
    let started = Instant::now();
    let e: ShiftSequence = match args.e.as_deref().unwrap_or(EXAMPLE_E).parse() {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rows = checks(&e, args.seed);
    let all_pass = rows.iter().all(|r| r.pass);
    let mut out = std::io::stdout().lock();
    if args.json {
        let mut report = Report::new(argv);
        report.input("a", EXAMPLE_A);
        report.input("b", EXAMPLE_B);
        report.input("e", &e);
        report.input("seed", args.seed);
        report.results = json!({ "checks": rows, "all_pass": all_pass });
        report.timing_us = started.elapsed().as_micros() as u64;
        let _ = writeln!(out, "{}", report.to_json());
    } else {
        for r in &rows {
            let _ = writeln!(
                out,
                "{}  {:<45} {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.detail
            );
        }
        let _ = writeln!(
            out,
            "{}/{} checks passed in {:.2?}",
            rows.iter().filter(|r| r.pass).count(),
            rows.len(),
            started.elapsed()
        );
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_passes_every_check() {
        let rows = checks(&EXAMPLE_E.parse().unwrap(), 0);
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
    }

    #[test]
    fn corrupted_example_fails() {
        let rows = checks(&"0,0,0,0,0,0,0".parse().unwrap(), 0);
        assert!(!rows[0].pass);
        assert!(!rows[3].pass);
    }
}
