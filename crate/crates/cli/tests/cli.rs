use std::process::{Command, Output};

use serde_json::Value;

fn shiftseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn gen_legendre_and_mseq() {
    let out = shiftseq(&["gen", "legendre", "--v", "7"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["schema"], "1");
    assert_eq!(r["results"]["sequence"], "0110100");
    assert_eq!(r["results"]["two_level"], true);

    assert_eq!(code(&shiftseq(&["gen", "legendre", "--v", "8"])), 2);

    let out = shiftseq(&["gen", "mseq", "--degree", "3", "--poly", "1011", "--state", "100"]);
    let r = report(&out);
    assert_eq!(r["results"]["sequence"], "1001011");
    assert_eq!(r["results"]["period"], 7);
    assert_eq!(r["results"]["two_level"], true);

    assert_eq!(
        code(&shiftseq(&[
            "gen", "mseq", "--degree", "3", "--poly", "1001", "--state", "100"
        ])),
        2
    );
}

#[test]
fn correlate_naive_and_fast_agree() {
    let naive = report(&shiftseq(&["correlate", "--auto", "--a", "1001110"]));
    assert_eq!(
        naive["results"]["profile"]["values"],
        serde_json::json!([7, -1, -1, -1, -1, -1, -1])
    );
    assert_eq!(naive["results"]["two_level"], true);
    let fast = report(&shiftseq(&["correlate", "--auto", "--fast", "--a", "1001110"]));
    assert_eq!(fast["results"]["profile"], naive["results"]["profile"]);

    assert_eq!(code(&shiftseq(&["correlate", "--a", "1001110"])), 2);
    assert_eq!(code(&shiftseq(&["correlate", "--a", "1001110", "--b", "101"])), 2);
    assert_eq!(code(&shiftseq(&["correlate", "--a", "1001110", "--b", "1001011"])), 0);
}

#[test]
fn build_reports_delta() {
    let out = shiftseq(&[
        "build",
        "--a",
        "1001110",
        "--b",
        "1001011",
        "--e",
        "0,0,1,0,6,3,5",
        "--delta",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["delta"]["delta"], 17);
    assert_eq!(r["results"]["delta"]["period"], 49);
    assert_eq!(r["results"]["members"].as_array().unwrap().len(), 8);
    assert!(r["results"]["diagnostics"]["shift_equivalent_pairs"]
        .as_array()
        .unwrap()
        .is_empty());

    let naive = report(&shiftseq(&[
        "build",
        "--a",
        "1001110",
        "--b",
        "1001011",
        "--e",
        "0,0,1,0,6,3,5",
        "--delta",
        "--naive",
    ]));
    assert_eq!(naive["results"]["delta"], r["results"]["delta"]);

    let flat = report(&shiftseq(&[
        "build",
        "--a",
        "1001110",
        "--b",
        "1001011",
        "--e",
        "0,0,0,0,0,0,0",
        "--delta",
    ]));
    assert_eq!(flat["results"]["delta"]["delta"], 41);

    assert_eq!(
        code(&shiftseq(&[
            "build", "--a", "1001110", "--b", "1001011", "--e", "0,0,1"
        ])),
        2
    );
    assert_eq!(
        code(&shiftseq(&[
            "build",
            "--a",
            "1001110",
            "--b",
            "1001011",
            "--e",
            "0,inf,1,0,6,3,5"
        ])),
        2
    );
}

#[test]
fn check_verdicts_and_exit_codes() {
    let out = shiftseq(&["check", "--e", "0,0,1,0,6,3,5", "--cond", "A"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["results"]["verdict"], false);
    assert_eq!(r["results"]["first_failure"], 1);
    assert_eq!(
        r["results"]["shifts"][0]["profile"]["values"],
        serde_json::json!([0, 6, 1, 1, 3, 5])
    );

    let out = shiftseq(&["check", "--e", "0,0,1,0,6,3,5", "--cond", "B"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["verdict"], true);

    assert_eq!(code(&shiftseq(&["check", "--e", "0,1", "--cond", "open"])), 0);
    assert_eq!(code(&shiftseq(&["check", "--e", "0,0,1,0,6,3,5", "--cond", "open"])), 1);
    assert_eq!(code(&shiftseq(&["check", "--e", "0,inf,1", "--cond", "A"])), 2);
    assert_eq!(code(&shiftseq(&["check", "--e", "0,1", "--cond", "C"])), 2);
}

#[test]
fn search_limit_and_budget() {
    let out = shiftseq(&["search", "--v", "7", "--pred", "b-not-a", "--limit", "5"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["witnesses"].as_array().unwrap().len(), 5);
    assert_eq!(r["results"]["satisfying"], 23926);
    assert_eq!(r["results"]["exhaustive"], true);

    let out = shiftseq(&["search", "--v", "9", "--pred", "open"]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());

    let sample = |seed: &str| {
        report(&shiftseq(&[
            "search",
            "--v",
            "9",
            "--pred",
            "B",
            "--strategy",
            "sample",
            "--samples",
            "2000",
            "--seed",
            seed,
        ]))["results"]
            .clone()
    };
    let first = sample("3");
    assert_eq!(first["exhaustive"], false);
    assert_eq!(first, sample("3"));
}

#[test]
fn verify_nonexistence_table() {
    let out = shiftseq(&["verify-nonexistence", "--vmax", "6"]);
    assert_eq!(code(&out), 0);
    let table = report(&out)["results"]["table"].clone();
    let rows = table.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["v"], 2);
    assert_eq!(rows[0]["exists"], true);
    assert!(rows[1..]
        .iter()
        .all(|r| r["exists"] == false && r["exhaustive"] == true));
}

#[test]
fn reproduce_passes_and_negative_control_fails() {
    let out = shiftseq(&["reproduce"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("11/11 checks passed"));

    let out = shiftseq(&["reproduce", "--json"]);
    let r = report(&out);
    assert_eq!(r["results"]["all_pass"], true);
    assert_eq!(r["results"]["checks"].as_array().unwrap().len(), 11);

    let out = shiftseq(&["reproduce", "--e", "0,0,0,0,0,0,0"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
