use std::process::{Command, Output};

use kleinian::cli::{ConjectureReport, MolienReport, QuiverSummary, ShiftReport, SumReport, WeightReport, WordReport, ZalgReport};
use kleinian::fiber::{GradedSlice, KleinianReport, PowerReport, SurjectivityReport};
use kleinian::params::{ParamReport, ParamVector};
use kleinian::preproj::{FiltrationTable, MolienComparison};
use kleinian::roots::Root;
use serde::de::DeserializeOwned;

fn kleinian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinian")).args(args).output().unwrap()
}

fn parse<T: DeserializeOwned + serde::Serialize>(args: &[&str]) -> T {
    let out = kleinian(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let value: T = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text, "round trip changed the output");
    value
}

#[test]
fn roots_a1_bound_3() {
    let roots: Vec<Root> = parse(&["roots", "--type", "A1", "--bound", "3"]);
    assert_eq!(roots.len(), 18);
    assert_eq!(roots.iter().filter(|r| !r.is_real).count(), 6);
    assert_eq!(roots.iter().filter(|r| r.is_dynkin).count(), 2);
}

#[test]
fn analyze_example() {
    let rep: ParamReport = parse(&["analyze", "--type", "A1", "--lambda", "2,-1"]);
    assert!(rep.regular && !rep.no_findim);
    let rep: ParamReport = parse(&["analyze", "--type", "A3", "--lambda", "1/2,1/6,1/6,1/6"]);
    assert!(rep.regular);
}

#[test]
fn complex_parameters() {
    let rep: ParamReport = parse(&["analyze", "--type", "A1", "--lambda", "1/2+i,1/2-i"]);
    assert!(rep.regular && rep.no_findim && rep.annihilated_roots.is_empty());
    let v: ParamVector = parse(&["apply-word", "--type", "A1", "--lambda", "1/2+i,1/2-i", "--reflections", "1"]);
    assert_eq!(v.tokens(), vec!["3/2-1i", "-1/2+1i"]);
}

#[test]
fn weyl_example() {
    let w: WordReport = parse(&["weyl-decompose", "--type", "A1", "--xi", "-1,1"]);
    assert!(w.verified);
    assert_eq!((w.automorphism, w.reflections), (vec![1, 0], vec![0]));
}

#[test]
fn weyl_is_deterministic_per_seed() {
    let args = ["weyl-decompose", "--type", "D4", "--xi", "-3,1,0,0,1", "--seed", "11"];
    assert_eq!(kleinian(&args).stdout, kleinian(&args).stdout);
}

#[test]
fn every_json_report_round_trips() {
    let _: QuiverSummary = parse(&["quiver", "--type", "E6"]);
    let _: QuiverSummary = parse(&["quiver", "--type", "A2", "--doubled"]);
    let _: WeightReport = parse(&["classify-weight", "--type", "D4", "--xi", "-5,1,2,0,1"]);
    let _: ShiftReport = parse(&["choose-xi", "--type", "A2", "--lambda", "1/3,1/3,1/3", "--d", "2", "--search-min"]);
    let _: Vec<GradedSlice> = parse(&["semiinv", "--n", "3", "--chi", "-2,1,1", "--m", "2", "--dmax", "6"]);
    let _: SurjectivityReport = parse(&["mult-check", "--n", "3", "--chi", "-2,1,1", "--left", "1", "--right", "2", "--dmax", "8"]);
    let _: PowerReport = parse(&["power-check", "--n", "2", "--chi", "-1,1", "--N", "1", "--dmax", "8"]);
    let _: KleinianReport = parse(&["kleinian-check", "--n", "3", "--dmax", "8"]);
    let _: MolienReport = parse(&["molien", "--group", "BD8", "--dmax", "10"]);
    let _: FiltrationTable = parse(&["preproj-dims", "--type", "A1", "--lambda", "1/2,1/2", "--L", "4"]);
    let _: MolienComparison = parse(&["preproj-dims", "--type", "A1", "--lambda", "1/2,1/2", "--L", "4", "--molien"]);
    let _: ZalgReport = parse(&["zalg-check", "--model", "polynomial", "--N", "1", "--M", "3", "--cap", "3"]);
    let c: ConjectureReport = parse(&["xi-conjecture", "--type", "A2", "--d", "2", "--samples", "20", "--seed", "1"]);
    assert_eq!((c.samples, c.dominant), (20, 20));
    let s: SumReport = parse(&["decompose-sum", "--m", "7", "--N", "3"]);
    assert_eq!(s.parts, vec![3, 4]);
}

#[test]
fn zalg_report_shape() {
    let rep: ZalgReport = parse(&["zalg-check", "--model", "typeA", "--n", "2", "--chi", "-1,1", "--N", "1", "--M", "4", "--cap", "8"]);
    assert!(rep.associative && !rep.vacuous && rep.witnesses.is_empty());
    assert_eq!(rep.morita_ii, "surjective");
}

#[test]
fn failed_checks_exit_1() {
    for perturb in ["scale", "delete"] {
        let out = kleinian(&[
            "zalg-check", "--model", "typeA", "--n", "2", "--chi", "-1,1", "--N", "1", "--M", "4", "--cap", "8", "--perturb", perturb,
        ]);
        assert_eq!(out.status.code(), Some(1), "{perturb}");
        let rep: ZalgReport = serde_json::from_slice(&out.stdout).unwrap();
        assert!(rep.associativity_witness.is_some() || !rep.witnesses.is_empty());
    }
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["analyze", "--type", "A1", "--lambda", "1/x,1"],
        &["analyze", "--type", "A1", "--lambda", "1,1", "--bogus"],
        &["analyze", "--type", "B2", "--lambda", "1,0"],
        &["analyze", "--type", "A1", "--lambda", "1,1"],
        &["choose-xi", "--type", "A1", "--lambda", "1,0", "--d", "1"],
        &["classify-weight", "--type", "A1", "--xi", "1,0,0"],
        &["molien", "--group", "BD6", "--dmax", "4"],
        &["decompose-sum", "--m", "2", "--N", "3"],
        &["semiinv", "--n", "3", "--chi", "1,1,1", "--m", "1", "--dmax", "4"],
        &["preproj-dims", "--type", "A1", "--lambda", "1/2+i,1/2-i", "--L", "2"],
        &["roots", "--type", "A1"],
        &[],
    ];
    for args in cases {
        let out = kleinian(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn csv_tables() {
    let out = kleinian(&["molien", "--group", "Z2", "--dmax", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "degree,dimension\n0,1\n1,0\n2,3\n3,0\n4,5\n");
    let out = kleinian(&["roots", "--type", "A1", "--bound", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 6);
}
