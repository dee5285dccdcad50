use std::path::PathBuf;
use std::process::{Command, Output};

use shamoduli::linalg::nullspace;
use shamoduli::projgeom::{
    arrangement_from_s, generic_base_params, h_locus_equations, IndexSet, SCoordinates,
};
use shamoduli::rational::Rat;
use shamoduli::sha::Sha;
use shamoduli::weights::WeightVector;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shamoduli"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Six lines with a single quadruple point {1,2,3,4}, as a one-component
/// surface ready for replacement.
fn quadruple_surface() -> Sha {
    let n = 6;
    let a = generic_base_params(n, 2);
    let quad = IndexSet::new(vec![1, 2, 3, 4]);
    let eqs = h_locus_equations(n, &a, &quad).unwrap();
    let ns = nullspace(&eqs, n - 2);
    let w = WeightVector::new(vec![Rat::one(); n]).unwrap();
    for c in 2..20i64 {
        let s_vec: Vec<Rat> = (0..n - 2)
            .map(|i| &ns[0][i] + Rat::int(c) * &ns[1][i])
            .collect();
        let Ok(s) = SCoordinates::new(s_vec) else { continue };
        let Ok(arr) = arrangement_from_s(n, &a, &s) else { continue };
        let x = Sha::from_arrangement(&arr).unwrap();
        let loci = x.destabilized_loci(&w).unwrap();
        if loci.len() == 1 && loci[0].lines == quad {
            return x;
        }
    }
    panic!("no generic point of the quadruple locus found");
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("shamoduli-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn building_set_counts() {
    let out = stdout_json(&run(&["building-set", "--n", "5", "--weights", "1,1,1,1,1"]));
    assert_eq!(out["result"]["count"], 15);
    assert_eq!(out["result"]["by_codim"]["1"], 10);
    assert_eq!(out["result"]["by_codim"]["2"], 5);

    let out = stdout_json(&run(&["building-set", "--n", "6", "--weights", "1,1,1,1,1,1"]));
    assert_eq!(out["result"]["count"], 41);

    let out = stdout_json(&run(&["building-set", "--n", "5"]));
    assert_eq!(out["result"]["count"], 0, "base weight destabilizes nothing");
}

#[test]
fn exclusion_certificate_output() {
    let out = stdout_json(&run(&["exclusion", "--n", "5"]));
    assert_eq!(out["result"]["system_infeasible"], true);
    assert_eq!(out["result"]["relaxed_feasible"], true);
    assert_eq!(out["result"]["witness_triple"], serde_json::json!([3, 4, 5]));

    let text = run(&["exclusion", "--n", "7", "--format", "text"]);
    let body = String::from_utf8(text.stdout).unwrap();
    assert!(body.contains("INFEASIBLE"), "got: {body}");
    assert!(body.contains("{3,4,5}"), "got: {body}");
}

#[test]
fn family_check_all_trials_pass() {
    let out = stdout_json(&run(&[
        "family-check", "--n", "7", "--trials", "100", "--seed", "42",
    ]));
    assert_eq!(out["result"]["passed"], 100);
    assert_eq!(out["result"]["trials"], 100);
}

#[test]
fn strata_counts_and_poset() {
    let out = stdout_json(&run(&[
        "strata", "--n", "5", "--weights", "1,1,1,1,1", "--seed", "23",
    ]));
    assert_eq!(out["result"]["count"], 51);

    let dot = run(&[
        "strata", "--n", "5", "--weights", "1,1,1,1,1", "--seed", "23", "--format", "dot",
    ]);
    let body = String::from_utf8(dot.stdout).unwrap();
    assert!(body.starts_with("digraph strata {"));
    assert_eq!(body.matches(" -> ").count(), 85);

    let text = run(&["strata", "--n", "5", "--format", "text"]);
    let body = String::from_utf8(text.stdout).unwrap();
    assert_eq!(body, "generic\ntotal=1\n");
}

#[test]
fn replacement_pipeline_round_trips() {
    let x = quadruple_surface();
    let input = temp_file("root.json", &x.to_json_string());

    let out = run(&[
        "stable-replace",
        "--sha", input.to_str().unwrap(),
        "--vertex", "0",
        "--set", "1,2,3,4",
        "--moduli", "1,7",
    ]);
    assert!(out.status.success());
    let emitted = String::from_utf8(out.stdout).unwrap();
    let replaced = Sha::from_json_str(&emitted).unwrap();
    assert_eq!(replaced.to_json_string(), emitted, "emit, parse, emit is stable");
    assert_eq!(replaced.components().len(), 2);

    let two = temp_file("two.json", &emitted);
    let dot = run(&["dual-graph", "--sha", two.to_str().unwrap()]);
    let body = String::from_utf8(dot.stdout).unwrap();
    assert!(body.starts_with("graph dual {"), "got: {body}");
    assert!(body.contains("peripheries=2"));
    assert!(body.contains("c0 -- c1;"));

    let mid = run(&[
        "stable-replace",
        "--sha", input.to_str().unwrap(),
        "--vertex", "0",
        "--set", "1,2,3,4",
        "--moduli", "1,0",
    ]);
    let mid_file = temp_file("mid.json", &String::from_utf8(mid.stdout).unwrap());
    let chain = run(&[
        "stable-replace",
        "--sha", mid_file.to_str().unwrap(),
        "--vertex", "1",
        "--set", "2,3,4",
        "--moduli", "1",
    ]);
    assert!(chain.status.success());
    let chain_sha = Sha::from_json_str(&String::from_utf8(chain.stdout).unwrap()).unwrap();
    assert_eq!(chain_sha.components().len(), 3);
    let graph = chain_sha.dual_graph();
    assert_eq!(graph.edges, vec![(0, 1), (1, 2)]);
}

#[test]
fn cycle_class_with_oracle() {
    let x = quadruple_surface();
    let mu = SCoordinates::new(vec![Rat::int(1), Rat::int(7)]).unwrap();
    let quad = IndexSet::new(vec![1, 2, 3, 4]);
    let replaced = x.stable_replacement(0, &quad, &mu).unwrap();
    let file = temp_file("class.json", &replaced.to_json_string());

    let out = stdout_json(&run(&[
        "cycle-class",
        "--sha", file.to_str().unwrap(),
        "--m", "1,1,1,0,0,0",
        "--oracle",
        "--seed", "9",
    ]));
    let row = &out["result"]["coefficients"][0];
    assert_eq!(row["c"], row["oracle"]);

    let sweep = stdout_json(&run(&["cycle-class", "--sha", file.to_str().unwrap()]));
    assert_eq!(sweep["result"]["coefficients"].as_array().unwrap().len(), 50);
}

#[test]
fn cycle_class_threads_agree() {
    let x = quadruple_surface();
    let file = temp_file("threads.json", &x.to_json_string());
    let path = file.to_str().unwrap();

    let single = stdout_json(&run(&["cycle-class", "--sha", path, "--seed", "3", "--threads", "1"]));
    let multi = stdout_json(&run(&["cycle-class", "--sha", path, "--seed", "3", "--threads", "4"]));
    assert_eq!(single["result"], multi["result"]);

    let again = run(&["cycle-class", "--sha", path, "--seed", "3", "--threads", "4"]);
    let first = run(&["cycle-class", "--sha", path, "--seed", "3", "--threads", "4"]);
    assert_eq!(first.stdout, again.stdout, "same invocation is byte-identical");
}

#[test]
fn reports_are_byte_deterministic() {
    let a = run(&["strata", "--n", "5", "--weights", "1,1,1,1,1", "--seed", "23"]);
    let b = run(&["strata", "--n", "5", "--weights", "1,1,1,1,1", "--seed", "23"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.ends_with(b"\n"));
}

#[test]
fn seed_resolution_order() {
    let flag = stdout_json(&run(&["family-check", "--n", "5", "--trials", "3", "--seed", "7"]));
    assert_eq!(flag["seed"], 7);

    let out = bin()
        .args(["family-check", "--n", "5", "--trials", "3"])
        .env("SHAMODULI_SEED", "11")
        .output()
        .unwrap();
    let env_run = stdout_json(&out);
    assert_eq!(env_run["seed"], 11);

    let out = bin()
        .args(["family-check", "--n", "5", "--trials", "3", "--seed", "7"])
        .env("SHAMODULI_SEED", "11")
        .output()
        .unwrap();
    let both = stdout_json(&out);
    assert_eq!(both["seed"], 7, "explicit flag wins over the environment");

    let default = stdout_json(&run(&["family-check", "--n", "5", "--trials", "3"]));
    assert_eq!(default["seed"], 0);
}

#[test]
fn walls_summary_and_crossing() {
    let out = stdout_json(&run(&["walls", "--n", "5"]));
    assert_eq!(out["result"]["count"], 40);
    assert_eq!(out["result"]["multiple_point"], 15);
    assert_eq!(out["result"]["coincidence"], 25);

    let crossed = stdout_json(&run(&[
        "walls", "--n", "5",
        "--weights", "1,1,1,1,1",
        "--target", "3/5,3/5,3/5,3/5,3/5",
    ]));
    assert_eq!(crossed["result"]["count"], 10);
    assert_eq!(crossed["result"]["adjacent"], false);
}

#[test]
fn h_locus_rank_report() {
    let out = stdout_json(&run(&["h-locus", "--n", "6", "--set", "1,2,3,4", "--seed", "5"]));
    assert_eq!(out["result"]["rank"], 2);
    assert_eq!(out["result"]["expected_rank"], 2);
    assert_eq!(out["result"]["dim"], 1);
    assert_eq!(out["result"]["rows"], 4);
}

#[test]
fn exit_codes() {
    let bad = run(&["h-locus", "--n", "4", "--set", "1,2,9"]);
    assert_eq!(bad.status.code(), Some(2));

    let bad_weights = run(&["building-set", "--n", "5", "--weights", "1,1"]);
    assert_eq!(bad_weights.status.code(), Some(2));

    let budget = run(&["strata", "--n", "5", "--weights", "1,1,1,1,1", "--budget", "2"]);
    assert_eq!(budget.status.code(), Some(3));
}

#[test]
fn timing_stays_on_stderr() {
    let out = run(&["building-set", "--n", "5", "--weights", "1,1,1,1,1"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("time_ms="));
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(!body.contains("time_ms"));
}
