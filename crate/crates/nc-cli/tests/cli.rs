//! End-to-end tests of the `nc` command line, driven through the library
//! entry point so exit codes and output bytes are checked exactly.

use std::fs;
use std::path::PathBuf;

use clap::CommandFactory;

use nc_cli::{run, Cli, Outcome, OPERATION_COVERAGE};

fn nc(args: &[&str]) -> Outcome {
    let mut full = vec!["nc"];
    full.extend_from_slice(args);
    run(full, None)
}

fn nc_with_bound(args: &[&str], bound: &str) -> Outcome {
    let mut full = vec!["nc"];
    full.extend_from_slice(args);
    run(full, Some(bound.to_string()))
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    path.to_string_lossy().into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn report_wheel_passes_certificate() {
    let out = nc(&["report", "wheel"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("all premises verified"));
    assert!(out.stdout.contains("order-forced [123, 23, 234, 34, 345]"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = nc(&["paths", "/no/such/file.json", "--from", "13", "--to", "14"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("cannot read"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = nc(&["frobnicate"]);
    assert_eq!(out.code, 2);
}

#[test]
fn tampered_certificate_fails_with_detail() {
    let dir = tempfile::tempdir().unwrap();
    let mut cert = neural_codes::certificates::builtin_certificates()
        .remove("R")
        .unwrap();
    // Reorder two interior vertices of the first path premise.
    if let neural_codes::certificates::PremiseSpec::UniqueFeasiblePath { path, .. } =
        &mut cert.premises[0]
    {
        path.swap(1, 3);
    } else {
        panic!("expected a path premise");
    }
    let cert_path = write_temp(
        &dir,
        "tampered.json",
        &serde_json::to_string(&cert).unwrap(),
    );
    let code = neural_codes::families::registry("R").unwrap().code;
    let code_path = write_temp(&dir, "R.json", &neural_codes::format::serialize_json(&code));
    let out = nc(&["cert", "verify", &code_path, &cert_path]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert!(out.stdout.contains("FAIL"));
    assert!(out.stdout.contains("verification FAILED"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["report", "R", "--json"],
        vec!["registry", "T", "--json"],
        vec!["family", "Pd", "--d", "2", "--json"],
    ] {
        let first = nc(&args);
        let second = nc(&args);
        assert_eq!(first.code, second.code);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert!(!first.stdout.is_empty());
    }
}

#[test]
fn every_operation_is_reachable_from_a_subcommand() {
    // Collect "path" names of all leaf subcommands of the CLI tree.
    let cmd = Cli::command();
    let mut reachable = Vec::new();
    for sub in cmd.get_subcommands() {
        let name = sub.get_name().to_string();
        let nested: Vec<String> = sub
            .get_subcommands()
            .map(|inner| format!("{name} {}", inner.get_name()))
            .collect();
        if nested.is_empty() {
            reachable.push(name);
        } else {
            reachable.extend(nested);
        }
    }
    let expected_ops = [
        "parse_code",
        "maximal_codewords",
        "is_intersection_complete",
        "is_sunflower_code",
        "is_isomorphic",
        "gen_ln",
        "gen_pd",
        "registry",
        "codeword_graph",
        "is_feasible_walk",
        "enumerate_feasible_paths",
        "forced_between",
        "is_order_forced",
        "is_strongly_order_forced",
        "reduce_walk_to_path",
        "trunk",
        "is_morphism",
        "is_minor_witness",
        "find_surjective_morphism",
        "covered_code",
        "reduce_code",
        "membership",
        "verify_witnesses",
        "code_of_1d_realization",
        "segment_atom_trace",
        "verify_certificate",
        "builtin_certificates",
    ];
    for op in expected_ops {
        let row = OPERATION_COVERAGE
            .iter()
            .find(|(name, _)| *name == op)
            .unwrap_or_else(|| panic!("operation {op} missing from the dispatch table"));
        assert!(
            reachable.contains(&row.1.to_string()),
            "operation {op} maps to unknown subcommand {}",
            row.1
        );
    }
    assert_eq!(expected_ops.len(), OPERATION_COVERAGE.len());
}

#[test]
fn family_iso_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let l0 = dir.path().join("l0.json").to_string_lossy().into_owned();
    let out = nc(&["family", "Ln", "--n", "0", "--out", &l0, "--quiet"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let c0_code = neural_codes::families::registry("C0").unwrap().code;
    let c0 = write_temp(
        &dir,
        "c0.json",
        &neural_codes::format::serialize_json(&c0_code),
    );
    let out = nc(&["iso", &l0, &c0]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("2->3"));
    assert!(out.stdout.contains("4->5"));

    // Different codes exit 1.
    let p1 = dir.path().join("p1.json").to_string_lossy().into_owned();
    nc(&["family", "Pd", "--d", "1", "--out", &p1]);
    let out = nc(&["iso", &l0, &p1]);
    assert_eq!(out.code, 1);
}

#[test]
fn walk_feasibility_and_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let code = neural_codes::families::registry("example2.3").unwrap().code;
    let path = write_temp(
        &dir,
        "e23.json",
        &neural_codes::format::serialize_json(&code),
    );

    let out = nc(&["walk", &path, "--walk", "13;1235;15;1245;14"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("feasible: false"));
    assert!(out.stdout.contains("(i, m, j) = (2, 3, 4)"));

    let out = nc(&["walk", &path, "--walk", "13;1235;125;1245;14", "--reduce"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("feasible: true"));
    assert!(out.stdout.contains("reduced path: 13, 1235, 125, 1245, 14"));
}

#[test]
fn order_forced_and_strong_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let wheel = neural_codes::families::registry("wheel").unwrap().code;
    let wheel_path = write_temp(
        &dir,
        "wheel.json",
        &neural_codes::format::serialize_json(&wheel),
    );
    let out = nc(&["order-forced", &wheel_path, "--seq", "123;23;234;34;345"]);
    assert_eq!(out.code, 0, "{}", out.stderr);

    let e28 = neural_codes::families::registry("example2.8").unwrap().code;
    let e28_path = write_temp(
        &dir,
        "e28.json",
        &neural_codes::format::serialize_json(&e28),
    );
    let out = nc(&["strong", &e28_path, "--path", "145;45;2456;46;467;47;473"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("walk bound 24"));

    // An overridden bound is echoed.
    let out = nc_with_bound(
        &["strong", &e28_path, "--path", "145;45;2456;46;467;47;473"],
        "30",
    );
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("walk bound 30"));

    // Garbage bound is a usage error.
    let out = nc_with_bound(&["report", "wheel"], "zero");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("NC_WALK_BOUND"));
}

#[test]
fn geometry_subcommands_on_the_bundled_fixture() {
    let r = fixture("p1_open.json");
    let w = fixture("p1_witnesses.json");

    let out = nc(&["geom", "member", &r, "--point", "1/2", "--quiet"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "1bar.2bar.3bar");

    let out = nc(&["geom", "witnesses", &r, &w]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("all pass"));

    let out = nc(&["geom", "code1d", &r, "--quiet"]);
    assert_eq!(out.code, 0);
    let expected =
        neural_codes::format::serialize_json(&neural_codes::families::gen_pd(1).unwrap());
    assert_eq!(out.stdout.trim(), expected);

    let out = nc(&[
        "geom", "trace", &r, "--from", "-3/2", "--to", "1/2", "--quiet",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "1, 1.2bar, 2bar, 1bar.2bar.3bar");
}

#[test]
fn quiet_mode_is_minimal() {
    let out = nc(&["max", &fixture("p1_open.json")]);
    // Realizations are not codes; usage error.
    assert_eq!(out.code, 2);

    let dir = tempfile::tempdir().unwrap();
    let code = neural_codes::families::gen_pd(2).unwrap();
    let path = write_temp(
        &dir,
        "p2.json",
        &neural_codes::format::serialize_json(&code),
    );
    let out = nc(&["max", &path, "--quiet"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.trim(),
        "1.2.3bar, 1.3.2bar, 2.3.1bar, 1bar.2bar.3bar.4bar"
    );
}

#[test]
fn builtin_listing_and_dump() {
    let out = nc(&["cert", "builtin", "--list"]);
    assert_eq!(out.code, 0);
    for name in ["R", "T", "wheel", "example2.8", "Ln:1", "Ln:5"] {
        assert!(out.stdout.contains(name), "missing {name}");
    }
    let out = nc(&["cert", "builtin", "R", "--json"]);
    assert_eq!(out.code, 0);
    let parsed: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(parsed["code"], "R");
}
