//! Black-box tests of the `conespec` binary: the exit-code contract,
//! byte-level determinism of every artifact, instance round-trips, and the
//! documented behavior of each subcommand.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde_json::Value;

use conespec_cli::instance::{self, ToleranceSpec};
use conespec_cli::report;

const ORTHANT_2X2: &str =
    r#"{"matrix": [[[2,0],[1,0]],[[1,0],[2,0]]], "cone": {"kind": "orthant", "dim": 2}}"#;
const JORDAN_LITERAL: &str =
    r#"{"matrix": [[[2,0],[1,0]],[[0,0],[2,0]]], "cone": {"kind": "orthant", "dim": 2}}"#;
const ZERO_2X2: &str =
    r#"{"matrix": [[[0,0],[0,0]],[[0,0],[0,0]]], "cone": {"kind": "orthant", "dim": 2}}"#;
const COMPLEXIFIED_IDENTITY: &str = r#"{
    "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]],
    "cone": {"kind": "complexified", "base": {"kind": "orthant", "dim": 2}}
}"#;
const DIAG_3_HALF: &str =
    r#"{"matrix": [[[3,0],[0,0]],[[0,0],[0.5,0]]], "cone": {"kind": "orthant", "dim": 2}}"#;

struct Run {
    code: i32,
    stdout: Vec<u8>,
    stderr: String,
}

fn run_env(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conespec"));
    cmd.args(args)
        .env_remove("CONESPEC_TOLERANCE_PROFILE")
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    } else {
        cmd.stdin(Stdio::null());
    }
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .expect("stdin piped")
            .write_all(text.as_bytes())
            .expect("stdin accepts input");
    }
    let out = child.wait_with_output().expect("binary runs to completion");
    Run {
        code: out.status.code().expect("no signal"),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn run(args: &[&str]) -> Run {
    run_env(args, None, &[])
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("output parses as JSON")
}

/// Parses the `summary: ...` line emitted by the flow subcommand.
fn parse_summary(stdout: &[u8]) -> (f64, i64, String) {
    let text = String::from_utf8_lossy(stdout);
    let line = text
        .lines()
        .rev()
        .find(|l| l.starts_with("summary:"))
        .unwrap_or_else(|| panic!("no summary line in {text:?}"));
    let mut alpha = None;
    let mut nu = None;
    let mut violations = None;
    for token in line.trim_start_matches("summary:").split_whitespace() {
        if let Some(v) = token.strip_prefix("alpha_hat=") {
            alpha = Some(v.parse::<f64>().unwrap());
        } else if let Some(v) = token.strip_prefix("nu_hat=") {
            nu = Some(v.parse::<i64>().unwrap());
        } else if let Some(v) = token.strip_prefix("violations=") {
            violations = Some(v.to_string());
        }
    }
    (alpha.expect("alpha_hat"), nu.expect("nu_hat"), violations.expect("violations"))
}

#[test]
fn exit_code_contract_black_box_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_file(dir.path(), "good.json", ORTHANT_2X2);
    let good = good.to_str().unwrap();
    let nonsquare = write_file(
        dir.path(),
        "nonsquare.json",
        r#"{"matrix": [[[1,0],[2,0],[3,0]],[[4,0],[5,0],[6,0]]], "cone": {"kind": "orthant", "dim": 3}}"#,
    );
    let malformed = write_file(dir.path(), "malformed.json", "{\n  \"matrix\": [[[1,0]],\n}");
    let unknown_key = write_file(
        dir.path(),
        "unknown.json",
        r#"{"matrix": [[[1,0]]], "cone": {"kind": "orthant", "dim": 1}, "surprise": true}"#,
    );
    let mismatched = write_file(
        dir.path(),
        "mismatched.json",
        r#"{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]], "cone": {"kind": "orthant", "dim": 3}}"#,
    );
    let identity = write_file(dir.path(), "identity.json", COMPLEXIFIED_IDENTITY);
    let complex_entries = write_file(
        dir.path(),
        "complex.json",
        r#"{"matrix": [[[1,1],[0,0]],[[0,0],[1,0]]], "cone": {"kind": "orthant", "dim": 2}}"#,
    );
    let on_spectrum = write_file(
        dir.path(),
        "onspec.json",
        r#"{"matrix": [[[3,0],[0,0]],[[0,0],[1.5,0]]], "cone": {"kind": "orthant", "dim": 2}}"#,
    );
    let diag = write_file(dir.path(), "diag.json", DIAG_3_HALF);
    let out = dir.path().join("campaign.json");
    let out = out.to_str().unwrap();

    // (description, args, expected exit code)
    let matrix: Vec<(&str, Vec<&str>, i32)> = vec![
        ("analyze ok", vec!["analyze", good], 0),
        ("analyze non-square", vec!["analyze", nonsquare.to_str().unwrap()], 2),
        ("analyze malformed JSON", vec!["analyze", malformed.to_str().unwrap()], 2),
        ("analyze unknown key", vec!["analyze", unknown_key.to_str().unwrap()], 2),
        ("analyze dimension mismatch", vec!["analyze", mismatched.to_str().unwrap()], 2),
        ("analyze missing file", vec!["analyze", "definitely-not-a-file.json"], 2),
        ("certify pass", vec!["certify", good, "--theorem", "dominance"], 0),
        (
            "certify gap failure",
            vec!["certify", identity.to_str().unwrap(), "--theorem", "dominance"],
            1,
        ),
        (
            "failure beats undecided under strict",
            vec!["certify", identity.to_str().unwrap(), "--theorem", "dominance", "--strict"],
            1,
        ),
        ("certify undecided without strict", vec!["certify", good, "--theorem", "dominance"], 0),
        (
            "certify undecided with strict",
            vec!["certify", good, "--theorem", "dominance", "--strict"],
            4,
        ),
        (
            "split without rho",
            vec!["certify", diag.to_str().unwrap(), "--theorem", "split"],
            2,
        ),
        (
            "split rho out of range",
            vec!["certify", diag.to_str().unwrap(), "--theorem", "split", "--rho", "1.5"],
            2,
        ),
        (
            "rho without split",
            vec!["certify", good, "--theorem", "dominance", "--rho", "0.5"],
            2,
        ),
        (
            "split circle on an eigenvalue",
            vec!["certify", on_spectrum.to_str().unwrap(), "--theorem", "split", "--rho", "0.5"],
            3,
        ),
        (
            "real theorem needs a real matrix",
            vec!["certify", complex_entries.to_str().unwrap(), "--theorem", "real"],
            2,
        ),
        ("gen unknown family", vec!["gen", "--family", "bogus", "--n", "2", "--seed", "1"], 2),
        ("gen oversized", vec!["gen", "--family", "jordan", "--n", "200", "--seed", "1"], 2),
        ("flow x0 outside cone", vec!["flow", good, "--x0", "-1,1"], 2),
        ("flow unchecked x0", vec!["flow", good, "--x0", "-1,1", "--unchecked"], 0),
        ("flow bad tmax", vec!["flow", good, "--tmax", "0.005"], 2),
        (
            "search bad range",
            vec!["search", "--family", "jordan", "--n-range", "5..2", "--seeds", "1", "--out", out],
            2,
        ),
        ("unknown subcommand", vec!["frobnicate"], 2),
    ];

    for (what, args, expected) in matrix {
        let r = run(&args);
        assert_eq!(
            r.code, expected,
            "{what}: expected exit {expected}, got {} (stderr: {})",
            r.code, r.stderr
        );
        if expected != 0 {
            assert!(!r.stderr.is_empty(), "{what}: errors must be reported on stderr");
        }
    }
}

#[test]
fn malformed_json_errors_name_line_and_column() {
    let r = run_env(&["analyze", "-"], Some("{\n  \"matrix\": [[[1,0]],\n}"), &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    assert!(r.stderr.contains("column"), "{}", r.stderr);
}

#[test]
fn analyze_reports_the_textbook_instance() {
    let r = run_env(&["analyze", "-"], Some(ORTHANT_2X2), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["positivity"]["preservation"]["verdict"], "certified");
    assert_eq!(v["assertions"], serde_json::json!([]));
    let r_sigma = v["spectrum"]["spectral_radius"].as_f64().unwrap();
    assert!((r_sigma - 3.0).abs() <= 1e-12 * 3.0, "spectral radius {r_sigma}");
    let dominant_r = v["spectrum"]["dominant"]["r"].as_f64().unwrap();
    assert!((dominant_r - 3.0).abs() <= 1e-8 * 3.0, "dominant value {dominant_r}");
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["tolerances"]["rng"], "splitmix64");
}

#[test]
fn analyze_matches_a_library_built_report_byte_for_byte() {
    use conespec::config::ToleranceProfile;
    use conespec::linalg::eigen_spectrum;
    use conespec::positivity::certify_positive;
    use conespec::theorems::{extract_perron_pair, input_digest, SpectralSummary};

    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("inst.json");
    let gen = run(&[
        "gen",
        "--family",
        "strictly-positive",
        "--n",
        "8",
        "--seed",
        "3",
        "--out",
        inst_path.to_str().unwrap(),
    ]);
    assert_eq!(gen.code, 0, "{}", gen.stderr);

    let cli_report = run(&["analyze", inst_path.to_str().unwrap()]);
    assert_eq!(cli_report.code, 0, "{}", cli_report.stderr);

    let parsed = instance::parse_instance(&std::fs::read_to_string(&inst_path).unwrap()).unwrap();
    let tol = ToleranceProfile::default_profile();
    let cone = parsed.cone.build(&tol).unwrap();
    let data = eigen_spectrum(&parsed.matrix, &tol).unwrap();
    let positivity = certify_positive(&parsed.matrix, &cone, &tol).unwrap();
    let pair = extract_perron_pair(&parsed.matrix, &cone, &tol).unwrap();
    let expected = report::analysis_value(
        &input_digest(&parsed.matrix, &cone),
        &positivity,
        &SpectralSummary::from_data(&data),
        Some(&pair),
        &tol,
        parsed.seed.unwrap(),
    );
    assert_eq!(cli_report.stdout, report::canonical_bytes(&expected));
}

#[test]
fn certify_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("cx.json");
    let gen = run(&[
        "gen", "--family", "complexified", "--n", "3", "--seed", "5", "--out",
        inst.to_str().unwrap(),
    ]);
    assert_eq!(gen.code, 0, "{}", gen.stderr);

    let first = run(&["certify", inst.to_str().unwrap(), "--theorem", "dominance"]);
    let second = run(&["certify", inst.to_str().unwrap(), "--theorem", "dominance"]);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(second.code, 0);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout, "repeated certification must not drift");

    let v = json(&first.stdout);
    assert_eq!(v["positivity"]["rotational"]["method"], "theorem-backed");
    assert_eq!(v["positivity"]["rotational"]["verdict"], "certified");
}

#[test]
fn out_flag_matches_stdout_and_leaves_no_temp_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(dir.path(), "inst.json", ORTHANT_2X2);
    let out_path = dir.path().join("report.json");

    let to_stdout = run(&["analyze", inst.to_str().unwrap()]);
    let to_file = run(&["analyze", inst.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(to_stdout.code, 0);
    assert_eq!(to_file.code, 0);
    assert!(to_file.stdout.is_empty(), "with --out the report must not echo to stdout");
    assert_eq!(std::fs::read(&out_path).unwrap(), to_stdout.stdout);

    let stray: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|name| name.contains("tmp"))
        .collect();
    assert!(stray.is_empty(), "temporary files left behind: {stray:?}");
}

#[test]
fn generated_instances_round_trip_and_regenerate_identically() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["positive", "strictly-positive", "complexified", "jordan", "transformed"] {
        let path = dir.path().join(format!("{family}.json"));
        let first = run(&["gen", "--family", family, "--n", "4", "--seed", "7", "--out",
            path.to_str().unwrap()]);
        assert_eq!(first.code, 0, "{family}: {}", first.stderr);
        let bytes = std::fs::read(&path).unwrap();

        // Regeneration is byte-identical.
        let again = run(&["gen", "--family", family, "--n", "4", "--seed", "7"]);
        assert_eq!(again.code, 0);
        assert_eq!(again.stdout, bytes, "{family}: regeneration drifted");

        // Parsing and re-serializing is the identity on the bytes.
        let parsed = instance::parse_instance(std::str::from_utf8(&bytes).unwrap()).unwrap();
        let rebuilt = instance::instance_value(
            &parsed.matrix,
            &parsed.cone,
            parsed.seed,
            parsed.tolerances.as_ref(),
        );
        assert_eq!(
            report::canonical_bytes(&rebuilt),
            bytes,
            "{family}: parse/serialize must be the identity"
        );
    }
}

#[test]
fn gen_examples_hold() {
    // A size-3 member of the jordan family carries exactly one rank-two
    // chain: some eigenvalue has algebraic multiplicity 2 but geometric 1.
    let dir = tempfile::tempdir().unwrap();
    let j3 = dir.path().join("j3.json");
    assert_eq!(
        run(&["gen", "--family", "jordan", "--n", "3", "--seed", "2", "--out",
            j3.to_str().unwrap()])
        .code,
        0
    );
    let analyzed = run(&["analyze", j3.to_str().unwrap()]);
    assert_eq!(analyzed.code, 0);
    let v = json(&analyzed.stdout);
    let eigs = v["spectrum"]["eigenvalues"].as_array().unwrap();
    let chained: Vec<_> = eigs
        .iter()
        .filter(|e| e["algebraic"] == 2 && e["geometric"] == 1 && e["max_chain_len"] == 2)
        .collect();
    assert_eq!(chained.len(), 1, "expected exactly one rank-two chain: {eigs:?}");

    // The transformed family stays well conditioned.
    let t5 = dir.path().join("t5.json");
    assert_eq!(
        run(&["gen", "--family", "transformed", "--n", "5", "--seed", "1", "--out",
            t5.to_str().unwrap()])
        .code,
        0
    );
    let parsed = instance::parse_instance(&std::fs::read_to_string(&t5).unwrap()).unwrap();
    let cone = parsed
        .cone
        .build(&conespec::config::ToleranceProfile::default_profile())
        .unwrap();
    let cond = cone.representation_condition();
    assert!(cond <= 1e3, "transform condition number {cond} exceeds the family cap");
}

#[test]
fn flow_jordan_chain_raises_the_polynomial_factor() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(dir.path(), "jordan.json", JORDAN_LITERAL);
    let csv_path = dir.path().join("traj.csv");
    let r = run(&[
        "flow",
        inst.to_str().unwrap(),
        "--x0",
        "0,1",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let (alpha, nu, violations) = parse_summary(&r.stdout);
    assert!((alpha - 2.0).abs() <= 1e-2, "alpha_hat {alpha}");
    assert_eq!(nu, 1, "the chain contributes one power of t");
    assert_eq!(violations, "0", "the orthant is preserved along the flow");

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,re_0,im_0,re_1,im_1,log_norm"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200, "default grid has 200 points");
    let times: Vec<f64> =
        rows.iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(times.windows(2).all(|w| w[0] < w[1]), "grid times must increase");
    assert!((times[0] - 0.01).abs() < 1e-12);
    assert!((times[199] - 40.0).abs() < 1e-9);
}

#[test]
fn flow_of_the_zero_operator_is_constant() {
    let r = run_env(&["flow", "-"], Some(ZERO_2X2), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = String::from_utf8_lossy(&r.stdout);
    let data_rows: Vec<&str> =
        text.lines().skip(1).filter(|l| !l.starts_with("summary:")).collect();
    assert_eq!(data_rows.len(), 200);
    let state_of = |row: &str| -> String {
        row.split(',').skip(1).collect::<Vec<_>>().join(",")
    };
    let first = state_of(data_rows[0]);
    for row in &data_rows {
        assert_eq!(state_of(row), first, "states of the zero flow must not move");
    }
    let (alpha, nu, violations) = parse_summary(&r.stdout);
    assert!(alpha.abs() <= 1e-9, "alpha_hat {alpha}");
    assert_eq!(nu, 0);
    assert_eq!(violations, "0");
}

#[test]
fn flow_on_a_positive_instance_reports_zero_violations() {
    let r = run_env(&["flow", "-"], Some(ORTHANT_2X2), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (alpha, _, violations) = parse_summary(&r.stdout);
    assert_eq!(violations, "0");
    assert!((alpha - 3.0).abs() <= 1e-2, "dominant growth rate, got {alpha}");
    let text = String::from_utf8_lossy(&r.stdout);
    assert!(
        text.trim_end().lines().last().unwrap().starts_with("summary:"),
        "summary must be the last stdout line"
    );
}

#[test]
fn split_certification_agrees_with_the_full_space() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(dir.path(), "diag.json", DIAG_3_HALF);

    let split = run(&["certify", inst.to_str().unwrap(), "--theorem", "split", "--rho", "0.5"]);
    assert_eq!(split.code, 0, "{}", split.stderr);
    let split_v = json(&split.stdout);
    let meets = split_v["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["name"] == "cone-meets-outer-subspace")
        .expect("split report records the outer-subspace check");
    assert_eq!(meets["verdict"], "pass");
    let evidence = meets["evidence"].as_str().unwrap();
    assert!(evidence.contains("outer dimension 1"), "{evidence}");

    let full = run(&["certify", inst.to_str().unwrap(), "--theorem", "dominance"]);
    assert_eq!(full.code, 0);
    let full_v = json(&full.stdout);
    let r_split = split_v["spectrum"]["dominant"]["r"].as_f64().unwrap();
    let r_full = full_v["spectrum"]["dominant"]["r"].as_f64().unwrap();
    assert!(
        (r_split - r_full).abs() <= 1e-8 * r_full.abs(),
        "restricted and full dominant values diverged: {r_split} vs {r_full}"
    );
}

#[test]
fn search_campaign_finds_nothing_on_lifted_strictly_positive_instances() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("campaign.json");
    let r = run(&[
        "search",
        "--family",
        "complexified",
        "--n-range",
        "2..6",
        "--seeds",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&std::fs::read(&out).unwrap());
    assert_eq!(v["counts"]["instances_tested"], 250);
    assert_eq!(v["counts"]["eligible"], 250);
    assert_eq!(v["counts"]["findings"], 0);
    assert_eq!(v["counts"]["failures"], 0);
    assert_eq!(v["findings"], serde_json::json!([]));
    assert_eq!(v["multiplicity_histogram"], serde_json::json!([[1, 250]]));
    let first = std::fs::read(&out).unwrap();

    // A resumed run keeps the file byte-identical...
    let resumed = run(&[
        "search", "--family", "complexified", "--n-range", "2..6", "--seeds", "50",
        "--out", out.to_str().unwrap(), "--resume",
    ]);
    assert_eq!(resumed.code, 0, "{}", resumed.stderr);
    assert!(resumed.stderr.contains("resume"), "{}", resumed.stderr);
    assert_eq!(std::fs::read(&out).unwrap(), first);

    // ...and so does a full fresh rerun.
    let fresh = run(&[
        "search", "--family", "complexified", "--n-range", "2..6", "--seeds", "50",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(fresh.code, 0);
    assert_eq!(std::fs::read(&out).unwrap(), first);

    // A different campaign shape ignores the stale file even under --resume.
    let widened = run(&[
        "search", "--family", "complexified", "--n-range", "2..6", "--seeds", "51",
        "--out", out.to_str().unwrap(), "--resume",
    ]);
    assert_eq!(widened.code, 0);
    let v = json(&std::fs::read(&out).unwrap());
    assert_eq!(v["campaign"]["seeds"], 51);
    assert_eq!(v["counts"]["instances_tested"], 255);
}

#[test]
fn search_reports_a_multiplicity_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("campaign.json");
    let r = run(&[
        "search",
        "--family",
        "transformed",
        "--n-range",
        "3..3",
        "--seeds",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&std::fs::read(&out).unwrap());
    assert_eq!(v["counts"]["eligible"], 4);
    assert_eq!(v["multiplicity_histogram"], serde_json::json!([[1, 4]]));
    assert_eq!(v["campaign"]["family"], "transformed");
}

#[test]
fn tolerance_profile_resolution_prefers_instance_over_environment() {
    // Environment selects the strict profile.
    let strict_env = run_env(
        &["analyze", "-"],
        Some(ORTHANT_2X2),
        &[("CONESPEC_TOLERANCE_PROFILE", "strict")],
    );
    assert_eq!(strict_env.code, 0, "{}", strict_env.stderr);
    assert_eq!(json(&strict_env.stdout)["tolerances"]["name"], "strict");

    // An instance-file override wins over the environment.
    let with_override = r#"{
        "matrix": [[[2,0],[1,0]],[[1,0],[2,0]]],
        "cone": {"kind": "orthant", "dim": 2},
        "tolerances": "default"
    }"#;
    let overridden = run_env(
        &["analyze", "-"],
        Some(with_override),
        &[("CONESPEC_TOLERANCE_PROFILE", "strict")],
    );
    assert_eq!(overridden.code, 0, "{}", overridden.stderr);
    assert_eq!(json(&overridden.stdout)["tolerances"]["name"], "default");

    // Unknown profile names are input errors.
    let bad = run_env(
        &["analyze", "-"],
        Some(ORTHANT_2X2),
        &[("CONESPEC_TOLERANCE_PROFILE", "nonsense")],
    );
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("nonsense"), "{}", bad.stderr);
}

#[test]
fn stdin_dash_reads_the_instance() {
    let r = run_env(&["certify", "-", "--theorem", "dominance"], Some(ORTHANT_2X2), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["positivity"]["preservation"]["verdict"], "certified");
}
