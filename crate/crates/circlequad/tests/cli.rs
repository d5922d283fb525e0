//! End-to-end tests of the `circlequad` binary.
//!
//! Everything here goes through `std::process::Command` on the built
//! executable, exercising the contract the docs promise: config assembly
//! (flags, TOML files, flag overrides), the three output formats, the
//! exit-code mapping (`0` success, `2` validation error, `3` numerical
//! failure), and byte-identical re-runs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circlequad"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process should exit, not signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout is one JSON document")
}

// ---------------------------------------------------------------------------
// Success paths and report structure
// ---------------------------------------------------------------------------

#[test]
fn nodes_csv_lists_grid_roles_and_zeros() {
    let out = run(&["nodes", "--q", "0.7", "--n", "12", "--theta0", "pi/6"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "role,index,theta,re,im,subpartition"
    );
    let rows: Vec<&str> = lines.collect();
    let selected = rows.iter().filter(|r| r.starts_with("selected,")).count();
    let discarded = rows.iter().filter(|r| r.starts_with("discarded,")).count();
    let zeros = rows.iter().filter(|r| r.starts_with("zero,")).count();
    assert_eq!(selected + discarded, 12, "one row per grid node");
    assert_eq!(zeros, selected, "one para-orthogonal zero per mimic node");
}

#[test]
fn nodes_json_has_consistent_geometry() {
    let out = run(&[
        "nodes", "--q", "0.7", "--n", "12", "--theta0", "pi/6", "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["kind"], "nodes");
    assert_eq!(v["n"], 12);
    let m = v["m"].as_u64().unwrap() as usize;
    assert_eq!(v["grid"].as_array().unwrap().len(), 12);
    assert_eq!(v["zeros"].as_array().unwrap().len(), m);
    assert_eq!(v["selected_indices"].as_array().unwrap().len(), m);
    assert_eq!(v["discarded_indices"].as_array().unwrap().len(), 12 - m);
    // τ is unimodular.
    let tau_re = v["tau"]["re"].as_f64().unwrap();
    let tau_im = v["tau"]["im"].as_f64().unwrap();
    assert!((tau_re.hypot(tau_im) - 1.0).abs() < 1e-12);
    // Roles in the grid agree with the index lists.
    for (j, node) in v["grid"].as_array().unwrap().iter().enumerate() {
        let in_sel = v["selected_indices"]
            .as_array()
            .unwrap()
            .iter()
            .any(|i| i.as_u64() == Some(j as u64));
        let want = if in_sel { "selected" } else { "discarded" };
        assert_eq!(node["role"], want, "grid index {j}");
    }
}

#[test]
fn theta0_accepts_expressions_and_plain_radians() {
    let expr = run(&["nodes", "--q", "0.6", "--n", "10", "--theta0", "pi/6", "--format", "json"]);
    let rad = run(&[
        "nodes", "--q", "0.6", "--n", "10",
        "--theta0", "0.5235987755982988", "--format", "json",
    ]);
    assert_eq!(code(&expr), 0);
    assert_eq!(code(&rad), 0);
    // `pi/6` and its shortest-roundtrip decimal denote the same f64, so the
    // two reports must agree bit for bit.
    assert_eq!(stdout(&expr), stdout(&rad));
}

#[test]
fn mtable_reproduces_known_feasibility_cells() {
    // m(N, q) at the default anchor θ₀ = π/6: q = 0.8 gives 3 at N = 5 and
    // 6 at N = 10 (reference-table cells that the acceptance suite pins).
    let out = run(&["mtable", "--qs", "0.8", "--ns", "5,10"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q,n,m_max");
    assert_eq!(lines.next().unwrap(), "0.8,5,3");
    assert_eq!(lines.next().unwrap(), "0.8,10,6");
}

#[test]
fn weights_uniform_default_window_and_sum() {
    let out = run(&[
        "weights", "--q", "0.5", "--n", "10", "--mode", "uniform", "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["kind"], "weights");
    assert_eq!(v["mode"], "uniform");
    // Default exponents r = ⌊N/2⌋ = 5, s = N − 1 − r = 4: exact on
    // span{z^{−5}, …, z^{4}}.
    assert_eq!(v["validity"]["lo"], -5);
    assert_eq!(v["validity"]["hi"], 4);
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    // Σ λ_j = μ₀ = 1.
    assert!((v["weight_sum"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["weight_sum"]["im"].as_f64().unwrap().abs() < 1e-12);
}

/// Workspace-root path of a shipped experiment config (tests run with the
/// package directory as CWD).
fn shipped_config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../experiments")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn weights_flags_equal_config_file() {
    let from_config = run(&["weights", "--config", &shipped_config("table2_col1.toml")]);
    let from_flags = run(&[
        "weights", "--q", "0.5", "--n", "10", "--theta0", "pi/3",
        "--mode", "uniform", "--r-exp", "5", "--s-exp", "4",
    ]);
    assert_eq!(code(&from_config), 0, "stderr: {}", stderr(&from_config));
    assert_eq!(code(&from_flags), 0, "stderr: {}", stderr(&from_flags));
    assert_eq!(stdout(&from_config), stdout(&from_flags));
    let header = "index,theta,node_re,node_im,weight_re,weight_im";
    assert!(stdout(&from_flags).starts_with(header));
}

#[test]
fn integrate_json_reports_three_errors_and_reference() {
    let args = [
        "integrate", "--q", "0.6", "--n", "16", "--m", "8",
        "--integrand", "exp", "--theta0", "pi/6",
    ];
    let out = run(&args);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["kind"], "integrate");
    assert_eq!(v["status"], "ok");
    for key in ["error1", "error2", "error3"] {
        let e = v["errors"][key].as_f64().unwrap();
        assert!(e.is_finite() && e >= 0.0, "{key} = {e}");
    }
    assert!(v["reference"]["re"].as_f64().unwrap().is_finite());
    assert!(v["reference"]["im"].as_f64().unwrap().is_finite());
    for rule in ["uniform", "mimic", "mixed"] {
        assert!(v["values"][rule]["re"].as_f64().unwrap().is_finite());
    }
    // Re-running the identical experiment reproduces the report verbatim.
    let again = run(&args);
    assert_eq!(stdout(&out), stdout(&again));
}

#[test]
fn hermite_compare_json_reports_both_errors() {
    let out = run(&[
        "hermite-compare", "--q", "0.4", "--n", "14", "--m", "7",
        "--integrand", "exp-half", "--r", "10", "--seed", "2",
        "--theta0", "0",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["kind"], "hermite-compare");
    assert_eq!(v["seed"], 2);
    let lag = v["lagrange_err"].as_f64().unwrap();
    let herm = v["hermite_err"].as_f64().unwrap();
    assert!(lag.is_finite() && herm.is_finite());
    assert_eq!(v["hermite_improves"], Value::Bool(herm < lag));
}

// ---------------------------------------------------------------------------
// Output destinations and formats
// ---------------------------------------------------------------------------

#[test]
fn output_flag_writes_the_exact_stdout_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nodes.json");
    let args = ["nodes", "--q", "0.3", "--n", "9", "--format", "json"];
    let to_stdout = run(&args);
    assert_eq!(code(&to_stdout), 0);

    let mut with_output: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap();
    with_output.extend_from_slice(&["--output", path_str]);
    let to_file = run(&with_output);
    assert_eq!(code(&to_file), 0);
    assert!(stdout(&to_file).is_empty(), "report went to the file");
    assert_eq!(fs::read_to_string(&path).unwrap(), stdout(&to_stdout));
}

#[test]
fn nodes_svg_is_a_deterministic_svg_document() {
    let args = ["nodes", "--q", "0.7", "--n", "14", "--format", "svg"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    let text = stdout(&a);
    assert!(text.starts_with("<svg xmlns="), "got: {}", &text[..40.min(text.len())]);
    assert!(text.trim_end().ends_with("</svg>"));
    assert_eq!(text, stdout(&b), "SVG must be byte-identical across runs");
}

#[test]
fn svg_without_geometry_is_a_validation_error() {
    let out = run(&["mtable", "--qs", "0.5", "--ns", "8", "--format", "svg"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no SVG geometry"), "stderr: {}", stderr(&out));
}

// ---------------------------------------------------------------------------
// Validation errors (exit 2)
// ---------------------------------------------------------------------------

#[test]
fn missing_required_flags_exit_2() {
    let out = run(&["integrate", "--q", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("missing --n"), "stderr: {}", stderr(&out));
}

#[test]
fn out_of_range_measure_parameter_exits_2() {
    let out = run(&["nodes", "--q", "1.5", "--n", "8"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error:"), "stderr: {}", stderr(&out));
}

#[test]
fn config_kind_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nodes.toml");
    fs::write(&path, "kind = \"nodes\"\nq = 0.5\nn = 8\n").unwrap();
    let out = run(&["mtable", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("config kind mismatch: expected mtable, found nodes"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "kind = \"nodes\"\nq = \"half\"\nn = 8\n").unwrap();
    let out = run(&["nodes", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn flag_override_is_still_validated() {
    // table2_col1.toml pins r + s + 1 = 10; overriding N alone breaks the
    // window arithmetic and must be rejected.
    let out = run(&["weights", "--config", &shipped_config("table2_col1.toml"), "--n", "11"]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("r + s + 1 = N"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn unknown_enum_value_exits_2() {
    // clap rejects the value before the driver ever runs; its usage errors
    // share the validation exit code.
    let out = run(&[
        "integrate", "--q", "0.5", "--n", "10", "--m", "5", "--integrand", "bogus",
    ]);
    assert_eq!(code(&out), 2);
}

// ---------------------------------------------------------------------------
// Numerical failure (exit 3)
// ---------------------------------------------------------------------------

#[test]
fn oracle_stall_prints_partial_report_and_exits_3() {
    // A pole at |α| ≈ 0.943 defeats the contour oracle at 1e−12: the run
    // must still print its partial report, then exit 3.
    let out = run(&[
        "integrate", "--q", "0.9", "--n", "10", "--m", "4",
        "--integrand", "pole-near", "--r", "6", "--accuracy", "1e-12",
        "--format", "json",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("partial report"), "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["status"], "no-convergence");
    assert!(v["errors"].is_null());
    assert!(v["oracle_gap"].as_f64().unwrap() > 0.0);
    // Rule values are still present in the partial report.
    assert!(v["values"]["mixed"]["re"].as_f64().unwrap().is_finite());
}

// ---------------------------------------------------------------------------
// reproduce-all
// ---------------------------------------------------------------------------

fn write_fixture_configs(dir: &Path) {
    fs::write(
        dir.join("01_weights.toml"),
        "kind = \"weights\"\nmode = \"uniform\"\nq = 0.5\nn = 10\ntheta0 = \"pi/3\"\n",
    )
    .unwrap();
    fs::write(
        dir.join("02_nodes.toml"),
        "kind = \"nodes\"\nq = 0.7\nn = 12\ntheta0 = \"pi/6\"\n",
    )
    .unwrap();
}

#[test]
fn reproduce_all_writes_every_format_in_filename_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_dir = dir.path().join("configs");
    let out_dir = dir.path().join("out");
    fs::create_dir(&cfg_dir).unwrap();
    write_fixture_configs(&cfg_dir);

    let args = [
        "reproduce-all",
        "--config-dir",
        cfg_dir.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ];
    let out = run(&args);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("01_weights: ok"), "line: {}", lines[0]);
    assert!(lines[1].starts_with("02_nodes: ok"), "line: {}", lines[1]);

    for name in ["01_weights.csv", "01_weights.json", "02_nodes.csv", "02_nodes.json"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    // Node geometry additionally renders SVG; the weight table does not.
    assert!(out_dir.join("02_nodes.svg").exists());
    assert!(!out_dir.join("01_weights.svg").exists());

    // Re-running regenerates byte-identical artifacts.
    let before = fs::read(out_dir.join("02_nodes.json")).unwrap();
    let again = run(&args);
    assert_eq!(code(&again), 0);
    assert_eq!(stdout(&again), text);
    assert_eq!(fs::read(out_dir.join("02_nodes.json")).unwrap(), before);
}

#[test]
fn reproduce_all_on_empty_dir_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "reproduce-all",
        "--config-dir",
        dir.path().to_str().unwrap(),
        "--out-dir",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no .toml experiment configs"));
}
