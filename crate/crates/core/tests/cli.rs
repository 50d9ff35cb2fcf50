//! End-to-end runs of the command line through `cli::run`.

use tsallis_qi::cli::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tsallis-qi").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn entropy_of_a_fair_coin() {
    let v = json(&["entropy", "--dist", "[0.5,0.5]", "--q", "2", "--output", "json"]);
    assert_eq!(v["tsallis"], 0.5);
    let v = json(&["entropy", "--dist", "[0.1,0.9]", "--q", "1", "--output", "json"]);
    assert!((v["shannon"].as_f64().unwrap() - 0.325082973391).abs() < 1e-12);
}

#[test]
fn generated_states_feed_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("singlet.json");
    let path = path.to_str().unwrap();
    let (code, _, _) = invoke(&["gen", "singlet", "--out", path]);
    assert_eq!(code, EXIT_OK);

    let v = json(&["cond", "--state", path, "--q", "1", "--output", "json"]);
    assert!((v["value"].as_f64().unwrap() + 2f64.ln()).abs() < 1e-12);
    assert_eq!(v["verdict"], "negative ⇒ entangled");

    let (_, werner, _) = invoke(&["gen", "werner", "--x", "0.5"]);
    let v = json(&["ppt", "--state", werner.trim(), "--output", "json"]);
    assert!((v["min_eig"].as_f64().unwrap() + 0.125).abs() < 1e-12);
    let v = json(&["entropy", "--state", werner.trim(), "--q", "2", "--output", "json"]);
    assert!((v["tsallis"].as_f64().unwrap() - 0.5625).abs() < 1e-12);

    let (_, product, _) = invoke(&["gen", "product", "--pa", "[1,0]", "--pb", "[0.3,0.7]"]);
    let v = json(&["cond", "--state", product.trim(), "--q", "2", "--output", "json"]);
    assert!((v["value"].as_f64().unwrap() - 0.42).abs() < 1e-12);
    assert_eq!(v["verdict"], "nonnegative ⇒ inconclusive");
}

#[test]
fn scan_csv_parses() {
    let (code, out, _) = invoke(&["werner-scan", "--q-grid", "1,2,1000"]);
    assert_eq!(code, EXIT_OK);
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(out.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["q", "x_star", "residual"]);
    let rows: Vec<Vec<f64>> =
        reader.records().map(|r| r.unwrap().iter().map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!((rows[0][1] - 0.747613833446).abs() < 1e-12);
    assert!((rows[1][1] - 1.0 / 3f64.sqrt()).abs() < 1e-11);
    assert!((rows[2][1] - 1.0 / 3.0).abs() < 1e-3);

    let (_, single, _) = invoke(&["werner-scan", "--q-grid", "2"]);
    let data: Vec<&str> = single.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
}

#[test]
fn randomized_commands_are_deterministic() {
    let args = ["positivity", "--samples", "200", "--seed", "42", "--output", "json"];
    let (c1, a, _) = invoke(&args);
    let (c2, b, _) = invoke(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["violations"], 0);
}

#[test]
fn positivity_reports_singlet_control() {
    let v = json(&["positivity", "--samples", "50", "--inject-singlet", "--output", "json"]);
    assert!((v["singlet_control"].as_f64().unwrap() + 2f64.ln()).abs() < 1e-10);
}

#[test]
fn axioms_pass() {
    let (code, out, _) = invoke(&["axioms", "--trials", "50"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(!out.contains("false"));
}

#[test]
fn criteria_are_ordered() {
    let (code, out, _) = invoke(&["criteria", "--output", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("0.707106781187"));
}

#[test]
fn bad_input_is_a_usage_error() {
    let (code, _, err) = invoke(&["entropy", "--dist", "[0.5,0.6]", "--q", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(invoke(&["entropy", "--dist", "[0.5,0.5]"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["entropy", "--dist", "[1]", "--q", "-1"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["cond", "--joint", "[[0.5],[0.5]]", "--state", "x", "--q", "1"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["ppt", "--state", "/no/such/file.json"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["gen", "werner", "--x", "2"]).0, EXIT_USAGE);
    assert_ne!(EXIT_CHECK_FAILED, EXIT_OK);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let (_, stdout, _) = invoke(&["werner-scan", "--q-grid", "0.5,5"]);
    let (code, to_file, _) = invoke(&["werner-scan", "--q-grid", "0.5,5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(to_file.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}
